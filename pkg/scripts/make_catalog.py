"""Regenerate the catalog data files in src/flatsys/data.

Coordinates are written with full double precision; the closed form of each
coordinate is recorded in a comment next to it.
"""

import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "flatsys" / "data"
S3 = math.sqrt(3.0)


def fmt(x):
    r = repr(float(x))
    return "0.0" if r == "-0.0" else r


def polygon_file(name, header, polygons, glue):
    lines = [f"# {line}" for line in header]
    lines.append(f"surface {name}")
    for pid, pts in polygons:
        lines.append(f"polygon {pid}")
        for (x, y), (cx, cy) in pts:
            lines.append(f"v {fmt(x)} {fmt(y)}  # ({cx}, {cy})")
    for a, b in glue:
        lines.append(f"glue {a} {b}")
    return "\n".join(lines) + "\n"


def perm_file(name, header, sigma, tau, cell, cell_forms):
    lines = [f"# {line}" for line in header]
    lines.append(f"permsurface {name}")
    lines.append(f"sigma {sigma}")
    lines.append(f"tau {tau}")
    lines.append("cell " + " ".join(fmt(c) for c in cell) + "  # " + " ".join(cell_forms))
    return "\n".join(lines) + "\n"


EQ_CELL = (1.0, 0.0, 0.5, S3 / 2)
EQ_FORMS = ("1", "0", "1/2", "sqrt(3)/2")


def x10():
    h = (S3, "sqrt(3)")
    bottom = [((float(i), 0.0), (str(i), "0")) for i in range(5)]
    top = [((float(i), h[0]), (str(i), h[1])) for i in range(4, -1, -1)]
    pts = bottom + top
    glue = [("X.e4", "X.e9"), ("X.e5", "X.e2"), ("X.e6", "X.e3"),
            ("X.e7", "X.e0"), ("X.e8", "X.e1")]
    header = [
        "Genus 2, two cone points of angle 4pi, area 4*sqrt(3).",
        "Cylinder [0,4] x [0,sqrt(3)]; left and right sides glued, the unit",
        "top segments glued to the bottom ones with the halves swapped.",
    ]
    return polygon_file("x10", header, [("X", pts)], glue)


def maxratio():
    r13 = math.sqrt(13.0)
    a = (r13 - 3) / 2
    af = "a"
    H = [
        ((a, 0.0), (af, "0")),
        ((1 - a, 0.0), ("1-a", "0")),
        ((1 - a / 2, a * S3 / 2), ("1-a/2", "a*sqrt(3)/2")),
        ((0.5 + a / 2, S3 / 2 - a * S3 / 2), ("1/2+a/2", "(1-a)*sqrt(3)/2")),
        ((0.5 - a / 2, S3 / 2 - a * S3 / 2), ("1/2-a/2", "(1-a)*sqrt(3)/2")),
        ((a / 2, a * S3 / 2), ("a/2", "a*sqrt(3)/2")),
    ]
    K = [((-x, -y), ("-" + cx, "-" + cy)) for (x, y), (cx, cy) in H]
    glue = [(f"H.e{i}", f"K.e{i}") for i in range(6)]
    header = [
        "Genus 2, two cone points of angle 4pi.",
        "Two point-symmetric hexagons: a unit equilateral triangle with its",
        "corners cut at depth a = (sqrt(13)-3)/2, and its negative.",
        "Parallel sides glued by translation.",
    ]
    return polygon_file("maxratio-h11", header, [("H", H), ("K", K)], glue)


def torus(name, cell, forms):
    return perm_file(name, ["Flat torus, one marked point."], "(1)", "(1)", cell, forms)


def reversal(lo, hi):
    """Cycle notation of the involution reversing the block lo..hi."""
    out = ""
    while lo < hi:
        out += f"({lo} {hi})"
        lo, hi = lo + 1, hi - 1
    return out


def hyperelliptic_pair(g):
    """sigma cycles all 2g-1 cells; tau reverses the blocks 1..g and g+1..2g-1."""
    n = 2 * g - 1
    sigma = "(" + " ".join(str(i) for i in range(1, n + 1)) + ")"
    return sigma, reversal(1, g) + reversal(g + 1, n)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    files = {
        "x10": x10(),
        "maxratio-h11": maxratio(),
        "square-torus": torus("square-torus", (1.0, 0.0, 0.0, 1.0), ("1", "0", "0", "1")),
        "hex-torus": torus("hex-torus", EQ_CELL, EQ_FORMS),
        "equilateral-h2": perm_file(
            "equilateral-h2", ["Genus 2, one cone point of angle 6pi, six unit equilateral triangles."],
            "(1 2 3)", "(1 2)", EQ_CELL, EQ_FORMS),
        "genus3-15": perm_file(
            "genus3-15",
            ["Genus 3, one zero, equilateral cells.",
             "tau = (1 5 2 4 3)^-1 so that sigma, tau and sigma*tau are fixed-point free."],
            "(1 2 3 4 5)", "(1 3 4 2 5)", EQ_CELL, EQ_FORMS),
        "genus4-21": perm_file("genus4-21", ["Genus 4, one zero, equilateral cells."],
                               "(1 2 3 4 5 6 7)", "(1 3 6 4 5 2 7)", EQ_CELL, EQ_FORMS),
        "genus5-27": perm_file("genus5-27", ["Genus 5, one zero, equilateral cells."],
                               "(1 2 3 4 5 6 7 8 9)", "(1 4 6 3 7 9 2 8 5)", EQ_CELL, EQ_FORMS),
    }
    for g in range(2, 7):
        s, t = hyperelliptic_pair(g)
        files[f"hyperelliptic-g{g}"] = perm_file(
            f"hyperelliptic-g{g}",
            [f"Genus {g}, one zero, hyperelliptic, {2 * g - 1} equilateral cells;",
             "exactly two cylinders of girth equal to the systole."],
            s, t, EQ_CELL, EQ_FORMS)
    for name, text in files.items():
        (OUT / f"{name}.surf").write_text(text)


if __name__ == "__main__":
    main()
