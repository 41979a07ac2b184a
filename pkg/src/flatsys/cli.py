"""Command-line front end.

Every subcommand takes a surface as ``catalog:<name>`` or a path to a
surface file and prints a JSON report (or writes it with ``--out``).

Exit codes: 0 success, 2 bad input, 3 search budget exceeded, 4 a bound
check failed in ``verify-paper``, 1 any other library error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from . import __version__
from .catalog import catalog, catalog_names
from .errors import BudgetExceeded, FlatSysError, InputError
from .numeric import Vec2
from .surface import Triangulation, format_surface, invariants, parse_surface, triangle_presentation, triangulate

SCHEMA = 1
EXIT_OK, EXIT_ERROR, EXIT_INPUT, EXIT_BUDGET, EXIT_BOUND = 0, 1, 2, 3, 4


def load_surface(source: str) -> Triangulation:
    if source.startswith("catalog:"):
        return catalog(source[len("catalog:"):])
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror or exc}") from None
    return triangulate(parse_surface(text))


def _vec(v: Vec2) -> List[float]:
    return [v.x + 0.0, v.y + 0.0]


def _emit(report, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _surface_info(T: Triangulation) -> dict:
    info = invariants(T)
    return {
        "name": T.name,
        "genus": info.genus,
        "stratum": list(info.stratum),
        "area": info.area,
        "vertices": info.num_vertices,
        "edges": info.num_edges,
        "triangles": info.num_triangles,
        "cone_points": [{"id": c.id, "angle": c.angle, "order": c.order} for c in T.cone_points()],
    }


def _class_dict(c) -> dict:
    return {
        "kind": c.kind,
        "length": c.length,
        "holonomy": _vec(c.holonomy),
        "segments": [
            {"start": s.start, "end": s.end, "holonomy": _vec(s.holonomy)} for s in c.representative.segments
        ],
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    T = load_surface(args.surface)
    report = {"schema": SCHEMA, **_surface_info(T)}
    if args.write:
        Path(args.write).write_text(format_surface(triangle_presentation(T)))
    _emit(report, args)
    return EXIT_OK


def cmd_delaunay(args) -> int:
    from .delaunay import delaunay_decomposition, edge_bounds

    T = load_surface(args.surface)
    info = invariants(T)
    C = delaunay_decomposition(T)
    nc, ne, nv = C.counts
    emax, cmax = edge_bounds(info.genus, nv)
    report = {
        "schema": SCHEMA,
        "name": T.name,
        "cells": nc,
        "edges": ne,
        "vertices": nv,
        "edge_bound": emax,
        "cell_bound": cmax,
        "all_triangles": C.all_triangles(),
        "cell_sides": [c.sides for c in C.cells],
        "edge_lengths": sorted(e.length for e in C.edges),
    }
    _emit(report, args)
    return EXIT_OK


def cmd_saddles(args) -> int:
    from .delaunay import delaunay_flip
    from .saddle import enumerate_saddle_connections

    T = delaunay_flip(load_surface(args.surface))
    scs = enumerate_saddle_connections(T, args.length, budget=args.budget)
    report = {
        "schema": SCHEMA,
        "name": T.name,
        "bound": args.length,
        "count": len(scs),
        "connections": [
            {"start": s.start, "end": s.end, "length": s.length, "holonomy": _vec(s.holonomy)} for s in scs
        ],
    }
    _emit(report, args)
    return EXIT_OK


def cmd_systole(args) -> int:
    from .systole import analyze_systoles

    T = load_surface(args.surface)
    t0 = time.perf_counter()
    an = analyze_systoles(T, args.max_segments, args.budget)
    area = an.triangulation.area()
    report = {
        "schema": SCHEMA,
        "name": T.name,
        "systole": an.systole,
        "area": area,
        "ratio": an.systole ** 2 / area,
        "class_count": an.count(),
        "cylinder_classes": an.count("cylinder"),
        "rigid_classes": an.count("rigid"),
        "classes": [_class_dict(c) for c in an.classes],
        "timings": {"seconds": round(time.perf_counter() - t0, 3)},
    }
    _emit(report, args)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .analyze import verify_bounds
    from .involution import find_translation_involution
    from .systole import analyze_systoles

    T = load_surface(args.surface)
    an = analyze_systoles(T, args.max_segments, args.budget)
    inv = find_translation_involution(an.triangulation)
    rep = verify_bounds(T, an, inv)
    report = {
        "schema": SCHEMA,
        "name": T.name,
        "genus": rep.genus,
        "stratum": list(rep.stratum),
        "systole": rep.systole,
        "ratio": rep.ratio,
        "class_count": rep.class_count,
        "involution": None if inv is None else {
            "fixed_points": [fp.describe() for fp in inv.fixed_points],
            "vertex_map": inv.vertex_map,
        },
        "classes": [r.to_dict() for r in rep.classes],
        "checks": [c.to_dict() for c in rep.checks],
        "passed": rep.passed,
    }
    _emit(report, args)
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .systole import Unknown, decompose_direction

    T = load_surface(args.surface)
    if args.vector:
        theta = math.atan2(args.vector[1], args.vector[0])
    else:
        theta = args.direction
    B = args.bound if args.bound else 10 * math.sqrt(T.area())
    res = decompose_direction(T, theta, B)
    report = {"schema": SCHEMA, "name": T.name, "direction": theta % math.pi, "bound": B}
    if isinstance(res, Unknown):
        report.update(periodic=None, reason=res.reason)
    else:
        report.update(
            periodic=True,
            cylinders=[
                {"girth": c.girth, "width": c.width, "area": c.area, "modulus": c.width / c.girth}
                for c in res
            ],
            total_area=sum(c.area for c in res),
        )
    _emit(report, args)
    return EXIT_OK


def cmd_render(args) -> int:
    from .delaunay import delaunay_flip
    from .render import render

    T = load_surface(args.surface)
    classes = fixed = None
    if args.systoles or args.weierstrass:
        from .involution import find_translation_involution
        from .systole import analyze_systoles

        an = analyze_systoles(T)
        T = an.triangulation
        classes = an.classes if args.systoles else None
        if args.weierstrass:
            inv = find_translation_involution(T)
            fixed = inv.fixed_points if inv is not None else []
    elif args.delaunay:
        T = delaunay_flip(T)
    svg = render(T, delaunay=args.delaunay, classes=classes, fixed_points=fixed)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_optimize(args) -> int:
    from .optimize import maximize_ratio

    T = load_surface(args.surface)
    res = maximize_ratio(T, steps=args.steps, seed=args.seed, delta=args.delta)
    if args.trace:
        res.write_trace(args.trace)
    if args.save:
        Path(args.save).write_text(format_surface(triangle_presentation(res.surface, T.name + "-opt")))
    report = {
        "schema": SCHEMA,
        "name": T.name,
        "steps": res.evaluations,
        "seed": args.seed,
        "start_ratio": res.start_ratio,
        "ratio": res.ratio,
        "class_count": res.trace[-1].class_count if res.trace else None,
    }
    _emit(report, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# catalog verification

SQRT3 = math.sqrt(3.0)
_R13 = math.sqrt(13.0) - 3.0

# name -> (class count, ratio, ratio tolerance, extra)
EXPECTED = {
    "x10": (10, 1 / SQRT3, 1e-9, {"cylinder": 4, "rigid": 6, "fixed_points": 6, "swaps_zeros": True}),
    "maxratio-h11": (None, 2 * _R13 ** 2 / (SQRT3 * (1 - 0.75 * _R13 ** 2)), 1e-6, {}),
    "equilateral-h2": (7, 2 / (3 * SQRT3), 1e-9, {}),
    "genus3-15": (15, None, None, {}),
    "genus4-21": (21, None, None, {}),
    "genus5-27": (27, None, None, {}),
    **{f"hyperelliptic-g{g}": (6 * g - 5, None, None, {"fixed_points": 2 * g + 2}) for g in range(2, 7)},
    "square-torus": (2, 1.0, 1e-9, {"systole": 1.0}),
    "hex-torus": (3, 2 / SQRT3, 1e-9, {}),
}


def _check(name, passed, value, expected) -> dict:
    return {"name": name, "passed": bool(passed), "value": value, "expected": expected}


def verify_entry(name: str) -> dict:
    """All checks for one catalog surface (deterministic)."""
    from .analyze import verify_bounds
    from .involution import find_translation_involution
    from .systole import analyze_systoles

    T = catalog(name)
    an = analyze_systoles(T)
    D = an.triangulation
    inv = find_translation_involution(D)
    rep = verify_bounds(T, an, inv, name=name)
    count, ratio, rtol, extra = EXPECTED.get(name, (None, None, None, {}))
    checks = [c.to_dict() for c in rep.checks]
    if count is not None:
        checks.append(_check("class_count", an.count() == count, an.count(), count))
    if ratio is not None:
        ok = abs(an.ratio - ratio) <= rtol * ratio
        checks.append(_check("systolic_ratio", ok, an.ratio, ratio))
    if "systole" in extra:
        ok = abs(an.systole - extra["systole"]) <= 1e-9
        checks.append(_check("systole", ok, an.systole, extra["systole"]))
    for kind in ("cylinder", "rigid"):
        if kind in extra:
            checks.append(_check(f"{kind}_classes", an.count(kind) == extra[kind], an.count(kind), extra[kind]))
    if "fixed_points" in extra:
        k = 0 if inv is None else len(inv.fixed_points)
        checks.append(_check("involution_fixed_points", k == extra["fixed_points"], k, extra["fixed_points"]))
    if extra.get("swaps_zeros"):
        zeros = [c.id for c in D.cone_points() if c.order > 0]
        ok = inv is not None and len(zeros) == 2 and inv.vertex_map[zeros[0]] == zeros[1]
        checks.append(_check("involution_swaps_zeros", ok, ok, True))
    return {
        "name": name,
        "genus": rep.genus,
        "stratum": list(rep.stratum),
        "systole": an.systole,
        "area": D.area(),
        "ratio": an.ratio,
        "class_count": an.count(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def verify_catalog(names: Optional[List[str]] = None, jobs: int = 1) -> dict:
    names = names or catalog_names()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(verify_entry, names))
    else:
        rows = [verify_entry(n) for n in names]
    return {
        "schema": SCHEMA,
        "version": __version__,
        "rows": rows,
        "passed": all(r["passed"] for r in rows),
    }


def _table(report: dict) -> str:
    lines = [f"{'surface':<18} {'g':>2} {'classes':>7} {'ratio':>12} {'checks':>8}  result"]
    for r in report["rows"]:
        n_ok = sum(c["passed"] for c in r["checks"])
        lines.append(
            f"{r['name']:<18} {r['genus']:>2} {r['class_count']:>7} {r['ratio']:>12.9f} "
            f"{n_ok:>3}/{len(r['checks']):<4}  {'PASS' if r['passed'] else 'FAIL'}"
        )
        for c in r["checks"]:
            if not c["passed"]:
                lines.append(f"    failed: {c['name']} value={c['value']} expected={c['expected']}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    report = verify_catalog(args.names or None, args.jobs)
    report = {"schema": report.pop("schema"),
              "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"), **report}
    if args.table:
        sys.stderr.write(_table(report))
    _emit(report, args)
    return EXIT_OK if report["passed"] else EXIT_BOUND


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatsys", description="Systoles of translation surfaces.")
    p.add_argument("--version", action="version", version=f"flatsys {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def surface_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("surface", help="catalog:<name> or a surface file")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = surface_cmd("build", cmd_build, "parse and triangulate; report invariants")
    sp.add_argument("--write", help="also write the triangulation as a surface file")
    surface_cmd("delaunay", cmd_delaunay, "Delaunay cell decomposition")
    sp = surface_cmd("saddles", cmd_saddles, "saddle connections up to a length")
    sp.add_argument("--length", type=float, required=True)
    sp.add_argument("--budget", type=int, default=10_000_000)
    for name, func, help in (("systole", cmd_systole, "systole and its homotopy classes"),
                             ("classify", cmd_classify, "class reports and bound checks")):
        sp = surface_cmd(name, func, help)
        sp.add_argument("--max-segments", type=int, default=4)
        sp.add_argument("--budget", type=int, default=10_000_000)
    sp = surface_cmd("decompose", cmd_decompose, "cylinder decomposition in a direction")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--direction", type=float, help="angle in radians")
    g.add_argument("--vector", type=float, nargs=2, metavar=("X", "Y"))
    sp.add_argument("--bound", type=float, help="separatrix length bound")
    sp = surface_cmd("render", cmd_render, "SVG picture")
    sp.add_argument("--delaunay", action="store_true", help="dashed Delaunay edges")
    sp.add_argument("--systoles", action="store_true", help="bold systole representatives")
    sp.add_argument("--weierstrass", action="store_true", help="fixed points of the involution")
    sp = surface_cmd("optimize", cmd_optimize, "local search for large systolic ratio")
    sp.add_argument("--steps", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--delta", type=float, default=0.02, help="initial step")
    sp.add_argument("--trace", help="CSV trace file")
    sp.add_argument("--save", help="write the best surface as a surface file")
    sp = sub.add_parser("verify-paper", help="check every catalog surface against known values and bounds")
    sp.add_argument("names", nargs="*", help="catalog names (default: all)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--table", action="store_true", help="print a summary table to stderr")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"flatsys: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"flatsys: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FlatSysError as exc:
        print(f"flatsys: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
