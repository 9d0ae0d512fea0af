"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 usage or parse error.  Rational weights are printed exactly as p/q;
floats appear only in eigenvalue estimates.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import spectra
from .curves import (
    Curve,
    EntersCycle,
    EventuallyTrivial,
    OrbitResult,
    PullbackSystem,
    Unresolved,
)
from .mapdef import MapDefError, load_map
from .verify import SuiteError, run_suite
from .words import Word, WordSyntaxError, geodesic_length

USAGE_ERROR = 2
CHECK_FAILED = 1


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _emit(report: dict, fmt: str, lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))


def _orbit_report(system: PullbackSystem, result: OrbitResult) -> tuple[dict, list[str]]:
    lines = [f"curve: {system.format_curve(result.start)}"]
    steps_json = []
    for i, step in enumerate(result.steps, start=1):
        target = "o" if step.target is None else system.format_curve(step.target)
        lines.append(f"step {i}: target {target}  s {step.s}  t {step.t}  weight {_frac(step.weight)}")
        steps_json.append(
            {"target": None if step.target is None else target, "s": step.s, "t": step.t, "weight": _frac(step.weight)}
        )
    cls = result.classification
    if isinstance(cls, EventuallyTrivial):
        lines.append(f"classification: trivial after {cls.steps} steps")
        cls_json: dict = {"kind": "trivial", "steps": cls.steps}
    elif isinstance(cls, EntersCycle):
        cycle = [system.format_curve(c) for c in cls.cycle]
        weights = [_frac(w) for w in cls.cycle_weights]
        product = _frac(cls.weight_product)
        lines.append(
            f"classification: enters cycle, preperiod {cls.preperiod}, period {len(cls.cycle)}"
        )
        lines.append("cycle: " + " -> ".join(cycle))
        lines.append("cycle weights: " + " ".join(weights))
        lines.append(f"cycle weight product: {product}")
        cls_json = {
            "kind": "cycle",
            "preperiod": cls.preperiod,
            "cycle": cycle,
            "cycle_weights": weights,
            "cycle_weight_product": product,
        }
    else:
        assert isinstance(cls, Unresolved)
        lines.append(f"classification: unresolved after {cls.max_steps} steps")
        cls_json = {"kind": "unresolved", "max_steps": cls.max_steps}
    report = {"steps": steps_json, "classification": cls_json}
    return report, lines


def cmd_orbit(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    mapdef = load_map(args.map)
    system = PullbackSystem(mapdef)
    curve = system.parse_curve(args.curve)
    result = system.orbit(curve, args.max_steps)
    results, lines = _orbit_report(system, result)
    report = {
        "command": "orbit",
        "map": mapdef.name,
        "inputs": {"curve": args.curve, "max_steps": args.max_steps},
        "results": results,
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(report, args.format, [f"map: {mapdef.name}"] + lines)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    mapdef = load_map(args.map)
    system = PullbackSystem(mapdef)
    results = run_suite(args.suite, mapdef, system, n_max=args.n)
    lines = [f"map: {mapdef.name}"]
    suites_json = []
    all_ok = True
    for res in results:
        for item in res.items:
            status = "PASS" if item.ok else "FAIL"
            detail = f"  [{item.detail}]" if item.detail and not item.ok else ""
            lines.append(f"{status} {res.suite}: {item.label}{detail}")
        lines.append(f"suite {res.suite}: {res.passed}/{res.total} pass")
        all_ok = all_ok and res.ok
        suites_json.append(
            {
                "suite": res.suite,
                "passed": res.passed,
                "total": res.total,
                "items": [
                    {"label": it.label, "ok": it.ok, "detail": it.detail}
                    for it in res.items
                ],
            }
        )
    report = {
        "command": "verify",
        "map": mapdef.name,
        "inputs": {"suite": args.suite},
        "results": {"suites": suites_json, "ok": all_ok},
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(report, args.format, lines)
    return 0 if all_ok else CHECK_FAILED


_SWEEP_SYSTEM: PullbackSystem | None = None


def _sweep_init(map_spec: str) -> None:
    global _SWEEP_SYSTEM
    _SWEEP_SYSTEM = PullbackSystem(load_map(map_spec))


def _sweep_classify(payload: tuple[Curve, int]) -> OrbitResult:
    curve, max_steps = payload
    assert _SWEEP_SYSTEM is not None
    return _SWEEP_SYSTEM.orbit(curve, max_steps)


def run_sweep(
    system: PullbackSystem,
    max_len: int,
    max_steps: int,
    jobs: int = 1,
    map_spec: str | None = None,
) -> dict:
    """Classify every curve with conjugator length <= max_len.

    Returns histogram data plus any counterexamples: unresolved orbits,
    rabbit cycles other than the axis 3-cycle, dendrite orbits exceeding
    the 4|w|+3 trivialization bound, and cycles whose weight product is
    at least 1 (an obstruction finding).
    """
    curves = system.enumerate_curves(max_len)
    if jobs > 1 and map_spec is not None:
        payloads = [(c, max_steps) for c in curves]
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_sweep_init, initargs=(map_spec,)
        ) as pool:
            results = list(pool.map(_sweep_classify, payloads, chunksize=256))
    else:
        results = [system.orbit(c, max_steps) for c in curves]

    mapdef = system.mapdef
    axes = frozenset(Curve(i, Word.identity()) for i in range(3))
    histogram: dict[tuple[str, int], int] = {}
    counterexamples: list[str] = []
    for curve, result in zip(curves, results):
        cls = result.classification
        if isinstance(cls, EventuallyTrivial):
            histogram[("trivial", cls.steps)] = histogram.get(("trivial", cls.steps), 0) + 1
            if mapdef.name == "dendrite":
                bound = 4 * geodesic_length(curve.conjugator, [mapdef.third_axis]) + 3
                if cls.steps > bound:
                    counterexamples.append(
                        f"{system.format_curve(curve)}: trivial after {cls.steps} steps, bound {bound}"
                    )
        elif isinstance(cls, EntersCycle):
            histogram[("cycle", cls.preperiod)] = histogram.get(("cycle", cls.preperiod), 0) + 1
            if cls.weight_product >= 1:
                counterexamples.append(
                    f"{system.format_curve(curve)}: obstruction, cycle weight "
                    f"product {_frac(cls.weight_product)} >= 1"
                )
            if mapdef.name == "dendrite":
                counterexamples.append(
                    f"{system.format_curve(curve)}: enters a cycle, expected trivial"
                )
            elif mapdef.name == "rabbit" and frozenset(cls.cycle) != axes:
                counterexamples.append(
                    f"{system.format_curve(curve)}: unexpected cycle "
                    + " -> ".join(system.format_curve(c) for c in cls.cycle)
                )
        else:
            histogram[("unresolved", 0)] = histogram.get(("unresolved", 0), 0) + 1
            counterexamples.append(f"{system.format_curve(curve)}: unresolved")
    return {"curves": curves, "histogram": histogram, "counterexamples": counterexamples}


def cmd_sweep(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    mapdef = load_map(args.map)
    system = PullbackSystem(mapdef)
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    data = run_sweep(system, args.max_len, args.max_steps, jobs=jobs, map_spec=args.map)
    histogram = data["histogram"]
    counterexamples = data["counterexamples"]
    lines = [
        f"map: {mapdef.name}",
        f"curves with conjugator length <= {args.max_len}: {len(data['curves'])}",
    ]
    hist_json = []
    for (kind, n), count in sorted(histogram.items()):
        label = {"trivial": "trivial in", "cycle": "cycle with preperiod", "unresolved": "unresolved after"}[kind]
        lines.append(f"  {label} {n if kind != 'unresolved' else args.max_steps}: {count}")
        hist_json.append({"kind": kind, "steps": n, "count": count})
    for ce in counterexamples:
        lines.append(f"COUNTEREXAMPLE {ce}")
    ok = not counterexamples
    lines.append("sweep: ok" if ok else f"sweep: {len(counterexamples)} counterexamples")
    report = {
        "command": "sweep",
        "map": mapdef.name,
        "inputs": {"max_len": args.max_len, "max_steps": args.max_steps},
        "results": {
            "curve_count": len(data["curves"]),
            "histogram": hist_json,
            "counterexamples": counterexamples,
            "ok": ok,
        },
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(report, args.format, lines)
    return 0 if ok else CHECK_FAILED


def cmd_spectra(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    lines = []
    report_inputs: dict = {"tol": args.tol}
    cycle_product = None
    if args.matrix:
        with open(args.matrix, encoding="utf-8") as fh:
            matrix = spectra.parse_matrix(fh.read())
        report_inputs["matrix"] = args.matrix
        lines.append(f"matrix: {args.matrix} ({matrix.n}x{matrix.n})")
    else:
        mapdef = load_map(args.map)
        system = PullbackSystem(mapdef)
        curve = system.parse_curve(args.cycle_of)
        result = system.orbit(curve, args.max_steps)
        cls = result.classification
        if not isinstance(cls, EntersCycle):
            raise ValueError(
                f"orbit of {args.cycle_of!r} does not enter a cycle (classification: {cls.kind})"
            )
        p = len(cls.cycle)
        rows = [[Fraction(0)] * p for _ in range(p)]
        for i, w in enumerate(cls.cycle_weights):
            rows[(i + 1) % p][i] = w
        matrix = spectra.RationalMatrix.from_rows(rows)
        cycle_product = cls.weight_product
        report_inputs.update({"map": mapdef.name, "curve": args.cycle_of})
        lines.append(f"map: {mapdef.name}")
        lines.append(
            "cycle: " + " -> ".join(system.format_curve(c) for c in cls.cycle)
        )
        lines.append(f"cycle weight product: {_frac(cycle_product)}")
    lam = spectra.leading_eigenvalue(matrix, tol=args.tol)
    contracting = spectra.is_contracting(matrix)
    lines.append(f"leading eigenvalue: {lam:.12g}")
    lines.append(f"contracting: {'true' if contracting else 'false'}")
    results = {
        "leading_eigenvalue": lam,
        "contracting": contracting,
    }
    if cycle_product is not None:
        results["cycle_weight_product"] = _frac(cycle_product)
        results["cycle_length"] = matrix.n
    report = {
        "command": "spectra",
        "inputs": report_inputs,
        "results": results,
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(report, args.format, lines)
    return 0


def cmd_mapinfo(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    mapdef = load_map(args.map)
    parity = mapdef.parity
    lines = [f"map: {mapdef.name}"]
    for g, bit in zip(mapdef.gens, mapdef.parity_bits):
        lines.append(f"generator {g}: parity {bit}")
    lines.append(f"coset representative: {mapdef.gens[parity.transversal_gen]}")
    lines.append(
        f"axes: {mapdef.axis_names[0]}, {mapdef.axis_names[1]}, "
        f"{mapdef.third_axis_name} = {mapdef.format(mapdef.third_axis)}"
    )
    schreier_json = []
    for lhs, rhs in mapdef.schreier_images:
        lines.append(f"schreier {mapdef.format(lhs)} -> {mapdef.format(rhs)}")
        schreier_json.append({"from": mapdef.format(lhs), "to": mapdef.format(rhs)})
    report = {
        "command": "mapinfo",
        "map": mapdef.name,
        "results": {
            "generators": list(mapdef.gens),
            "parity": list(mapdef.parity_bits),
            "coset_representative": mapdef.gens[parity.transversal_gen],
            "axes": list(mapdef.axis_names),
            "third_axis_word": mapdef.format(mapdef.third_axis),
            "schreier": schreier_json,
        },
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(report, args.format, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvepull",
        description="Exact pullback dynamics of curves under quadratic Thurston maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_map: bool = True) -> None:
        if with_map:
            p.add_argument("--map", required=True, help="built-in name, file path, or name on CURVEPULL_MAP_PATH")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_orbit = sub.add_parser("orbit", help="pullback orbit of one curve")
    add_common(p_orbit)
    p_orbit.add_argument("--curve", required=True, help="AXIS or AXIS^(WORD)")
    p_orbit.add_argument("--max-steps", type=int, default=1000)
    p_orbit.set_defaults(func=cmd_orbit)

    p_verify = sub.add_parser("verify", help="check a built-in map against its reference identities")
    add_common(p_verify)
    p_verify.add_argument(
        "--suite", required=True, choices=("table7", "recursions", "prop84", "lemma83", "all")
    )
    p_verify.add_argument("--n", type=int, default=12, help="depth for the prop84 suite")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="classify all curves up to a conjugator length")
    add_common(p_sweep)
    p_sweep.add_argument("--max-len", type=int, required=True)
    p_sweep.add_argument("--max-steps", type=int, default=1000)
    p_sweep.add_argument("--jobs", type=int, default=None, help="worker processes; default: available parallelism")
    p_sweep.set_defaults(func=cmd_sweep)

    p_spectra = sub.add_parser("spectra", help="leading eigenvalue and exact contraction verdict")
    p_spectra.add_argument("--matrix", help="matrix file: first line n, then n rows of rationals")
    p_spectra.add_argument("--cycle-of", dest="cycle_of", help="curve whose orbit cycle matrix to analyze")
    p_spectra.add_argument("--map", help="map for --cycle-of")
    p_spectra.add_argument("--max-steps", type=int, default=1000)
    p_spectra.add_argument("--tol", type=float, default=1e-10)
    p_spectra.add_argument("--format", choices=("text", "json"), default="text")
    p_spectra.set_defaults(func=cmd_spectra)

    p_info = sub.add_parser("mapinfo", help="show a map definition")
    add_common(p_info)
    p_info.set_defaults(func=cmd_mapinfo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "spectra":
        if bool(args.matrix) == bool(args.cycle_of):
            parser.error("spectra needs exactly one of --matrix or --cycle-of")
        if args.cycle_of and not args.map:
            parser.error("--cycle-of requires --map")
        if not (args.tol > 0 and math.isfinite(args.tol)):
            parser.error("--tol must be a positive finite number")
    if getattr(args, "max_steps", 1) < 1:
        parser.error("--max-steps must be at least 1")
    try:
        return args.func(args)
    except (MapDefError, SuiteError, WordSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
