"""Command-line front end.

Subcommands: solve (line | nn4 | mpdp | ptas), oracle, gadget (build |
verify), render, bench.  Results are canonical JSON so identical commands
with identical seeds produce identical bytes; wall-clock timings go to
stderr only.  Exit codes: 0 ok, 2 usage or bad input, 3 infeasible result
or failed verification, 4 size cap exceeded.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import gadgets
from .errors import (
    CapExceededError,
    ConstructionError,
    DiskPackError,
    InfeasibleResultError,
    InvalidInputError,
    MalformedGraphError,
)
from .geometry import (
    Instance,
    RadiusAssignment,
    is_feasible,
    objective_area,
    objective_power,
    shape_constant,
)
from .io import canonical_json, instance_to_json, load_instance, metric_to_json, write_result
from .line import solve_line
from .oracle import DEFAULT_N_CAP, solve_exact
from .perimeter import approx_mpdp, approx_nn4
from .ptas import DEFAULT_NODE_CAP, solve_ptas
from .svg import render_svg

MPDP_N_CAP = 6000  # dense assignment matrix beyond this is not worth it


def _result_payload(method, instance, assignment, parameters, guarantee=None, certificate=None):
    report = is_feasible(assignment, 0.0)
    if not report.ok:
        raise InfeasibleResultError(f"result failed feasibility: {report.violations[:3]}")
    return {
        "method": method,
        "parameters": parameters,
        "n": instance.n,
        "dimension": instance.dimension,
        "metric": metric_to_json(instance.metric),
        "radii": [float(r) for r in assignment.radii],
        "power": objective_power(assignment),
        "area": objective_area(assignment),
        "guarantee": guarantee,
        "certificate": certificate,
        "feasible": True,
    }


def _emit(payload, out):
    text = canonical_json(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    t0 = time.perf_counter()
    if args.method == "line":
        assignment = solve_line(instance)
        payload = _result_payload(
            "line", assignment.instance, assignment, {}, guarantee=1.0
        )
    elif args.method == "nn4":
        assignment = approx_nn4(instance)
        payload = _result_payload(
            "nn4", instance, assignment, {}, guarantee=float(2**instance.dimension)
        )
    elif args.method == "mpdp":
        if instance.n > MPDP_N_CAP:
            raise CapExceededError(f"mpdp solver is capped at n = {MPDP_N_CAP}")
        res = approx_mpdp(instance, prune=not args.no_prune)
        cert = {
            "cycles": [list(c) for c in res.cover.cycles],
            "total_weight": res.cover.total_weight,
        }
        payload = _result_payload(
            "mpdp",
            instance,
            res.assignment,
            {"prune": not args.no_prune},
            guarantee=res.guarantee,
            certificate=cert,
        )
    elif args.method == "ptas":
        res = solve_ptas(instance, args.k, node_cap=args.mwis_cap)
        cert = {
            "selection": [
                {"point": c.point, "level": c.level, "radius": c.radius} for c in res.selection
            ],
            "nodes": res.node_count,
        }
        payload = _result_payload(
            "ptas",
            instance,
            res.assignment,
            {"k": args.k, "mwis_cap": args.mwis_cap},
            guarantee=res.guarantee,
            certificate=cert,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInputError(f"unknown method {args.method}")
    print(f"solved in {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    _emit(payload, args.out)
    return 0


def _cmd_oracle(args) -> int:
    instance = load_instance(args.instance)
    res = solve_exact(instance, n_cap=args.max_n)
    payload = _result_payload(
        "oracle",
        instance,
        res.assignment,
        {"max_n": args.max_n},
        guarantee=1.0,
        certificate={
            "active": [list(map(str, c)) for c in res.certificate.active],
            "power": res.certificate.power,
        },
    )
    _emit(payload, args.out)
    return 0


def _cmd_render(args) -> int:
    instance = load_instance(args.instance)
    radii = None
    if args.result:
        data = json.loads(Path(args.result).read_text())
        radii = np.asarray(data["radii"], dtype=float)
        if len(radii) != instance.n:
            raise InvalidInputError("result radii do not match the instance size")
        rep = is_feasible(RadiusAssignment(instance, radii, "manual"), 0.0)
        if not rep.ok:
            raise InfeasibleResultError(f"result is infeasible: {rep.violations[:3]}")
    Path(args.out).write_text(render_svg(instance, radii, labels=args.labels))
    return 0


def _cmd_gadget(args) -> int:
    if args.gadget_cmd == "build":
        formula = gadgets.Formula.from_json(Path(args.formula).read_text())
        layout = gadgets.build_instance(
            formula,
            scale_override=args.scale,
            excess_override=args.excess,
        )
        payload = {
            "layout": layout.to_json(),
            "threshold_power": layout.threshold_power,
            "threshold_power_quoted": layout.threshold_power_quoted,
        }
        _emit(payload, args.out)
        if args.instance_out:
            from .io import save_instance

            save_instance(layout.to_instance(), args.instance_out)
        if args.svg:
            Path(args.svg).write_text(
                render_svg(layout.to_instance(), colors=layout.colors)
            )
        return 0
    if args.gadget_cmd == "verify":
        ok = True
        clause_rep = gadgets.verify_clause_optimum(args.a, args.b)
        print(
            f"clause gadget (a={args.a}, b={args.b}): "
            f"{'ok' if clause_rep.ok else 'FAILED'}; value {clause_rep.expected:.6f}, "
            f"{len(clause_rep.configs)} optima, {len(clause_rep.rejected)} rejected"
        )
        ok &= clause_rep.ok
        for legs in ((2, 2), (4, 2)):
            path = gadgets.cvc_path((0, 0), (0, legs[0]), (legs[1], legs[0]))
            rep = gadgets.verify_path_configs(path)
            print(
                f"L-path legs {legs}: {'ok' if rep.ok else 'FAILED'}; value {rep.value}, "
                f"{rep.n_maximum_configs} maxima, blocked {rep.blocked_unique}"
            )
            ok &= rep.ok
        straight = gadgets.cvc_path((0, 0), (0, 2), (0, 4))
        rep = gadgets.verify_path_configs(straight)
        print(f"straight path: {'ok' if rep.ok else 'FAILED'}; value {rep.value}")
        ok &= rep.ok
        var_rep = gadgets.verify_variable_optimum(args.m, 10)
        print(
            f"variable ring (m={args.m}): {'ok' if var_rep.ok else 'FAILED'}; "
            f"value {var_rep.value}"
        )
        ok &= var_rep.ok
        return 0 if ok else 3
    raise InvalidInputError("gadget needs a sub-command: build or verify")


def _bench_trial(seed: int, trial: int, n_max: int, dimension: int, k: int):
    rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
    n = int(rng.integers(2, n_max + 1))
    pts = rng.uniform(0.0, 1.0, (n, dimension))
    instance = Instance(pts)
    powers = {}
    oracle_power = objective_power(solve_exact(instance).assignment)
    powers["oracle"] = oracle_power
    powers["nn4"] = objective_power(approx_nn4(instance))
    powers["mpdp"] = objective_power(approx_mpdp(instance).assignment)
    try:
        powers["ptas"] = objective_power(solve_ptas(instance, k).assignment)
    except CapExceededError:
        powers["ptas"] = None
    ratios = {
        m: (p / oracle_power if p is not None and oracle_power > 0 else None)
        for m, p in powers.items()
        if m != "oracle"
    }
    return {"trial": trial, "n": n, "powers": powers, "ratios": ratios}


def _cmd_bench(args) -> int:
    if args.n > DEFAULT_N_CAP:
        raise CapExceededError(
            f"bench compares against the oracle, which handles n <= {DEFAULT_N_CAP}"
        )
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = [
            pool.submit(_bench_trial, args.seed, t, args.n, args.dimension, args.k)
            for t in range(args.trials)
        ]
        trials = [f.result() for f in futures]
    trials.sort(key=lambda t: t["trial"])
    summary = {}
    for method in ("nn4", "mpdp", "ptas"):
        vals = [t["ratios"][method] for t in trials if t["ratios"].get(method) is not None]
        if vals:
            summary[method] = {
                "mean": float(np.mean(vals)),
                "min": float(np.min(vals)),
                "max": float(np.max(vals)),
            }
    payload = {
        "seed": args.seed,
        "n_max": args.n,
        "dimension": args.dimension,
        "k": args.k,
        "trials": trials,
        "summary": summary,
    }
    print(f"bench: {args.trials} trials in {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    header = f"{'method':>8} {'mean':>8} {'min':>8} {'max':>8}"
    lines = [header]
    for method, s in sorted(summary.items()):
        lines.append(f"{method:>8} {s['mean']:8.4f} {s['min']:8.4f} {s['max']:8.4f}")
    print("\n".join(lines), file=sys.stderr)
    _emit(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diskpack",
        description="Maximum-area packing of disks/even polygons centered at given points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a solver on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", required=True, choices=["line", "nn4", "mpdp", "ptas"])
    p.add_argument("--k", type=int, default=12, help="quality knob for ptas")
    p.add_argument("--mwis-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-prune", action="store_true", help="keep all pairwise constraints")
    p.add_argument("--out", default=None, help="write result JSON here instead of stdout")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum for small instances")
    p.add_argument("--instance", required=True)
    p.add_argument("--max-n", type=int, default=DEFAULT_N_CAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("render", help="draw an instance (and optional result) as SVG")
    p.add_argument("--instance", required=True)
    p.add_argument("--result", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", action="store_true")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("gadget", help="hardness gadget layouts and verifiers")
    gsub = p.add_subparsers(dest="gadget_cmd", required=True)
    b = gsub.add_parser("build", help="compile a formula file into a point layout")
    b.add_argument("--formula", required=True)
    b.add_argument("--scale", type=int, default=None, help="grid unit a (multiple of 20)")
    b.add_argument("--excess", type=int, default=None, help="override the filler blue count")
    b.add_argument("--out", default=None)
    b.add_argument("--instance-out", default=None, help="also write the plain instance JSON")
    b.add_argument("--svg", default=None)
    b.set_defaults(func=_cmd_gadget)
    v = gsub.add_parser("verify", help="run the gadget optimality verifiers")
    v.add_argument("--a", type=int, default=210)
    v.add_argument("--b", type=int, default=1)
    v.add_argument("--m", type=int, default=1)
    v.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("bench", help="random instances: solver power over oracle power")
    p.add_argument("--n", type=int, required=True, help="largest instance size")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InvalidInputError, MalformedGraphError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleResultError, DiskPackError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
