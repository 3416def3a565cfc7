"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 I/O error, 4 numerical divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import coeffs as cf
from . import dynamics as dyn
from . import stability, suites
from .export import Settings, load_settings, resolve_out, to_json, write_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_DIVERGED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(payload) -> None:
    sys.stdout.write(to_json(payload) + "\n")


def _config(T: int, n: int, eps_trick: float) -> cf.ControlConfig:
    if n < 1:
        raise UsageError("--n must be a positive integer")
    if eps_trick < 0:
        raise UsageError("--eps-trick must be nonnegative")
    try:
        return cf.ControlConfig.optimal(T, n, eps_trick)
    except cf.UnsupportedCycleLength as exc:
        raise UsageError(str(exc)) from exc


def cmd_coeffs(args, settings: Settings) -> int:
    cfg = _config(args.T, args.n, args.eps_trick)
    _emit({
        "T": cfg.T,
        "n": cfg.n,
        "a": list(cfg.a.a),
        "epsilon": list(cfg.eps_strength),
        "mu_bound": cf.mu_bound(cfg.T, cfg.n),
        "prehistory_depth": cfg.prehistory_depth,
    })
    return EXIT_OK


def cmd_region(args, settings: Settings) -> int:
    samples = args.samples or settings.region_samples
    if samples < 16:
        raise UsageError("--samples must be at least 16")
    if args.T < 1:
        raise UsageError("--T must be a positive integer")
    if args.T in (1, 2):
        a = _config(args.T, args.n, args.eps_trick).a
    elif args.eps_trick:
        raise UsageError("--eps-trick needs closed-form weights (T in 1, 2)")
    else:
        raise UsageError("closed-form weights exist only for T in (1, 2)")
    region = stability.multiplier_region(a, args.T, samples)
    omega, curve = region.omega, region.curve
    inv = np.full(curve.shape, np.nan + 0j)
    keep = np.abs(curve) > stability.ORIGIN_EXCLUSION
    inv[keep] = 1.0 / curve[keep]
    all_omega = 2.0 * np.pi * np.arange(samples) / samples
    crossings = stability.negative_axis_crossings(a, args.T)
    prefix = resolve_out(args.out, f"region_T{args.T}_n{args.n}")
    files = []
    try:
        if args.format == "csv":
            files.append(write_csv(f"{prefix}_curve.csv", ("omega", "re", "im"), (all_omega, curve.real, curve.imag)))
            files.append(write_csv(f"{prefix}_region.csv", ("omega", "re_inv", "im_inv"), (omega, inv[keep].real, inv[keep].imag)))
        else:
            path = Path(f"{prefix}.json")
            path.write_text(to_json({
                "omega": all_omega, "re": curve.real, "im": curve.imag,
                "region_omega": omega, "re_inv": inv[keep].real, "im_inv": inv[keep].imag,
            }) + "\n")
            files.append(path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit({
        "T": args.T,
        "n": args.n,
        "samples": samples,
        "negative_axis_crossings": sorted(crossings.tolist()),
        "min_negative_crossing": float(crossings.min()) if crossings.size else None,
        "files": [str(f) for f in files],
    })
    return EXIT_OK


def _map_from_args(args) -> dyn.MapSpec:
    try:
        if args.map == "logistic":
            base = dyn.logistic(args.h)
        else:
            base = dyn.soc(args.ha)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.iterate < 1:
        raise UsageError("--iterate must be a positive integer")
    return dyn.iterate_map(base, args.iterate)


def _cycle_payload(rep: dyn.CycleReport, spec: dyn.MapSpec, claimed: int) -> dict:
    out = {
        "period": rep.period,
        "points": list(rep.points),
        "multiplier": rep.multiplier,
        "converged": rep.converged,
        "residual": rep.residual,
        "trials": list(rep.trials),
        "kink_hit": rep.kink_hit,
    }
    if rep.converged:
        c = dyn.classify_detected(rep, spec, claimed)
        out.update(label=c.label, base_period=c.base_period, base_points=list(c.base_points), base_multiplier=c.base_multiplier)
    return out


def cmd_simulate(args, settings: Settings) -> int:
    spec = _map_from_args(args)
    cfg = _config(args.T, args.n, args.eps_trick)
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    x0 = args.x0
    if x0 is None:
        lo, hi = spec.domain
        x0 = float(np.random.default_rng(args.seed).uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)))
    try:
        traj = dyn.simulate(spec, cfg, x0, args.steps)
    except dyn.DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    tail = max(1, args.steps // 10)
    cycle = None
    P = dyn._minimal_period(traj.x[-max(64, 4 * args.max_period):], args.max_period, settings.detect_tol)
    if P:
        rep = dyn.cycle_from_point(spec, float(traj.x[-1]), P)
        cycle = _cycle_payload(rep, spec, cfg.T * spec.power)
    files = []
    if args.out:
        try:
            k = np.arange(len(traj.x))
            u = np.concatenate([traj.u, [np.nan]])
            files.append(str(write_csv(resolve_out(args.out, "trajectory.csv"), ("k", "x", "u"), (k, traj.x, u))))
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    _emit({
        "map": spec.family,
        "params": spec.params,
        "iterate": spec.power,
        "T": cfg.T,
        "n": cfg.n,
        "eps_trick": cfg.eps_trick,
        "x0": x0,
        "seed": args.seed,
        "steps": args.steps,
        "final_state": float(traj.x[-1]),
        "max_abs_u_tail": float(np.abs(traj.u[-tail:]).max()),
        "cycle": cycle,
        "files": files,
    })
    return EXIT_OK


def cmd_detect(args, settings: Settings) -> int:
    spec = _map_from_args(args)
    cfg = _config(args.T, args.n, args.eps_trick)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    reports = dyn.detect_cycles(
        spec, cfg, args.trials, args.seed, args.max_period,
        transient=args.transient or settings.transient,
        tol=settings.detect_tol, dedup_tol=settings.dedup_tol,
    )
    region = stability.multiplier_region(cfg.a, cfg.T, settings.region_samples)
    payload = []
    for r in reports:
        item = _cycle_payload(r, spec, cfg.T * spec.power)
        item["stabilizable"] = bool(r.converged and region.contains(r.multiplier))
        payload.append(item)
    _emit({"map": spec.family, "params": spec.params, "iterate": spec.power, "T": cfg.T, "n": cfg.n,
           "seed": args.seed, "trials": args.trials, "cycles": payload})
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    if args.suite not in (*suites.SUITES, "all"):
        print(f"unknown suite {args.suite!r}; choose from {', '.join((*suites.SUITES, 'all'))}", file=sys.stderr)
        return EXIT_USAGE
    checks = suites.run_suite(args.suite, settings)
    if args.table:
        width = max(len(c.name) for c in checks)
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.value:.3e}  <= {c.threshold:.1e}", file=sys.stderr)
    passed = all(c.passed for c in checks)
    _emit({"suite": args.suite, "passed": passed, "checks": checks})
    return EXIT_OK if passed else EXIT_FAIL


def _add_control(p: argparse.ArgumentParser) -> None:
    p.add_argument("--T", type=int, required=True, help="cycle length (1 or 2 for closed-form weights)")
    p.add_argument("--n", type=int, required=True, help="controller depth")
    p.add_argument("--eps-trick", type=float, default=0.0, help="shift weight onto a_1 (default 0; 0.005 is a typical value)")


def _add_map(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", choices=("logistic", "soc"), required=True)
    p.add_argument("--h", type=float, default=4.0, help="logistic parameter")
    p.add_argument("--ha", type=float, default=2.0, help="soc parameter")
    p.add_argument("--iterate", type=int, default=1, help="control the m-th iterate of the map")
    p.add_argument("--max-period", type=int, default=8, help="longest period looked for")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fejerdfc", description="Optimal delayed feedback control toolkit.")
    parser.add_argument("--config", help="INI file with a [fejerdfc] section overriding tolerances")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print optimal weights and gains")
    _add_control(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("region", help="export the boundary curve and multiplier region")
    _add_control(p)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default=None, help="output path prefix")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("simulate", help="run one closed-loop trajectory")
    _add_map(p)
    _add_control(p)
    p.add_argument("--x0", type=float, default=None, help="initial state (random from --seed if omitted)")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="trajectory CSV path (k,x,u)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="hunt for stabilized cycles from random starts")
    _add_map(p)
    _add_control(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transient", type=int, default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="identities, extremal, coverage, kernels, univalence or all")
    p.add_argument("--table", action="store_true", help="also print a residual table to stderr")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, settings)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
