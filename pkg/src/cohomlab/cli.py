"""Command-line entry point: ``cohomlab <command> [options]``.

Each command prints (or writes with --out) a JSON report
``{version, command, config, results, timings}`` and exits 0 when every asserted
invariant holds, 2 when one fails and 1 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from .catalog import list_scenarios, load_scenario, load_scenario_file
from .errors import CohomLabError, UnknownScenarioError
from .sampling import DEFAULT_SEED, SamplingPlan

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

SCALING_WINDOWS = {"slopeR": (-0.1867, -0.1467), "slopeProduct": (0.62, 0.72)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_deltas(spec: str) -> list:
    """"start:end:logstepN" (N log-spaced points, both ends included) or a comma list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3 or not parts[2].startswith("logstep"):
            raise UsageError(f"bad range spec {spec!r}; expected start:end:logstepN")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2][len("logstep"):])
        except ValueError as exc:
            raise UsageError(f"bad range spec {spec!r}") from exc
        if lo <= 0 or hi <= 0 or n < 1:
            raise UsageError("range ends must be positive and N >= 1")
        if n == 1:
            if lo != hi:
                raise UsageError("logstep1 needs start == end")
            return [lo]
        return [float(v) for v in np.logspace(np.log10(lo), np.log10(hi), n)]
    try:
        vals = [float(v) for v in spec.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad delta list {spec!r}") from exc
    if not vals or any(v <= 0 for v in vals):
        raise UsageError("deltas must be positive")
    return vals


def _scenario(args, default: str):
    if getattr(args, "scenario_file", None):
        return load_scenario_file(args.scenario_file)
    name = getattr(args, "scenario", None) or default
    try:
        return load_scenario(name)
    except UnknownScenarioError as exc:
        raise UsageError(f"unknown scenario {name!r}; known: {[n for n, _ in list_scenarios()]}") from exc


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) for v in r])


def _plan(args, n_t: int, cs=None) -> SamplingPlan:
    """Spread --samples over n_t slices and the c values."""
    base = SamplingPlan(n_t=n_t, seed=args.seed)
    cs = base.cs if cs is None else cs
    n_pairs = max(1, -(-args.samples // (n_t * len(cs))))
    return SamplingPlan(n_t=n_t, n_pairs=n_pairs, cs=cs, seed=args.seed)


# commands: each returns (results, passed)


def cmd_verify_curvature(args):
    from .cohom1 import formula_crosscheck

    s = _scenario(args, "so4-stiefel")
    M = s.default_metric(args.c0)
    r = formula_crosscheck(M, _plan(args, 20), example=s.name)
    ok = r["maxGeneralVsOracle"] <= args.tol
    if r["twoBlockApplies"]:
        ok = ok and r["maxTwoBlockVsGeneral"] <= args.tol
    return r, ok


def cmd_build_profile(args):
    from .profile_builder import build_disc_profile, check_inequality

    p = build_disc_profile(args.delta, args.c0, args.C)
    inv = p.invariants()
    ts = np.linspace(*p.interval, args.grid)
    f, fp, fpp = p.f.jet(ts)
    ineq = check_inequality(p.f, p.C, ts)["ineq"]
    if args.csv:
        _write_csv(args.csv, ["t", "f", "f_prime", "f_double_prime", "ineq_margin"], zip(ts, f, fp, fpp, ineq))
    res = {"delta": p.delta, "c0": p.c0, "C": p.C, "R0": p.R0, "R": p.R, "E": p.E,
           "invariants": inv, "profile": p.to_json(), "csv": args.csv}
    return res, bool(inv["passed"])


def cmd_scaling(args):
    from .profile_builder import scaling_sweep

    s = _scenario(args, "so4-stiefel")
    deltas = parse_deltas(args.deltas)
    out = scaling_sweep(deltas, args.c0, args.C, s, _plan(args, 32))
    checks = {}
    for key, (lo, hi) in SCALING_WINDOWS.items():
        if key in out:
            checks[key] = {"value": out[key]["slope"], "window": [lo, hi], "inside": lo <= out[key]["slope"] <= hi}
    out["checks"] = checks
    if args.csv:
        cols = ["delta", "R0", "R", "certifiedMinSec", "diamEst", "product"]
        _write_csv(args.csv, cols, ([r[c] for c in cols] for r in out["rows"]))
        out["csv"] = args.csv
    return out, all(c["inside"] for c in checks.values())


def cmd_biquotient(args):
    from .profiles import interior_grid
    from .quotients import flat_direction_rate, positive_point_search, torus_rank

    s = _scenario(args, "so4-stiefel")
    ctx = s.quotient_context(n_points=args.grid, seed=args.seed)
    rank = torus_rank(ctx, min_points=args.grid)
    rate = flat_direction_rate(ctx, args.grid, args.seed)
    M = s.default_metric()
    wit = positive_point_search(M, ctx, interior_grid(*M.interval, 9), seed=args.seed)
    res = {"torusRank": rank, "flatDirectionRate": rate, "ricciPositiveWitness": wit,
           "semisimple": s.is_semisimple, "orthogonalityResidual": ctx.orthogonality_residual()}
    return res, res["orthogonalityResidual"] < 1e-10


def cmd_cheeger_demo(args):
    from .cheeger import cheeger_family_scan, convex_warp_metric, product_trend_ok

    s = _scenario(args, "so4-stiefel")
    M = convex_warp_metric(s) if args.warp == "convex" else s.default_metric()
    deltas = parse_deltas(args.deltas) if args.deltas else [2.0 ** -k for k in range(0, 21, 2)]
    reps = cheeger_family_scan(M, deltas, _plan(args, 32), kappa=s.kappa, example=s.name)
    rows = [(r.extras["delta"], r.minSec, r.extras["diamEst"], r.extras["product"]) for r in reps]
    if args.csv:
        _write_csv(args.csv, ["delta", "min_sec", "diam_est", "product"], rows)
    ok = product_trend_ok(reps)
    return {"warp": args.warp, "reports": [r.to_json() for r in reps], "trendOk": ok, "csv": args.csv}, ok


def cmd_glue(args):
    from .profile_builder import GlueSide, build_disc_profile, glue_check

    left = _scenario(args, "so4-stiefel")
    right = load_scenario(args.right) if args.right else left
    pl = build_disc_profile(args.delta, args.c0, args.C)
    pr = pl if args.delta_right is None else build_disc_profile(args.delta_right, args.c0, args.C)
    rep = glue_check(GlueSide(pl, left), GlueSide(pr, right), _plan(args, 64), example=left.name)
    ok = rep.extras["secBoundHolds"] and rep.extras["ricciBoundHolds"]
    return rep.to_json(), ok


COMMANDS = {
    "verify-curvature": cmd_verify_curvature,
    "build-profile": cmd_build_profile,
    "scaling": cmd_scaling,
    "biquotient": cmd_biquotient,
    "cheeger-demo": cmd_cheeger_demo,
    "glue": cmd_glue,
}

# keys that never enter the echoed config (they cannot change results)
_NOT_CONFIG = {"command", "out", "timings"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", "--example", dest="scenario", help="catalog scenario name")
    common.add_argument("--scenario-file", help="JSON scenario file (overrides --scenario)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=10000)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte identity)")

    p = _Parser(prog="cohomlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify-curvature", parents=[common], help="general formula vs oracle vs two-block formula")
    v.add_argument("--c0", type=float, default=None)

    b = sub.add_parser("build-profile", parents=[common], help="disc warping profile and its invariants")
    b.add_argument("--delta", type=float, default=1e-4)
    b.add_argument("--c0", type=float, default=1.0)
    b.add_argument("--C", type=int, default=9)
    b.add_argument("--grid", type=int, default=401)
    b.add_argument("--csv", help="CSV path for t, f, f_prime, f_double_prime, ineq_margin")

    s = sub.add_parser("scaling", parents=[common], help="R(delta) and Sec*diam^2 power laws")
    s.add_argument("--deltas", default="1e-8:1e-2:logstep7")
    s.add_argument("--c0", type=float, default=1.0)
    s.add_argument("--C", type=int, default=9)
    s.add_argument("--csv")

    q = sub.add_parser("biquotient", parents=[common], help="torus rank, flat directions, Ricci witness")
    q.add_argument("--grid", type=int, default=32, help="number of sample points in the group")

    c = sub.add_parser("cheeger-demo", parents=[common], help="Cheeger deformation ladder")
    c.add_argument("--deltas", default=None, help="range spec or comma list (default 2^0 ... 2^-20)")
    c.add_argument("--warp", choices=["convex", "cone"], default="convex")
    c.add_argument("--csv")

    g = sub.add_parser("glue", parents=[common], help="glue two disc bundles and bound the curvature")
    g.add_argument("--right", help="scenario for the second side (default: same)")
    g.add_argument("--delta", type=float, default=1e-4)
    g.add_argument("--delta-right", type=float, default=None)
    g.add_argument("--c0", type=float, default=1.0)
    g.add_argument("--C", type=int, default=9)
    return p


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.ndarray):
        return _jsonable(o.tolist())
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        o = float(o)
    if isinstance(o, float) and not np.isfinite(o):
        return repr(o)
    return o


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    t0 = time.perf_counter()
    try:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        results, ok = COMMANDS[args.command](args)
        code = EXIT_OK if ok else EXIT_FAIL
    except UsageError as exc:
        print(f"cohomlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cohomlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CohomLabError as exc:
        results, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    elapsed = time.perf_counter() - t0
    report = {
        "version": __version__,
        "command": args.command,
        "config": config,
        "results": results,
        "timings": {"wallSeconds": elapsed} if args.timings else None,
    }
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code != EXIT_OK:
        print(f"cohomlab: {args.command}: assertion failed", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
