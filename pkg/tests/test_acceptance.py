"""End-to-end acceptance criteria; each test prints one ``criterion N: PASS|FAIL`` line."""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from cohomlab.catalog import list_scenarios, load_scenario, so_algebra, so_index, su2_algebra
from cohomlab.cheeger import ChainMetric, SphereChainData, ball_profile, ball_t0, chain_metric_curvature_scan, \
    cheeger_deform, default_lambda, sphere_chain_constants
from cohomlab.cohom1 import abc_positivity_scan, discriminant_identity_residual, formula_crosscheck, \
    sec_lower_bound_check
from cohomlab.lie_core import BlockDecomposition
from cohomlab.profile_builder import build_disc_profile, check_inequality, equalize_profiles, scaling_sweep
from cohomlab.profiles import CheegerCone, interior_grid
from cohomlab.quotients import flat_directions, flat_directions_bruteforce, positive_point_search, \
    quotient_ricci_details, subspace_distance, torus_rank
from cohomlab.sampling import SamplingPlan

TWO_BLOCK = ["su2-berger", "so3-sphere", "so4-stiefel", "so5-two-block"]


def _verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _crosscheck_plan(samples=10_000, n_t=20):
    cs = SamplingPlan().cs
    return SamplingPlan(n_t=n_t, n_pairs=-(-samples // (n_t * len(cs))), cs=cs)


@pytest.fixture(scope="module")
def crosschecks():
    t = time.perf_counter()
    out = {name: formula_crosscheck(load_scenario(name).default_metric(), _crosscheck_plan(), example=name)
           for name in TWO_BLOCK}
    return out, time.perf_counter() - t


def test_criterion_1_formula_vs_oracle(capsys, crosschecks):
    reps, elapsed = crosschecks
    worst = max(r["maxGeneralVsOracle"] for r in reps.values())
    n = min(r["nSamples"] for r in reps.values())
    ok = worst <= 1e-8 and n >= 10_000 and elapsed < 60
    _verdict(capsys, 1, ok, f"max rel diff {worst:.2e}, min samples {n}, {elapsed:.1f} s")


def test_criterion_2_two_block_vs_general(capsys, crosschecks):
    reps, _ = crosschecks
    applies = all(r["twoBlockApplies"] for r in reps.values())
    worst = max(r["maxTwoBlockVsGeneral"] or 0.0 for r in reps.values())
    _verdict(capsys, 2, applies and worst <= 1e-10, f"max rel diff {worst:.2e}, applies everywhere: {applies}")


def test_criterion_3_sec_lower_bound(capsys):
    p = build_disc_profile(1e-4, 1.0, 9)
    plan = SamplingPlan(n_t=80)
    worst_slack, checked, violations, total = np.inf, 0, 0, 0
    for name in TWO_BLOCK:
        rep = sec_lower_bound_check(p.metric(load_scenario(name)), plan, example=name)
        worst_slack = min(worst_slack, rep.extras["minSlack"])
        checked += rep.extras["checkedSamples"]
        violations += rep.extras["boundViolations"]
        total += rep.nSamples
    disc = float(np.max(discriminant_identity_residual(np.linspace(1e-3, 1.0, 1000))))
    ok = violations == 0 and checked >= 100_000 and disc <= 1e-15
    _verdict(capsys, 3, ok, f"{violations} violations in {checked} checked of {total}, "
                            f"min slack {worst_slack:.2e}, identity residual {disc:.1e}")


def test_criterion_4_cheeger_identity(capsys):
    t = np.linspace(1e-3, 10.0, 1000)
    worst = 0.0
    for c0 in (0.5, 1.0, 2.0):
        f0 = CheegerCone(c0).jet(t)[0]
        worst = max(worst, float(np.max(np.abs(cheeger_deform(c0**2 * t**2, 1.0) - f0**2))))
    _verdict(capsys, 4, worst <= 1e-15, f"max abs diff {worst:.1e}")


def test_criterion_5_chain_scan(capsys):
    so3 = BlockDecomposition(so_algebra(3), [[so_index(3, 1, 2)], [so_index(3, 1, 3), so_index(3, 2, 3)]])
    su2 = BlockDecomposition(su2_algebra(), [[0], [1, 2]])
    metrics = [ChainMetric(d, c) for d in (so3, su2) for c in ((1.0, 1.0), (1.0, 2.0), (0.3, 5.0))]
    metrics.append(sphere_chain_constants(SphereChainData(su2, (0.25, 0.25), 0.125)))
    worst = min(chain_metric_curvature_scan(m, n_planes=10_000).minSec for m in metrics)
    _verdict(capsys, 5, worst >= -1e-10, f"min sec {worst:.3e} over {len(metrics)} chains x 10^4 planes")


def test_criterion_6_scaling_laws(capsys):
    t = time.perf_counter()
    cs = SamplingPlan().cs
    plan = SamplingPlan(n_t=32, n_pairs=-(-10_000 // (32 * len(cs))), cs=cs)
    out = scaling_sweep(np.logspace(-8, -2, 7), 1.0, 9, load_scenario("so4-stiefel"), plan)
    elapsed = time.perf_counter() - t
    sr, sp = out["slopeR"]["slope"], out["slopeProduct"]["slope"]
    ok = -0.1867 <= sr <= -0.1467 and 0.62 <= sp <= 0.72 and elapsed < 300
    _verdict(capsys, 6, ok, f"slope R {sr:.4f} in [-0.1867, -0.1467]?, slope product {sp:.4f} in [0.62, 0.72]?, "
                            f"{elapsed:.1f} s")


def test_criterion_7_quotient_ricci(capsys):
    worst, n = np.inf, 0
    g = np.random.default_rng(42)
    for name in ("so4-stiefel", "son-circle"):
        s = load_scenario(name)
        M = build_disc_profile(1e-4, 1.0, s.C).metric(s)
        ctx = s.quotient_context()
        for t in interior_grid(*M.interval, 40):
            if not check_inequality(M.profiles[0], s.C, [t])["passes"]:
                continue
            for i in range(4):
                for _ in range(25):
                    d = quotient_ricci_details(M, ctx, t, c=g.standard_normal(), point=i, rng=g)
                    worst = min(worst, d["bound"])
                    n += 1
    missing = []
    for name, _ in list_scenarios():
        s = load_scenario(name)
        if not s.is_semisimple:
            continue
        M = s.default_metric()
        if positive_point_search(M, s.quotient_context(), interior_grid(*M.interval, 9)) is None:
            missing.append(name)
    ok = n > 0 and worst >= -1e-10 and not missing
    _verdict(capsys, 7, ok, f"min bound {worst:.2e} over {n} samples, scenarios without witness: {missing}")


def test_criterion_8_biquotient(capsys):
    ranks, worst = {}, 0.0
    for name, _ in list_scenarios():
        s = load_scenario(name)
        ctx = s.quotient_context()
        ranks[name] = torus_rank(ctx)
        for i in range(len(ctx.points)):
            F, B = flat_directions(ctx, i), flat_directions_bruteforce(ctx, i)
            worst = max(worst, subspace_distance(F, B) if F.shape == B.shape else np.inf)
    semis = all(ranks[n] == 0 for n, _ in list_scenarios() if load_scenario(n).is_semisimple)
    ok = semis and ranks["torus2-flat"] == 1 and worst <= 1e-10
    _verdict(capsys, 8, ok, f"torus ranks {ranks}, max subspace distance {worst:.1e}")


def test_criterion_9_builder_invariants(capsys):
    failed = []
    for delta in (1e-2, 1e-4, 1e-6, 1e-8):
        for c0 in (0.5, 1.0, 2.0):
            for C in (9, 12, 15):
                try:
                    inv = build_disc_profile(delta, c0, C).invariants()
                    if not inv["passed"]:
                        failed.append((delta, c0, C, "invariants"))
                except Exception as exc:  # noqa: BLE001 - every failure mode counts against the cell
                    failed.append((delta, c0, C, type(exc).__name__))
    s = load_scenario("su2-berger")
    M = ball_profile(SphereChainData(s.decomposition, s.rho, 0.125))
    r = equalize_profiles(M, ball_t0(default_lambda(), M.interval))
    scan = abc_positivity_scan(r.metric, interior_grid(*M.interval, 120), 200)["positive"]
    ok = not failed and scan
    _verdict(capsys, 9, ok, f"{36 - len(failed)}/36 grid cells pass, failing {failed}; su(2) abc scan positive: {scan}")


CLI_RUNS = [
    ["verify-curvature"],
    ["build-profile"],
    ["scaling"],
    ["biquotient"],
    ["cheeger-demo"],
    ["glue"],
]


def _cli(args, threads):
    env = dict(os.environ, COHOMLAB_THREADS=str(threads))
    p = subprocess.run([sys.executable, "-m", "cohomlab.cli", *args, "--seed", "42"], env=env,
                       capture_output=True, text=True)
    return p.returncode, p.stdout


def test_criterion_10_determinism(capsys):
    differ = []
    for args in CLI_RUNS:
        runs = [_cli(args, 1), _cli(args, 1), _cli(args, 8)]
        if len({out for _, out in runs}) != 1 or not runs[0][1]:
            differ.append(args[0])
    _verdict(capsys, 10, not differ, f"{len(CLI_RUNS)} commands, runs differing: {differ}")
