"""Runtime verification suite behind ``annihilate verify``.

A faster mirror of the acceptance tests: exact-law equivalences, the star
master identity, the core-count coupling, complete-graph dominance, the
universal asymmetric-speed bounds, the M/D comparison, and the
displacement oracle.  Each check returns a TestVerdict; the CLI renders
them as a pass/fail table.
"""

from __future__ import annotations

import math

import numpy as np

from . import laws
from .comparison import coupled_core_walk, sample_displacement
from .dynamics import SimulationParams, run_many, run_trajectory, verify_master_identity
from .seeding import derive_trial_seed, mix64
from .state import SystemKind, Topology, TopologyKind, complete, star
from .stats import (
    SampleSummary,
    TestVerdict,
    VerdictKind,
    bound_check,
    dkw_equality_test,
    dominance_check,
)


def _batch(topology, system, p, trials, seed, jobs, point=0):
    params = SimulationParams(topology, system, p=p)
    seeds = [derive_trial_seed(seed, point, t) for t in range(trials)]
    return run_many(params, seeds, jobs=jobs)


def _pass_fail(name_ok: bool, statistic: float, threshold: float, details: str) -> TestVerdict:
    return TestVerdict(
        kind=VerdictKind.BOUND_CHECK,
        statistic=statistic,
        threshold=threshold,
        passed=name_ok,
        details=details,
    )


def run_verification_suite(quick: bool = False, seed: int = 20240901,
                           jobs: int = 1) -> list[tuple[str, TestVerdict]]:
    scale = 1 if quick else 4
    trials_dkw = 2000 * scale
    alpha = 0.01
    out: list[tuple[str, TestVerdict]] = []
    rng = np.random.default_rng(seed)

    # exact-law equivalence, one-type on both graphs (n=4)
    for name, topo, law in (
        ("one_type_complete_law", complete(4), laws.one_type_complete_law(4)),
        ("one_type_star_law", star(4), laws.one_type_star_law(4)),
    ):
        batch = _batch(topo, SystemKind.ONE_TYPE, 0.5, trials_dkw, seed, jobs)
        ref = laws.sample_law(law, rng, size=trials_dkw)
        out.append((name, dkw_equality_test(batch.extinction_times, ref, alpha)))

    # p=1 equality on both graphs (n=4)
    for name, topo in (("p1_complete_law", complete(4)), ("p1_star_law", star(4))):
        batch = _batch(topo, SystemKind.TWO_TYPE, 1.0, trials_dkw, seed + 1, jobs)
        law = laws.two_type_p1_law(topo.kind, 4)
        ref = laws.sample_law(law, rng, size=trials_dkw)
        out.append((name, dkw_equality_test(batch.extinction_times, ref, alpha)))

    # master identity + T >= 2n, star, both speed regimes
    runs = 50 if quick else 200
    for p in (0.5, 0.9):
        params = SimulationParams(star(100), SystemKind.TWO_TYPE, p=p,
                                  record_series=True)
        bad = 0
        for t in range(runs):
            traj = run_trajectory(params, derive_trial_seed(seed + 2, 0, t))
            if not verify_master_identity(traj, 100).holds:
                bad += 1
        out.append((f"master_identity_p{p}",
                    _pass_fail(bad == 0, float(bad), 0.0, f"{runs} trajectories")))

    # coupling C_t <= D'_t + 1
    runs = 20 if quick else 100
    params = SimulationParams(star(100), SystemKind.TWO_TYPE, p=0.5,
                              record_series=True)
    violations = 0
    for t in range(runs):
        traj = run_trajectory(params, derive_trial_seed(seed + 3, 0, t))
        try:
            coupled_core_walk(traj, rng)
        except AssertionError:
            violations += 1
    out.append(("core_coupling",
                _pass_fail(violations == 0, float(violations), 0.0,
                           f"{runs} trajectories")))

    # complete-graph dominance vs the p=1 law (n=50)
    batch = _batch(complete(50), SystemKind.TWO_TYPE, 0.5, trials_dkw, seed + 4, jobs)
    ref = laws.sample_law(laws.two_type_p1_law(TopologyKind.COMPLETE, 50),
                          rng, size=trials_dkw)
    out.append(("complete_dominance",
                dominance_check(batch.extinction_times, ref, alpha)))

    # universal p bounds (n=100, p=0.75)
    n, p = 100, 0.75
    batch = _batch(star(n), SystemKind.TWO_TYPE, p, trials_dkw, seed + 5, jobs)
    summary = SampleSummary.from_samples(batch.extinction_times)
    out.append(("universal_p_bounds",
                bound_check(summary, lower=(2 + (2 * p - 1) / 2) * n - 1,
                            upper=2 * n / (1 - p))))

    # M_2n vs D_2n from matched sign streams (n=50, p=0.5)
    batch = _batch(star(50), SystemKind.TWO_TYPE, 0.5, trials_dkw, seed + 6, jobs)
    m_mean = batch.m_at_2n.mean()
    d = np.abs(batch.w_at_2n)
    bound = d.mean() / 8.0 - 1.0
    se = math.sqrt(batch.m_at_2n.var(ddof=1) / len(d)
                   + d.var(ddof=1) / 64.0 / len(d))
    out.append(("m_vs_displacement",
                _pass_fail(m_mean >= bound - 3 * se, float(bound - m_mean),
                           3 * se, f"EM={m_mean:.3f} ED/8-1={bound:.3f}")))

    # displacement oracle: exact formula vs Monte Carlo (t = 2000)
    t = 2000
    exact = laws.displacement_mean_exact(t)
    mc = sample_displacement(t, 0.5, 20000, rng)
    se = mc.std(ddof=1) / math.sqrt(len(mc))
    out.append(("displacement_exact_vs_mc",
                _pass_fail(abs(mc.mean() - exact) <= 3 * se,
                           float(abs(mc.mean() - exact)), 3 * se,
                           f"exact={exact:.4f} mc={mc.mean():.4f}")))

    # occupancy stays tiny on the complete graph (n=100)
    runs = 20 if quick else 100
    params = SimulationParams(complete(100), SystemKind.TWO_TYPE, p=0.5)
    cap = math.ceil(6 * math.log(100) / math.log(math.log(100)))
    worst = 0
    for t in range(runs):
        traj = run_trajectory(params, derive_trial_seed(seed + 7, 0, t))
        worst = max(worst, traj.max_occupancy)
    out.append(("occupancy_bound",
                _pass_fail(worst <= cap, float(worst), float(cap),
                           f"{runs} trajectories")))

    # q_i dual-form identity across a wide grid
    ok = True
    for n in (1, 2, 10, 1000, 10**6):
        try:
            laws.one_type_star_law(min(n, 10**4))  # builder cross-checks
        except AssertionError:
            ok = False
    for n in (10**5, 10**6):  # spot-check large n without building the law
        for i in (1, n // 2, n):
            q = 1.0 - (1.0 / (2 * i)) * ((2 * n - 2 * i + 1) / (2 * n))
            q_alt = ((2 * i - 1) * (2 * n + 1)) / (4.0 * n * i)
            if abs(q - q_alt) > 4 * math.ulp(q):
                ok = False
    out.append(("q_dual_form", _pass_fail(ok, 0.0 if ok else 1.0, 0.0, "")))

    return out
