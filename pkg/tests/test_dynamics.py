import math

import numpy as np
import pytest

from annihilate import (
    RED,
    Coloring,
    SimulationParams,
    SplitMix64,
    SystemKind,
    complete,
    default_max_steps,
    dkw_equality_test,
    max_occupancy,
    move_and_resolve,
    new_configuration,
    run_many,
    run_trajectory,
    sample_geometric,
    sample_mover,
    star,
    verify_master_identity,
)
from annihilate.seeding import derive_trial_seed

# -- oracle: the star n=1 two-type chain, solved exactly ---------------------


def star_n1_mean_by_chain(p: float) -> float:
    """Expected absorption time of the explicit 3-state chain.

    States: 0 = both particles at leaves, 1 = blue at core, 2 = red at core.
    From 1: absorb w.p. p/2 + (1-p), return to 0 w.p. p/2 (and symmetrically
    from 2).  Solve (I - Q) E = 1.
    """
    q = np.array([
        [0.0, p, 1.0 - p],
        [p / 2.0, 0.0, 0.0],
        [(1.0 - p) / 2.0, 0.0, 0.0],
    ])
    e = np.linalg.solve(np.eye(3) - q, np.ones(3))
    return float(e[0])


def test_chain_oracle_matches_hand_values():
    assert math.isclose(star_n1_mean_by_chain(0.5), 8.0 / 3.0, rel_tol=1e-12)
    assert math.isclose(star_n1_mean_by_chain(1.0), 4.0, rel_tol=1e-12)


# -- engine equivalence and determinism --------------------------------------


@pytest.mark.parametrize("topo_build", [star, complete])
@pytest.mark.parametrize("system", [SystemKind.ONE_TYPE, SystemKind.TWO_TYPE])
@pytest.mark.parametrize("coloring", [Coloring.RANDOM_BALANCED, Coloring.ALTERNATING])
def test_fast_and_reference_engines_agree(topo_build, system, coloring):
    p = 0.5 if system is SystemKind.ONE_TYPE else 0.8
    params = SimulationParams(topo_build(3), system, p=p, record_series=True,
                              coloring=coloring)
    for seed in range(50, 70):
        fast = run_trajectory(params, seed, engine="fast")
        ref = run_trajectory(params, seed, engine="reference")
        assert fast.steps == ref.steps
        assert fast.extinction_time == ref.extinction_time
        assert fast.final_m == ref.final_m
        assert fast.collision_count == ref.collision_count
        assert fast.max_occupancy == ref.max_occupancy
        assert fast.m_at_2n == ref.m_at_2n
        assert fast.w_at_2n == ref.w_at_2n
        for name in ("a_series", "c_series", "m_series", "sign_series",
                     "collided_series", "from_core_series"):
            a, b = getattr(fast, name), getattr(ref, name)
            assert (a is None) == (b is None)
            if a is not None:
                assert np.array_equal(a, b), name


def test_identical_seed_reproduces_trajectory():
    params = SimulationParams(star(30), SystemKind.TWO_TYPE, p=0.7,
                              record_series=True)
    a = run_trajectory(params, 123456789)
    b = run_trajectory(params, 123456789)
    assert a.steps == b.steps
    assert np.array_equal(a.a_series, b.a_series)
    assert np.array_equal(a.sign_series, b.sign_series)
    c = run_trajectory(params, 123456790)
    assert c.steps != a.steps or not np.array_equal(c.a_series, a.a_series)


def test_run_many_matches_singles_and_is_jobs_invariant():
    params = SimulationParams(star(20), SystemKind.TWO_TYPE, p=0.6)
    seeds = [derive_trial_seed(77, 0, t) for t in range(64)]
    batch1 = run_many(params, seeds, jobs=1)
    batch4 = run_many(params, seeds, jobs=4)
    assert np.array_equal(batch1.steps, batch4.steps)
    assert np.array_equal(batch1.final_m, batch4.final_m)
    singles = [run_trajectory(params, s).steps for s in seeds[:8]]
    assert list(batch1.steps[:8]) == singles


# -- exact small systems ------------------------------------------------------


def test_k2_two_type_is_geometric_half(rng):
    # K_2: the mover redraws its own site w.p. 1/2, so T ~ Geometric(1/2)
    # for every p (each step hits the opposite particle with chance 1/2)
    params = SimulationParams(complete(1), SystemKind.TWO_TYPE, p=0.8)
    times = run_many(params, [derive_trial_seed(5, 0, t) for t in range(20000)])
    t = times.extinction_times
    assert abs((t == 1).mean() - 0.5) < 3 * 0.5 / math.sqrt(t.size)
    se = t.std(ddof=1) / math.sqrt(t.size)
    assert abs(t.mean() - 2.0) <= 3 * se
    ref = sample_geometric(0.5, rng, size=20000)
    assert dkw_equality_test(t, ref, alpha=0.01).passed


@pytest.mark.parametrize("p,oracle", [(0.5, 8.0 / 3.0), (1.0, 4.0)])
def test_star_n1_mean_matches_chain(p, oracle):
    assert math.isclose(star_n1_mean_by_chain(p), oracle, rel_tol=1e-12)
    params = SimulationParams(star(1), SystemKind.TWO_TYPE, p=p)
    batch = run_many(params, [derive_trial_seed(11, 0, t) for t in range(40000)])
    t = batch.extinction_times
    se = t.std(ddof=1) / math.sqrt(t.size)
    assert abs(t.mean() - oracle) <= 3 * se


# -- identities and invariants -------------------------------------------------


def test_master_identity_base_case_and_simulated_paths():
    params = SimulationParams(star(100), SystemKind.TWO_TYPE, p=0.9,
                              record_series=True)
    traj = run_trajectory(params, 314159)
    assert traj.a_series[0] == 200 and traj.c_series[0] == 0 \
        and traj.m_series[0] == 0
    report = verify_master_identity(traj, 100)
    assert report.holds and report.first_violation is None


def test_master_identity_detects_corruption():
    params = SimulationParams(star(20), SystemKind.TWO_TYPE, p=0.5,
                              record_series=True)
    traj = run_trajectory(params, 8)
    corrupt_at = traj.steps // 2
    traj.m_series = traj.m_series.copy()
    traj.m_series[corrupt_at:] -= 1
    report = verify_master_identity(traj, 20)
    assert not report.holds and report.first_violation == corrupt_at


def test_master_identity_rejects_bad_input():
    params = SimulationParams(complete(5), SystemKind.TWO_TYPE, p=0.5,
                              record_series=True)
    with pytest.raises(ValueError):
        verify_master_identity(run_trajectory(params, 1), 5)
    params = SimulationParams(star(5), SystemKind.TWO_TYPE, p=0.5)
    with pytest.raises(ValueError):
        verify_master_identity(run_trajectory(params, 1), 5)


def test_a_series_structure_and_collision_parity():
    params = SimulationParams(star(25), SystemKind.TWO_TYPE, p=0.75,
                              record_series=True)
    traj = run_trajectory(params, 424242)
    diffs = np.diff(traj.a_series)
    assert set(diffs) <= {0, -2}
    assert np.array_equal(np.nonzero(diffs == -2)[0] + 1, traj.collision_times)
    assert traj.collision_count == 25  # n collisions clear 2n particles
    assert traj.a_series[0] == 50 and traj.a_series[-1] == 0
    assert np.all(traj.a_series % 2 == 0)


def test_series_structure_on_star_runs():
    params = SimulationParams(star(30), SystemKind.TWO_TYPE, p=0.7,
                              record_series=True)
    for seed in range(5):
        traj = run_trajectory(params, seed)
        m_steps = np.diff(traj.m_series)
        assert set(m_steps) <= {0, 1}  # non-decreasing, unit increments
        assert traj.m_series[-1] == traj.final_m
        assert np.all(traj.c_series >= 0)
        assert np.all(np.abs(np.diff(traj.c_series)) <= 1)
        assert set(np.unique(traj.sign_series)) <= {-1, 1}
        assert traj.w_at_2n == traj.sign_series[:60].sum()
        assert traj.m_at_2n == traj.m_series[60]


def test_star_extinction_takes_at_least_2n_steps():
    for system, p in ((SystemKind.ONE_TYPE, 0.5), (SystemKind.TWO_TYPE, 0.9)):
        params = SimulationParams(star(40), system, p=p)
        batch = run_many(params, [derive_trial_seed(21, 0, t) for t in range(300)])
        assert np.all(batch.extinction_times >= 80)


def test_star_collisions_happen_at_or_leaving_core():
    # every collision is either an arrival at the core or a core departure:
    # equivalently C strictly decreases at every collision step
    params = SimulationParams(star(30), SystemKind.TWO_TYPE, p=0.6,
                              record_series=True)
    traj = run_trajectory(params, 99)
    c = traj.c_series.astype(int)
    for t in traj.collision_times:
        assert c[t] == c[t - 1] - 1


def test_one_type_occupancy_stays_single():
    for topo in (star(50), complete(50)):
        params = SimulationParams(topo, SystemKind.ONE_TYPE)
        batch = run_many(params, [derive_trial_seed(1, 0, t) for t in range(200)])
        assert np.all(batch.max_occ == 1)


def test_max_occupancy_trivial_cases():
    params = SimulationParams(complete(1), SystemKind.TWO_TYPE, p=0.5)
    assert max_occupancy(run_trajectory(params, 3)) == 1
    params = SimulationParams(star(30), SystemKind.ONE_TYPE)
    assert max_occupancy(run_trajectory(params, 3)) == 1


def test_p1_red_particles_never_move():
    rng = SplitMix64(2718)
    config = new_configuration(star(8), SystemKind.TWO_TYPE,
                               Coloring.RANDOM_BALANCED, rng)
    initial_red = set(config.positions(RED))
    while config.particle_count > 0:
        handle = sample_mover(config, 1.0, rng)
        move_and_resolve(config, handle, rng)
        live = set(config.positions(RED))
        assert live <= initial_red
    assert config.particle_count == 0


def test_extinction_law_is_coloring_invariant(rng):
    # leaves are exchangeable, so random vs alternating balanced colorings
    # must give the same extinction-time law
    times = {}
    for coloring in (Coloring.RANDOM_BALANCED, Coloring.ALTERNATING):
        params = SimulationParams(star(20), SystemKind.TWO_TYPE, p=0.7,
                                  coloring=coloring)
        seeds = [derive_trial_seed(31, 0, t) for t in range(4000)]
        times[coloring] = run_many(params, seeds).extinction_times
    verdict = dkw_equality_test(times[Coloring.RANDOM_BALANCED],
                                times[Coloring.ALTERNATING], alpha=0.01)
    assert verdict.passed


# -- step budget ---------------------------------------------------------------


def test_not_reached_is_reported_not_truncated():
    params = SimulationParams(star(50), SystemKind.TWO_TYPE, p=0.5, max_steps=10)
    traj = run_trajectory(params, 9)
    assert traj.extinction_time is None and not traj.reached
    assert traj.steps == 10
    batch = run_many(params, [1, 2, 3])
    assert not batch.all_reached
    with pytest.raises(ValueError):
        batch.extinction_times


def test_default_step_budget_clears_every_regime():
    # generous at p < 1 and still finite at p = 1
    assert default_max_steps(100, 0.5) == 20 * 100 * 7
    assert default_max_steps(100, 1.0) > 4 * 100 * math.log(100)
    for p in (0.5, 0.9, 1.0):
        params = SimulationParams(star(20), SystemKind.TWO_TYPE, p=p)
        batch = run_many(params, [derive_trial_seed(3, 0, t) for t in range(200)])
        assert batch.all_reached


def test_params_validation():
    with pytest.raises(ValueError):
        SimulationParams(star(5), SystemKind.ONE_TYPE, p=0.7)
    with pytest.raises(ValueError):
        SimulationParams(star(5), SystemKind.TWO_TYPE, p=0.3)
    with pytest.raises(ValueError):
        SimulationParams(star(5), SystemKind.TWO_TYPE, p=0.5, max_steps=0)
    with pytest.raises(ValueError):
        run_trajectory(SimulationParams(star(2), SystemKind.TWO_TYPE), 1,
                       engine="warp")
