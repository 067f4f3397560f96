"""Trajectory driver for the four systems (one/two-type x complete/star).

Instruments everything the extinction-time identities refer to: the
remaining-particle series A_t, the core count C_t, the count M_t of core
departures that avoided collision, and the color-sampling sign series Z_t.
On the star these satisfy, pathwise and at every step,

    A_t = 2n - t + C_t + 2*M_t

which also forces T >= 2n there (checked on every star run).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .seeding import MASK64, SplitMix64
from .state import (
    Coloring,
    SystemKind,
    Topology,
    TopologyKind,
    move_and_resolve,
    new_configuration,
    sample_mover,
)


def default_max_steps(n: int, p: float) -> int:
    """Step budget comfortably above every known mean bound.

    10*n*(1 + ceil(log 2n))/(1-p) for p < 1; the 1/(1-p) blow-up is
    meaningless at p=1, where the mean is ~4n*log(n), so a squared-log
    budget is used instead.
    """
    base = 10 * n * (1 + math.ceil(math.log(2 * n)))
    if p < 1.0:
        return math.ceil(base / (1.0 - p))
    return 2 * base * (1 + math.ceil(math.log(2 * n)))


@dataclass(frozen=True)
class SimulationParams:
    topology: Topology
    system_kind: SystemKind
    p: float = 0.5
    max_steps: Optional[int] = None  # None -> default_max_steps(n, p)
    record_series: bool = False
    coloring: Coloring = Coloring.RANDOM_BALANCED

    def __post_init__(self):
        if self.system_kind is SystemKind.ONE_TYPE and self.p != 0.5:
            raise ValueError("one-type system has no speed parameter; use p=0.5")
        if not 0.5 <= self.p <= 1.0:
            raise ValueError("p must lie in [1/2, 1]")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    @property
    def step_budget(self) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return default_max_steps(self.topology.n, self.p)


@dataclass
class Trajectory:
    """One simulated run.  Series are present iff record_series was set;
    c/m series and sign/flag series are star- and two-type-specific where
    noted.  extinction_time is None when the step budget ran out."""

    params: SimulationParams
    seed: int
    steps: int
    extinction_time: Optional[int]
    final_m: int
    collision_count: int
    max_occupancy: int
    m_at_2n: int
    w_at_2n: int
    a_series: Optional[np.ndarray] = None
    c_series: Optional[np.ndarray] = None
    m_series: Optional[np.ndarray] = None
    sign_series: Optional[np.ndarray] = None
    collided_series: Optional[np.ndarray] = None
    from_core_series: Optional[np.ndarray] = None

    @property
    def reached(self) -> bool:
        return self.extinction_time is not None

    @property
    def collision_times(self) -> np.ndarray:
        """1-based steps at which a collision happened (recorded runs)."""
        if self.collided_series is None:
            raise ValueError("run was not recorded with series")
        return np.nonzero(self.collided_series)[0] + 1

    @property
    def d_at_2n(self) -> int:
        """Displacement |W| of the sampling-sign walk at t = min(2n, T)."""
        return abs(self.w_at_2n)


@dataclass
class BatchResult:
    """Per-trial summary arrays for a batch of independent trajectories."""

    params: SimulationParams
    seeds: np.ndarray
    steps: np.ndarray
    reached: np.ndarray
    final_m: np.ndarray
    collisions: np.ndarray
    max_occ: np.ndarray
    m_at_2n: np.ndarray
    w_at_2n: np.ndarray

    @property
    def all_reached(self) -> bool:
        return bool(self.reached.all())

    @property
    def extinction_times(self) -> np.ndarray:
        if not self.all_reached:
            raise ValueError("some trajectories hit the step budget")
        return self.steps


def _check_star_floor(params: SimulationParams, steps: int, reached: bool) -> None:
    # T >= 2n on the star is an engine-level guarantee; a breach is a bug.
    if reached and params.topology.kind is TopologyKind.STAR:
        if steps < 2 * params.topology.n:
            raise AssertionError("star extinction before 2n steps: engine bug")


def run_trajectory(params: SimulationParams, seed: int, engine: str = "fast") -> Trajectory:
    """Simulate one trajectory, deterministic given (params, seed)."""
    if engine == "fast":
        return _run_fast(params, seed)
    if engine == "reference":
        return _run_reference(params, seed)
    raise ValueError(f"unknown engine {engine!r}")


def _run_fast(params: SimulationParams, seed: int) -> Trajectory:
    topo = params.topology
    star = topo.kind is TopologyKind.STAR
    two = params.system_kind is SystemKind.TWO_TYPE
    shuffle = two and params.coloring is Coloring.RANDOM_BALANCED
    budget = params.step_budget
    seed = seed & MASK64
    seed_u = np.uint64(seed)
    if params.record_series:
        (t, ok, m, colls, mo, m2, w2, a_s, c_s, m_s, z_s, cf, ff) = _kernels.run_full(
            seed_u, topo.n, star, two, params.p, shuffle, budget
        )
        traj = Trajectory(
            params=params, seed=seed, steps=int(t),
            extinction_time=int(t) if ok else None,
            final_m=int(m), collision_count=int(colls), max_occupancy=int(mo),
            m_at_2n=int(m2), w_at_2n=int(w2),
            a_series=a_s,
            c_series=c_s if star else None,
            m_series=m_s if star else None,
            sign_series=z_s if two else None,
            collided_series=cf,
            from_core_series=ff if star else None,
        )
    else:
        t, ok, m, colls, mo, m2, w2 = _kernels.run_summary(
            seed_u, topo.n, star, two, params.p, shuffle, budget
        )
        traj = Trajectory(
            params=params, seed=seed, steps=int(t),
            extinction_time=int(t) if ok else None,
            final_m=int(m), collision_count=int(colls), max_occupancy=int(mo),
            m_at_2n=int(m2), w_at_2n=int(w2),
        )
    _check_star_floor(params, traj.steps, traj.reached)
    return traj


def _run_reference(params: SimulationParams, seed: int) -> Trajectory:
    """Pure-Python twin of the jitted runner (same draws, same outputs)."""
    topo = params.topology
    star = topo.kind is TopologyKind.STAR
    two = params.system_kind is SystemKind.TWO_TYPE
    rng = SplitMix64(seed)
    config = new_configuration(topo, params.system_kind, params.coloring, rng)
    budget = params.step_budget
    n = topo.n
    a = 2 * n
    t = m = w = colls = 0
    m2n = w2n = 0
    record = params.record_series
    a_s, c_s, m_s = [a], [0], [0]
    z_s, cf, ff = [], [], []
    while a > 0 and t < budget:
        t += 1
        mover = sample_mover(config, params.p, rng)
        z = 0 if not two else (1 if mover.color == 1 else -1)
        from_core = star and config.handle_site(mover) == topo.core
        out = move_and_resolve(config, mover, rng)
        if out.collided:
            a -= 2
            colls += 1
        elif out.core_departure_without_collision:
            m += 1
        w += z
        if t == 2 * n or (a == 0 and t < 2 * n):
            m2n, w2n = m, w
        if record:
            a_s.append(a)
            c_s.append(config.core_count if star else 0)
            m_s.append(m)
            z_s.append(z)
            cf.append(1 if out.collided else 0)
            ff.append(1 if from_core else 0)
    if t < 2 * n:
        m2n, w2n = m, w
    traj = Trajectory(
        params=params, seed=seed & MASK64, steps=t,
        extinction_time=t if a == 0 else None,
        final_m=m, collision_count=colls,
        max_occupancy=config.max_occupancy_seen,
        m_at_2n=m2n, w_at_2n=w2n,
        a_series=np.array(a_s, np.int32) if record else None,
        c_series=np.array(c_s, np.int32) if record and star else None,
        m_series=np.array(m_s, np.int32) if record and star else None,
        sign_series=np.array(z_s, np.int8) if record and two else None,
        collided_series=np.array(cf, np.int8) if record else None,
        from_core_series=np.array(ff, np.int8) if record and star else None,
    )
    _check_star_floor(params, traj.steps, traj.reached)
    return traj


def run_many(
    params: SimulationParams,
    seeds,
    jobs: int = 1,
) -> BatchResult:
    """Run independent trials (record_series must be False); results depend
    only on (params, seeds), not on jobs or scheduling."""
    if params.record_series:
        raise ValueError("run_many is the summary path; record series per-trajectory")
    seeds = np.asarray([s & MASK64 for s in seeds], np.uint64)
    ntr = len(seeds)
    topo = params.topology
    star = topo.kind is TopologyKind.STAR
    two = params.system_kind is SystemKind.TWO_TYPE
    shuffle = two and params.coloring is Coloring.RANDOM_BALANCED
    budget = params.step_budget
    steps = np.empty(ntr, np.int64)
    reached = np.empty(ntr, np.uint8)
    final_m = np.empty(ntr, np.int64)
    colls = np.empty(ntr, np.int64)
    max_occ = np.empty(ntr, np.int64)
    m2n = np.empty(ntr, np.int64)
    w2n = np.empty(ntr, np.int64)

    def run_slice(lo: int, hi: int) -> None:
        _kernels.run_batch(
            seeds[lo:hi], topo.n, star, two, params.p, shuffle, budget,
            steps[lo:hi], reached[lo:hi], final_m[lo:hi], colls[lo:hi],
            max_occ[lo:hi], m2n[lo:hi], w2n[lo:hi],
        )

    jobs = max(1, min(jobs, ntr))
    if jobs == 1:
        run_slice(0, ntr)
    else:
        # kernels are nogil, so plain threads give real parallelism
        bounds = np.linspace(0, ntr, jobs + 1).astype(int)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(run_slice, bounds[i], bounds[i + 1])
                for i in range(jobs)
                if bounds[i] < bounds[i + 1]
            ]
            for f in futures:
                f.result()
    result = BatchResult(
        params=params, seeds=seeds, steps=steps, reached=reached,
        final_m=final_m, collisions=colls, max_occ=max_occ,
        m_at_2n=m2n, w_at_2n=w2n,
    )
    if star:
        ok = reached.astype(bool)
        if np.any(steps[ok] < 2 * topo.n):
            raise AssertionError("star extinction before 2n steps: engine bug")
    return result


@dataclass
class IdentityReport:
    holds: bool
    first_violation: Optional[int]


def verify_master_identity(trajectory: Trajectory, n: int) -> IdentityReport:
    """Check A_t = 2n - t + C_t + 2*M_t for 0 <= t <= T, and the floor
    A_t >= 2n - t for t <= 2n.  Star trajectories with series only."""
    if trajectory.params.topology.kind is not TopologyKind.STAR:
        raise ValueError("master identity is a star-graph statement")
    if trajectory.a_series is None or trajectory.c_series is None:
        raise ValueError("trajectory must be recorded with series")
    a = trajectory.a_series.astype(np.int64)
    c = trajectory.c_series.astype(np.int64)
    m = trajectory.m_series.astype(np.int64)
    t = np.arange(a.shape[0], dtype=np.int64)
    lhs = a
    rhs = 2 * n - t + c + 2 * m
    bad = np.nonzero(lhs != rhs)[0]
    if bad.size:
        return IdentityReport(holds=False, first_violation=int(bad[0]))
    horizon = min(2 * n + 1, a.shape[0])
    floor_bad = np.nonzero(a[:horizon] < 2 * n - t[:horizon])[0]
    if floor_bad.size:
        return IdentityReport(holds=False, first_violation=int(floor_bad[0]))
    return IdentityReport(holds=True, first_violation=None)


def max_occupancy(trajectory: Trajectory) -> int:
    """Max over time of the max over sites of the particle count."""
    return trajectory.max_occupancy
