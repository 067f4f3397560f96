"""Auxiliary comparison processes.

Three families, each simulable on its own and each tied to a star-graph
extinction bound:

* the +-1 color-sampling walk W_t and its displacement D_t = |W_t|;
* an explicit pathwise coupling that builds a simple-symmetric-walk
  displacement D'_t from a symmetric-speed star trajectory with
  C_t <= D'_t + 1 at every step;
* two lazy coupon-collector processes (idle with probability 1/2, else a
  uniform coupon) whose hitting/occupancy statistics sandwich the
  asymmetric-speed extinction time for p near 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Trajectory
from .state import TopologyKind


class CouplingViolationError(AssertionError):
    """C_t exceeded D'_t + 1: the coupling is pathwise, so this is a bug."""


@dataclass
class BiasedWalkPath:
    """Z_s = +1 with probability p else -1; W_t running sum; D_t = |W_t|."""

    p: float
    signs: np.ndarray
    w_series: np.ndarray = field(init=False)
    d_series: np.ndarray = field(init=False)

    def __post_init__(self):
        w = np.concatenate(([0], np.cumsum(self.signs, dtype=np.int64)))
        self.w_series = w
        self.d_series = np.abs(w)


def simulate_biased_walk(t: int, p: float, rng: np.random.Generator) -> BiasedWalkPath:
    """Path of the p-biased sign walk through time t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if not 0.5 <= p <= 1.0:
        raise ValueError("p must lie in [1/2, 1]")
    signs = np.where(rng.random(t) < p, 1, -1).astype(np.int8)
    return BiasedWalkPath(p=p, signs=signs)


def sample_displacement(t: int, p: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. samples of D_t = |W_t| without storing paths.

    W_t = 2*B - t with B ~ Binomial(t, p) counting the +1 draws, so a
    binomial draw per sample reproduces the displacement law exactly.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    b = rng.binomial(t, p, size=size)
    return np.abs(2 * b.astype(np.int64) - t)


def extend_sign_series(trajectory: Trajectory, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """Sign series continued past extinction to a fixed horizon.

    The sampling signs are i.i.d. even after the system empties; fixed-
    horizon comparisons (e.g. D_t at t > T) extend the recorded stream
    with fresh draws at the trajectory's own p.
    """
    if trajectory.sign_series is None:
        raise ValueError("trajectory has no recorded sign series")
    recorded = trajectory.sign_series
    if horizon <= recorded.shape[0]:
        return recorded[:horizon]
    extra = horizon - recorded.shape[0]
    p = trajectory.params.p
    tail = np.where(rng.random(extra) < p, 1, -1).astype(np.int8)
    return np.concatenate([recorded, tail])


@dataclass
class CoupledWalkPath:
    """D'_t built from a star trajectory; simple-symmetric-walk displacement."""

    dprime_series: np.ndarray


def coupled_core_walk(trajectory: Trajectory, rng: np.random.Generator) -> CoupledWalkPath:
    """Construct D'_t from a symmetric-speed star trajectory.

    D' goes up when (a) D'=0, (b) C>0 and the step is a no-collision
    arrival at the core, (c) C>0 and the step is a departure from the
    core, or (d) a fair coin lands heads while C=0 and D'>0; otherwise it
    goes down.  Cases (b)+(c) together fire exactly when the color at the
    core is sampled, which at p=1/2 has probability 1/2, so D' is a
    simple symmetric walk's displacement.  C_t <= D'_t + 1 must hold at
    every step; a violation raises (the guarantee is pathwise).
    """
    params = trajectory.params
    if params.topology.kind is not TopologyKind.STAR:
        raise ValueError("the core-count coupling needs a star trajectory")
    if params.p != 0.5:
        raise ValueError("the coupling is defined for symmetric speeds (p = 1/2)")
    c = trajectory.c_series
    dep = trajectory.from_core_series
    if c is None or dep is None:
        raise ValueError("trajectory must be recorded with series")
    steps = c.shape[0] - 1
    dprime = np.empty(steps + 1, np.int64)
    dprime[0] = 0
    dp = 0
    for t in range(steps):
        ct = c[t]
        if dp == 0:
            up = True  # (a)
        elif ct > 0:
            if dep[t]:
                up = True  # (c): departure, collided or not
            else:
                up = c[t + 1] == ct + 1  # (b): arrival without collision
        else:
            up = rng.random() < 0.5  # (d)
        dp = dp + 1 if up else dp - 1
        dprime[t + 1] = dp
        if c[t + 1] > dp + 1:
            raise CouplingViolationError(
                f"C_{t+1} = {c[t+1]} > D'_{t+1} + 1 = {dp + 1}"
            )
    return CoupledWalkPath(dprime_series=dprime)


@dataclass(frozen=True)
class CouponParams:
    """Shared knobs of the lazy coupon processes.

    t_p = -n*log(1-p) is the natural time scale; epsilon shrinks the
    horizon for the threshold process, r (> 4) stretches it for the
    occupancy process.
    """

    n: int
    p: float
    epsilon: float = 0.5
    r: float = 5.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0, 1) so that t_p is finite")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def t_p(self) -> float:
        return -self.n * math.log1p(-self.p)


def _lazy_collection_times(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Cumulative lazy-collector steps at which the 1st..count-th distinct
    coupons appear.  With i coupons seen, the next new one arrives after a
    Geometric((n-i)/2n) number of lazy steps."""
    i = np.arange(count)
    probs = (n - i) / (2.0 * n)
    u = 1.0 - rng.random(count)
    draws = np.ceil(np.log(u) / np.log1p(-probs)).astype(np.int64)
    np.maximum(draws, 1, out=draws)
    return np.cumsum(draws)


def coupon_collector_threshold(
    params: CouponParams, rng: np.random.Generator, *, r_value: int | None = None
) -> int:
    """One sample of T'_p: lazy steps to see n - R distinct coupons, where
    R ~ Binomial(floor(4(1-eps)t_p), 1-p).  Zero when n - R <= 0.

    r_value forces R (degenerate-case tests).
    """
    if not 0.5 < params.p < 1.0:
        raise ValueError("the threshold process needs p in (1/2, 1)")
    if r_value is None:
        horizon = math.floor(4.0 * (1.0 - params.epsilon) * params.t_p)
        r_value = int(rng.binomial(horizon, 1.0 - params.p))
    remaining = params.n - r_value
    if remaining <= 0:
        return 0
    times = _lazy_collection_times(params.n, remaining, rng)
    return int(times[-1])


def coupon_uncollected(
    params: CouponParams, rng: np.random.Generator, *, n_steps: int | None = None
) -> int:
    """One sample of V: coupons still missing after N lazy steps, where
    N = floor((B - n)/2), B ~ Binomial(floor(r*t_p), p); V = n when N <= 0.

    n_steps forces N (degenerate-case tests).
    """
    if params.r <= 4.0:
        raise ValueError("the occupancy process requires r > 4")
    if n_steps is None:
        budget = math.floor(params.r * params.t_p)
        b = int(rng.binomial(budget, params.p))
        n_steps = (b - params.n) // 2
    if n_steps <= 0:
        return params.n
    times = _lazy_collection_times(params.n, params.n, rng)
    collected = int(np.searchsorted(times, n_steps, side="right"))
    return params.n - collected
