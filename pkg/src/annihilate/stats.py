"""Estimation and hypothesis machinery for the verification suites.

Distributional checks are finite-sample valid: both the two-sample
equality test and the one-sided dominance test budget their tolerance
with the Dvoretzky-Kiefer-Wolfowitz inequality (union over the two
empirical CDFs), which is distribution-free and exact at any sample size.
Every statistical acceptance test states its alpha; the default bound
check uses 3-sigma slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


@dataclass
class SampleSummary:
    """Streaming count/mean/variance/min/max (Welford), mergeable.

    Merging uses the parallel combination rule, so reductions over
    per-thread summaries are order-independent up to rounding.
    """

    count: int = 0
    mean: float = 0.0
    _m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf

    def update(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (x - self.mean)
        if x < self.min:
            self.min = x
        if x > self.max:
            self.max = x

    def merge(self, other: "SampleSummary") -> "SampleSummary":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count = other.count
            self.mean = other.mean
            self._m2 = other._m2
            self.min = other.min
            self.max = other.max
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self._m2 += other._m2 + delta * delta * self.count * other.count / total
        self.count = total
        self.min = min(self.min, other.min)
        self.max = max(self.max, other.max)
        return self

    @classmethod
    def from_samples(cls, samples) -> "SampleSummary":
        s = cls()
        for x in np.asarray(samples, dtype=np.float64):
            s.update(float(x))
        return s

    @property
    def variance(self) -> float:
        if self.count < 2:
            return 0.0
        return self._m2 / (self.count - 1)

    @property
    def stderr(self) -> float:
        if self.count == 0:
            return math.inf
        return math.sqrt(self.variance / self.count)


class VerdictKind(Enum):
    EQUALITY = "equality"
    DOMINANCE = "dominance"
    BOUND_CHECK = "bound_check"


@dataclass
class TestVerdict:
    kind: VerdictKind
    statistic: float
    threshold: float
    passed: bool  # "pass" is a keyword; CSV/text renderings use pass/fail
    details: str = ""

    def __str__(self) -> str:
        word = "pass" if self.passed else "FAIL"
        return (f"[{word}] {self.kind.value}: statistic={self.statistic:.6g} "
                f"threshold={self.threshold:.6g} {self.details}")


def _dkw_budget(m: int, alpha: float) -> float:
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * m))


def _ecdf_gaps(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """(sup F_a - F_b, sup F_b - F_a) over all jump points."""
    grid = np.concatenate([a, b])
    grid.sort(kind="mergesort")
    fa = np.searchsorted(np.sort(a), grid, side="right") / a.shape[0]
    fb = np.searchsorted(np.sort(b), grid, side="right") / b.shape[0]
    diff = fa - fb
    return float(diff.max()), float(-diff.min())


def dkw_equality_test(samples_a, samples_b, alpha: float) -> TestVerdict:
    """Two-sample equality-in-law check with a two-sided DKW budget.

    Passes iff sup |F_a - F_b| <= sqrt(ln(2/a)/2m_a) + sqrt(ln(2/a)/2m_b);
    under equality each empirical CDF stays within its own band with
    probability >= 1 - alpha.
    """
    a = np.asarray(samples_a, dtype=np.float64)
    b = np.asarray(samples_b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample set")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    up, down = _ecdf_gaps(a, b)
    stat = max(up, down)
    threshold = _dkw_budget(a.size, alpha) + _dkw_budget(b.size, alpha)
    return TestVerdict(
        kind=VerdictKind.EQUALITY,
        statistic=stat,
        threshold=threshold,
        passed=stat <= threshold,
        details=f"m_a={a.size} m_b={b.size} alpha={alpha}",
    )


def dominance_check(upper_samples, lower_samples, alpha: float) -> TestVerdict:
    """One-sided check that `upper` stochastically dominates `lower`.

    Dominance means F_upper(x) <= F_lower(x) everywhere; the statistic is
    the worst violation sup_x (F_upper - F_lower), allowed a one-sided
    DKW budget.
    """
    u = np.asarray(upper_samples, dtype=np.float64)
    lo = np.asarray(lower_samples, dtype=np.float64)
    if u.size == 0 or lo.size == 0:
        raise ValueError("empty sample set")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    violation, _ = _ecdf_gaps(u, lo)
    budget = (math.sqrt(math.log(1.0 / alpha) / (2.0 * u.size))
              + math.sqrt(math.log(1.0 / alpha) / (2.0 * lo.size)))
    return TestVerdict(
        kind=VerdictKind.DOMINANCE,
        statistic=violation,
        threshold=budget,
        passed=violation <= budget,
        details=f"m_upper={u.size} m_lower={lo.size} alpha={alpha}",
    )


def bound_check(
    summary: SampleSummary,
    lower: float | None = None,
    upper: float | None = None,
    slack_sigmas: float = 3.0,
) -> TestVerdict:
    """Mean-in-interval check with slack_sigmas * stderr of forgiveness."""
    if summary.count < 30:
        raise ValueError("bound_check needs at least 30 samples")
    slack = slack_sigmas * summary.stderr
    ok = True
    parts = [f"mean={summary.mean:.6g} stderr={summary.stderr:.3g}"]
    margin = math.inf
    if lower is not None:
        ok = ok and (summary.mean + slack >= lower)
        margin = min(margin, summary.mean + slack - lower)
        parts.append(f"lower={lower:.6g}")
    if upper is not None:
        ok = ok and (summary.mean - slack <= upper)
        margin = min(margin, upper - (summary.mean - slack))
        parts.append(f"upper={upper:.6g}")
    if margin is math.inf:
        margin = 0.0
    return TestVerdict(
        kind=VerdictKind.BOUND_CHECK,
        statistic=-margin,  # <= 0 iff the interval holds with slack
        threshold=0.0,
        passed=ok,
        details=" ".join(parts),
    )


class FitModel(Enum):
    SQRT_N = "sqrt_n"
    SQRT_N_LOG_N = "sqrt_n_log_n"
    N_LOG_N = "n_log_n"


_REGRESSORS = {
    FitModel.SQRT_N: lambda n: np.sqrt(n),
    FitModel.SQRT_N_LOG_N: lambda n: np.sqrt(n) * np.log(n),
    FitModel.N_LOG_N: lambda n: n * np.log(n),
}


@dataclass
class FitResult:
    model: FitModel
    coefficient: float
    residual_norm: float  # ||r - c g|| / ||r||


def fit_second_order(
    n_grid,
    means,
    model: FitModel,
    baseline: str = "star",
    stderrs=None,
) -> FitResult:
    """Least-squares fit of (mean - baseline) to a single regressor.

    baseline "star" subtracts the leading 2n term; "complete" subtracts
    nothing.  When stderrs are given the fit is inverse-variance weighted.
    """
    n_arr = np.asarray(n_grid, dtype=np.float64)
    y = np.asarray(means, dtype=np.float64)
    if n_arr.size < 4:
        raise ValueError("need at least 4 grid points")
    if n_arr.size != y.size:
        raise ValueError("n_grid and means must have equal length")
    if np.unique(n_arr).size != n_arr.size:
        raise ValueError("degenerate grid (repeated n)")
    if baseline == "star":
        resid = y - 2.0 * n_arr
    elif baseline == "complete":
        resid = y.copy()
    else:
        raise ValueError("baseline must be 'star' or 'complete'")
    g = _REGRESSORS[model](n_arr)
    if stderrs is not None:
        w = 1.0 / np.asarray(stderrs, dtype=np.float64) ** 2
    else:
        w = np.ones_like(g)
    coef = float(np.sum(w * resid * g) / np.sum(w * g * g))
    norm = float(np.linalg.norm(resid))
    misfit = float(np.linalg.norm(resid - coef * g))
    return FitResult(
        model=model,
        coefficient=coef,
        residual_norm=misfit / norm if norm > 0 else 0.0,
    )
