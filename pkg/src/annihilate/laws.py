"""Closed-form extinction-time laws and related exact constants.

Every exact theorem the harness checks reduces to a scaled sum of
independent geometric random variables X(q), P(X=k) = (1-q)^{k-1} q:

* one-type complete graph on 2n sites:  T ~ sum_i X((2i-1)/2n)
* one-type star with 2n leaves:         T ~ 2 * sum_i X(q_i),
  q_i = 1 - (1/(2i)) * ((2n-2i+1)/(2n)) = (2i-1)(2n+1)/(4ni)
* two-type at p=1 (immobile reds):      T ~ sum_i X(i/2n) on the complete
  graph and 2 * sum_i X(i/2n) on the star.

Means and variances are accumulated with math.fsum so that O(1) residuals
against the asymptotic expansions are not drowned by rounding at n = 1e4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

EULER_MASCHERONI = 0.5772156649015329

_ULP_TOLERANCE = 4  # budget for the dual-form q_i cross-check


@dataclass(frozen=True)
class GeometricSumLaw:
    """scale * sum of independent geometrics with the given success probs."""

    probs: tuple[float, ...]
    scale: int = 1

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        if not self.probs:
            raise ValueError("need at least one success probability")
        for q in self.probs:
            if not 0.0 < q <= 1.0:
                raise ValueError("success probabilities must lie in (0, 1]")

    @cached_property
    def exact_mean(self) -> float:
        return self.scale * math.fsum(1.0 / q for q in self.probs)

    @cached_property
    def exact_variance(self) -> float:
        return self.scale**2 * math.fsum((1.0 - q) / (q * q) for q in self.probs)

    @property
    def min_support(self) -> int:
        return self.scale * len(self.probs)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        return sample_law(self, rng, size)


def law_mean(law: GeometricSumLaw) -> float:
    return law.exact_mean


def law_variance(law: GeometricSumLaw) -> float:
    return law.exact_variance


def one_type_complete_law(n: int) -> GeometricSumLaw:
    """Extinction-time law of the one-type system on the complete graph."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return GeometricSumLaw(tuple((2 * i - 1) / (2 * n) for i in range(1, n + 1)))


def one_type_star_law(n: int) -> GeometricSumLaw:
    """Extinction-time law of the one-type system on the star (scale 2).

    The stage probability has two algebraically equal forms; both are
    computed and cross-checked to a few ulp as a guard against transcription
    slips.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    probs = []
    for i in range(1, n + 1):
        q = 1.0 - (1.0 / (2 * i)) * ((2 * n - 2 * i + 1) / (2 * n))
        q_alt = ((2 * i - 1) * (2 * n + 1)) / (4.0 * n * i)
        if abs(q - q_alt) > _ULP_TOLERANCE * math.ulp(q):
            raise AssertionError(f"q_i dual-form mismatch at i={i}, n={n}")
        probs.append(q)
    return GeometricSumLaw(tuple(probs), scale=2)


def two_type_p1_law(topology_kind, n: int) -> GeometricSumLaw:
    """Extinction-time law of the two-type system at p=1 (reds immobile)."""
    from .state import TopologyKind  # local import to keep laws standalone

    if n < 1:
        raise ValueError("n must be >= 1")
    scale = 2 if topology_kind is TopologyKind.STAR else 1
    return GeometricSumLaw(tuple(i / (2 * n) for i in range(1, n + 1)), scale=scale)


def sample_geometric(p: float, rng: np.random.Generator, size: int | None = None):
    """Geometric on {1, 2, ...} by inverse CDF: ceil(log U / log(1-p)).

    O(1) per draw for any p; p=1 is the degenerate point mass at 1.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if size is None:
        if p == 1.0:
            return 1
        u = 1.0 - rng.random()  # uniform on (0, 1]
        return max(1, math.ceil(math.log(u) / math.log1p(-p)))
    if p == 1.0:
        return np.ones(size, np.int64)
    u = 1.0 - rng.random(size)
    k = np.ceil(np.log(u) / math.log1p(-p)).astype(np.int64)
    np.maximum(k, 1, out=k)
    return k


def sample_law(law: GeometricSumLaw, rng: np.random.Generator, size: int | None = None):
    """Independent sample(s) of the geometric-sum law."""
    probs = np.asarray(law.probs)
    if size is None:
        total = 0
        for q in probs:
            total += sample_geometric(float(q), rng)
        return law.scale * total
    u = 1.0 - rng.random((size, probs.shape[0]))
    with np.errstate(divide="ignore"):  # log(1-p) = -inf at p=1 -> draw 1
        k = np.ceil(np.log(u) / np.log1p(-probs)).astype(np.int64)
    np.maximum(k, 1, out=k)
    return law.scale * k.sum(axis=1)


def displacement_mean_exact(t: int) -> float:
    """Exact E|W_t| for the simple symmetric +-1 walk, t even.

    Uses E D_{2m} = 1 + sum_{k=1}^{m-1} 2^{-2k} C(2k, k), with the central
    binomial terms built by the multiplicative recurrence
    r_{k+1} = r_k (2k+1)/(2k+2) (no factorial overflow).
    """
    if t < 2 or t % 2 != 0:
        raise ValueError("t must be an even integer >= 2")
    m = t // 2
    terms = []
    r = 0.5  # r_1 = 2^{-2} C(2,1) = 1/2
    for k in range(1, m):
        terms.append(r)
        r *= (2 * k + 1) / (2 * k + 2)
    return 1.0 + math.fsum(terms)
