"""Asymmetric speeds on the star: universal bounds and the p -> 1 blow-up.

For p in (1/2, 1) the mean extinction time sits inside the universal
window [(2 + (2p-1)/2) n - 1, 2n/(1-p)]; as p -> 1 the leading
coefficient grows like log(1/(1-p)).  Two lazy coupon-collector processes
bracket that regime: a threshold time T' that the extinction time
dominates, and an uncollected count V that controls the remnant after a
long burn-in.
"""

import math

import numpy as np

from annihilate import (
    CouponParams,
    SimulationParams,
    SystemKind,
    coupon_collector_threshold,
    coupon_uncollected,
    law_mean,
    one_type_star_law,
    run_many,
    star,
)
from annihilate.seeding import derive_trial_seed

N = 200
TRIALS = 4000
rng = np.random.default_rng(11)

print(f"{'p':>5} {'mean T':>9} {'lower':>7} {'upper':>7} "
      f"{'mean/(n log(1/(1-p)))':>22} {'vs one-type':>12}")
t1 = law_mean(one_type_star_law(N))
for i, p in enumerate((0.6, 0.75, 0.9, 0.95, 0.98)):
    params = SimulationParams(star(N), SystemKind.TWO_TYPE, p=p)
    seeds = [derive_trial_seed(11000 + i, 0, t) for t in range(TRIALS)]
    t = run_many(params, seeds, jobs=4).extinction_times
    lower = (2 + (2 * p - 1) / 2) * N - 1
    upper = 2 * N / (1 - p)
    coeff = t.mean() / (N * math.log(1 / (1 - p)))
    print(f"{p:>5} {t.mean():>9.1f} {lower:>7.0f} {upper:>7.0f} "
          f"{coeff:>22.2f} {t.mean() / t1:>12.2f}")

print()
print("the normalized column drifting toward a constant as p -> 1 is the")
print("log(1/(1-p)) scaling of the leading coefficient")

print()
print("coupon surrogates at n=10^4:")
params = CouponParams(n=10_000, p=0.99, epsilon=0.5)
cutoff = 2 * (1 - params.epsilon) * params.t_p
draws = np.array([coupon_collector_threshold(params, rng) for _ in range(500)])
print(f"   threshold T' (p=0.99, eps=0.5): mean {draws.mean():.0f}, "
      f"P(T' <= {cutoff:.0f}) = {(draws <= cutoff).mean():.3f}")
params = CouponParams(n=10_000, p=0.995, r=5.0)
vs = np.array([coupon_uncollected(params, rng) for _ in range(2000)])
print(f"   uncollected V (p=0.995, r=5): mean {vs.mean():.1f}, "
      f"P(V >= {(1 - params.p) * params.n:.0f}) = "
      f"{(vs >= (1 - params.p) * params.n).mean():.4f}")
