"""Two-type on the complete graph: dominance over the p=1 law, occupancy.

The two-type extinction time stochastically dominates the geometric-sum
law sum X(i/2n) at every speed p (with equality at p=1, where red
particles never move).  Clustering of like colors slows the system down
beyond that floor; site occupancy nevertheless stays tiny.
"""

import math

import numpy as np

from annihilate import (
    SimulationParams,
    SystemKind,
    complete,
    dominance_check,
    law_mean,
    one_type_complete_law,
    run_many,
    run_trajectory,
    sample_law,
    two_type_p1_law,
)
from annihilate.seeding import derive_trial_seed

N = 100
TRIALS = 5000
rng = np.random.default_rng(3)

floor_law = two_type_p1_law(complete(N).kind, N)
ref = sample_law(floor_law, rng, size=TRIALS)
t1_mean = law_mean(one_type_complete_law(N))
print(f"floor law mean (p=1): {floor_law.exact_mean:.1f};"
      f" one-type exact mean: {t1_mean:.1f}")
print()

for p in (0.5, 0.75, 1.0):
    params = SimulationParams(complete(N), SystemKind.TWO_TYPE, p=p)
    seeds = [derive_trial_seed(7000 + int(p * 100), 0, t) for t in range(TRIALS)]
    sim = run_many(params, seeds).extinction_times
    verdict = dominance_check(sim, ref, alpha=0.01)
    print(f"p={p}: mean T = {sim.mean():7.1f}   "
          f"excess over floor {sim.mean() / floor_law.exact_mean - 1:+.1%}   "
          f"vs one-type x{sim.mean() / t1_mean:.2f}   dominance "
          f"{'pass' if verdict.passed else 'FAIL'}")

print()
cap = math.ceil(6 * math.log(N) / math.log(math.log(N)))
params = SimulationParams(complete(N), SystemKind.TWO_TYPE, p=0.5)
occ = [run_trajectory(params, derive_trial_seed(8000, 0, t)).max_occupancy
       for t in range(100)]
hist = np.bincount(occ)
print(f"max site occupancy over 100 runs (bound {cap}):")
for value, count in enumerate(hist):
    if count:
        print(f"   occupancy {value}: {'#' * count} ({count})")
