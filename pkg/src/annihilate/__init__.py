"""Annihilating random walks on complete and star graphs.

A simulator and verification harness for one-type and two-type
(red/blue, speed parameter p) annihilating particle systems, with the
closed-form extinction-time laws, comparison processes, and statistical
tests needed to check the exact identities and bounds they satisfy.
"""

from .comparison import (
    BiasedWalkPath,
    CoupledWalkPath,
    CouponParams,
    CouplingViolationError,
    coupled_core_walk,
    coupon_collector_threshold,
    coupon_uncollected,
    extend_sign_series,
    sample_displacement,
    simulate_biased_walk,
)
from .dynamics import (
    BatchResult,
    IdentityReport,
    SimulationParams,
    Trajectory,
    default_max_steps,
    max_occupancy,
    run_many,
    run_trajectory,
    verify_master_identity,
)
from .laws import (
    EULER_MASCHERONI,
    GeometricSumLaw,
    displacement_mean_exact,
    law_mean,
    law_variance,
    one_type_complete_law,
    one_type_star_law,
    sample_geometric,
    sample_law,
    two_type_p1_law,
)
from .seeding import SplitMix64, derive_trial_seed, mix64
from .state import (
    BLUE,
    RED,
    Coloring,
    Configuration,
    ParticleHandle,
    StepOutcome,
    SystemKind,
    Topology,
    TopologyKind,
    complete,
    move_and_resolve,
    new_configuration,
    sample_mover,
    star,
)
from .stats import (
    FitModel,
    FitResult,
    SampleSummary,
    TestVerdict,
    VerdictKind,
    bound_check,
    dkw_equality_test,
    dominance_check,
    fit_second_order,
)

__version__ = "0.1.0"
