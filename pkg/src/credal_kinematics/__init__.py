"""Jeffrey conditioning over finite credal sets, with the capacity and
ergodic-average machinery to study where repeated updates lead."""

from .capacities import (
    InvariantStructure,
    LowerUpperView,
    TransformationMap,
    check_subadditive_upper,
    check_superadditive_lower,
    choquet_integral,
    in_core,
    invariant_events,
    is_continuous_at_omega,
    is_convex,
    is_ergodic,
    is_invariant,
    is_strongly_invariant,
)
from .ergodic import (
    OrbitRun,
    ReweightPolicy,
    StationarySequenceSpec,
    UpdateTrace,
    drive_updates_countable,
    empirical_average,
    ergodic_interval_check,
    finite_sigma_update,
    lemma2_bounds_check,
    run_orbit,
    slln_check,
    uniform_on_partition,
)
from .errors import DomainError, NotARefinementError, NullConditioningError, ScenarioError
from .geometric import (
    BehaviorLabel,
    classify_behavior,
    contraction_condition,
    geometric_conditional,
    jg_update,
    jg_updated_view,
    smallest_superset,
)
from .jeffrey import (
    LikelihoodSpec,
    PartitionReweight,
    check_condition_J,
    domination_constant,
    dynamic_update,
    extended_jeffrey_pivot_mass,
    jeffrey_update,
    lrfj,
)
from .measures import (
    BoundedFunction,
    CredalSet,
    Event,
    ProbMeasure,
    SampleSpace,
    dtilde_step,
    hausdorff_distance,
    probability_of,
    uniform_distance,
    weak_distance,
)
from .partitions import GeneratedAlgebra, Partition, coarsest_partition, element_hausdorff, reassess, refine

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NotARefinementError",
    "NullConditioningError",
    "ScenarioError",
    "InvariantStructure",
    "LowerUpperView",
    "TransformationMap",
    "check_subadditive_upper",
    "check_superadditive_lower",
    "choquet_integral",
    "in_core",
    "invariant_events",
    "is_continuous_at_omega",
    "is_convex",
    "is_ergodic",
    "is_invariant",
    "is_strongly_invariant",
    "OrbitRun",
    "ReweightPolicy",
    "StationarySequenceSpec",
    "UpdateTrace",
    "drive_updates_countable",
    "empirical_average",
    "ergodic_interval_check",
    "finite_sigma_update",
    "lemma2_bounds_check",
    "run_orbit",
    "slln_check",
    "uniform_on_partition",
    "BehaviorLabel",
    "classify_behavior",
    "contraction_condition",
    "geometric_conditional",
    "jg_update",
    "jg_updated_view",
    "smallest_superset",
    "LikelihoodSpec",
    "PartitionReweight",
    "check_condition_J",
    "domination_constant",
    "dynamic_update",
    "extended_jeffrey_pivot_mass",
    "jeffrey_update",
    "lrfj",
    "BoundedFunction",
    "CredalSet",
    "Event",
    "ProbMeasure",
    "SampleSpace",
    "dtilde_step",
    "hausdorff_distance",
    "probability_of",
    "uniform_distance",
    "weak_distance",
    "GeneratedAlgebra",
    "Partition",
    "coarsest_partition",
    "element_hausdorff",
    "reassess",
    "refine",
]
