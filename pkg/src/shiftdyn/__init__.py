"""Numerical toolkit for subspace dynamics of weighted shift operators."""

from .spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
    make_net,
)
from .weights import BlockWeights, ConstantWeights, PiecewiseWeights, TableWeights
from .operators import (
    BackwardShift,
    ComposeOp,
    DirectSumOp,
    IdentityOp,
    PowerOp,
    ScaledOp,
    WeightedShift,
    apply,
    apply_power,
    commute_check,
    invariance_check,
    is_invertible,
    operator_norm_bound,
    rolewicz_operator,
    shift_power_norm,
)
from .criteria import (
    CriterionData,
    CriterionReport,
    DenseSetSpec,
    ExplicitDenseSpec,
    InversePowerApproximant,
    PairApproximant,
    ProductDenseSpec,
    TableApproximant,
    arithmetic_iterates,
    build_example32_weights,
    check_subspace_criterion,
    common_subsequence_report,
    eval_direct_sum_criterion,
    eval_forward_criterion,
    lift_criterion,
    split_criterion,
)
from .orbits import (
    OrbitGeometry,
    compute_orbit,
    density_report,
    distance_trace_to_target,
    map_orbit_by_commutant,
    return_set,
    transitivity_witness,
)
from .experiments import (
    EXPERIMENT_RUNNERS,
    ExperimentReport,
    recompute_verdicts,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "BILATERAL",
    "UNILATERAL",
    "CoordinateSubspace",
    "DirectSumSubspace",
    "DirectSumVector",
    "SparseVector",
    "make_net",
    "BlockWeights",
    "ConstantWeights",
    "PiecewiseWeights",
    "TableWeights",
    "BackwardShift",
    "ComposeOp",
    "DirectSumOp",
    "IdentityOp",
    "PowerOp",
    "ScaledOp",
    "WeightedShift",
    "apply",
    "apply_power",
    "commute_check",
    "invariance_check",
    "is_invertible",
    "operator_norm_bound",
    "rolewicz_operator",
    "shift_power_norm",
    "CriterionData",
    "CriterionReport",
    "DenseSetSpec",
    "ExplicitDenseSpec",
    "InversePowerApproximant",
    "PairApproximant",
    "ProductDenseSpec",
    "TableApproximant",
    "arithmetic_iterates",
    "build_example32_weights",
    "check_subspace_criterion",
    "common_subsequence_report",
    "eval_direct_sum_criterion",
    "eval_forward_criterion",
    "lift_criterion",
    "split_criterion",
    "OrbitGeometry",
    "compute_orbit",
    "density_report",
    "distance_trace_to_target",
    "map_orbit_by_commutant",
    "return_set",
    "transitivity_witness",
    "EXPERIMENT_RUNNERS",
    "ExperimentReport",
    "recompute_verdicts",
    "run_experiment",
    "__version__",
]
