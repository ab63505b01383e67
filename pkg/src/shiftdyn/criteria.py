"""Transitivity and subspace-transitivity criteria for weighted shifts.

Three evaluators share one report shape:

* ``eval_forward_criterion``: weight-product test for a single invertible
  bilateral shift at a chosen basis vector.  The forward trace is the log
  product of weights ahead of the index; the backward trace is the log of
  the inverse-side product.
* ``eval_direct_sum_criterion``: the pairwise version; each trace entry is
  the max of the two component entries at the same iterate.
* ``check_subspace_criterion``: the dense-set formulation.  Dense subsets of
  the subspace are sampled deterministically, orbit decay and approximant
  quality are measured at each iterate, and exact invariance is checked.

A "satisfied-to-horizon" verdict is evidence at the evaluated iterates,
never a proof; "violated" always carries a concrete witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .operators import (
    BILATERAL,
    DirectSumOp,
    NotInvertibleError,
    OperatorExpr,
    UnsupportedOperatorError,
    WeightedShift,
    apply_power,
    invariance_check,
    is_invertible,
    shift_power_norm,
)
from .spaces import (
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
    make_net,
)
from .weights import BlockWeights, WeightSequence

VERDICT_SATISFIED = "satisfied-to-horizon"
VERDICT_VIOLATED = "violated"
VERDICT_UNDECIDED = "undecided"

DEFAULT_TOL = 1e-6
DEFAULT_COUNT = 20
DEFAULT_SAMPLE_BUDGET = 16

# A net enumeration stage is abandoned before it would enumerate more than
# this many candidate vectors; dense-set sampling is budget-driven anyway.
_MAX_STAGE_CANDIDATES = 250_000
_MAX_STAGES = 4


class CriterionDataError(ValueError):
    """Raised when criterion data is malformed or inconsistent."""


class ConstructionError(RuntimeError):
    """Raised when a self-verifying construction fails its own certificate."""


def _log_or_neg_inf(value: float) -> float:
    return math.log(value) if value > 0.0 else -math.inf


def arithmetic_iterates(step: int, count: int, start: Optional[int] = None) -> tuple[int, ...]:
    """n_k = start + (k-1) * step for k = 1..count (start defaults to step)."""
    if step < 1 or count < 1:
        raise ValueError("step and count must be >= 1")
    first = step if start is None else start
    if first < 1:
        raise ValueError("iterates must be positive")
    return tuple(first + (k - 1) * step for k in range(1, count + 1))


# ---------------------------------------------------------------------------
# Dense-set samplers and approximants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DenseSetSpec:
    """Deterministic enumeration of finitely supported members of a subspace.

    Stage s (s = 1, 2, ...) enumerates the net with support size
    ``base_support + s - 1``, coefficient step 2**(1-s), coefficient range
    and norm cap ``radius_cap * s``.  Later stages refine and extend earlier
    ones, so the enumeration exhausts a dense subset of the subspace in the
    limit; callers draw a finite prefix via ``samples``.
    """

    subspace: CoordinateSubspace
    base_support: int = 1
    radius_cap: float = 1.0

    def __post_init__(self) -> None:
        if self.base_support < 1:
            raise CriterionDataError("base_support must be >= 1")
        if not (self.radius_cap > 0.0):
            raise CriterionDataError("radius_cap must be positive")

    def samples(self, budget: int) -> list[SparseVector]:
        out: list[SparseVector] = []
        seen: set = set()
        for stage in range(1, _MAX_STAGES + 1):
            support = self.base_support + stage - 1
            step = 2.0 ** (1 - stage)
            bound = self.radius_cap * stage
            ticks = int(bound / step)
            grid = [t * step for t in range(-ticks, ticks + 1)]
            if len(grid) ** support > _MAX_STAGE_CANDIDATES:
                break
            for vec in make_net(self.subspace, support, grid, bound):
                key = tuple(vec.items())
                if key not in seen:
                    seen.add(key)
                    out.append(vec)
                    if len(out) >= budget:
                        return out
        return out

    def describe(self) -> dict:
        return {
            "kind": "net",
            "subspace": self.subspace.describe(),
            "base_support": self.base_support,
            "radius_cap": self.radius_cap,
        }


@dataclass(frozen=True)
class ExplicitDenseSpec:
    """A fixed, explicitly listed sample family (used by extraction output)."""

    vectors: tuple
    subspace_description: Optional[dict] = None

    def samples(self, budget: int) -> list:
        return list(self.vectors[:budget])

    def describe(self) -> dict:
        return {"kind": "explicit", "size": len(self.vectors)}


@dataclass(frozen=True)
class ProductDenseSpec:
    """Pairs drawn from two component enumerations, row-major."""

    left: Union[DenseSetSpec, ExplicitDenseSpec]
    right: Union[DenseSetSpec, ExplicitDenseSpec]

    def samples(self, budget: int) -> list[DirectSumVector]:
        per_side = max(1, math.isqrt(budget - 1) + 1) if budget > 0 else 0
        ls = self.left.samples(per_side)
        rs = self.right.samples(per_side)
        out = [DirectSumVector(a, b) for a in ls for b in rs]
        return out[:budget]

    def describe(self) -> dict:
        return {"kind": "product", "left": self.left.describe(), "right": self.right.describe()}


@dataclass(frozen=True)
class InversePowerApproximant:
    """x_k = T**(-n_k) y; the canonical choice for invertible shifts."""

    def describe(self) -> dict:
        return {"kind": "inverse_power"}


@dataclass(frozen=True)
class PairApproximant:
    left: object
    right: object

    def describe(self) -> dict:
        return {"kind": "pair", "left": self.left.describe(), "right": self.right.describe()}


@dataclass(frozen=True)
class TableApproximant:
    """Explicit approximants keyed by (iterate position, sample position)."""

    entries: tuple  # ((step_index, sample_index), vector) pairs

    def lookup(self, step_index: int, sample_index: int):
        for (k, s), vec in self.entries:
            if k == step_index and s == sample_index:
                return vec
        raise CriterionDataError(
            f"no tabulated approximant for iterate {step_index}, sample {sample_index}"
        )

    def describe(self) -> dict:
        return {"kind": "table", "size": len(self.entries)}


ApproximantSpec = Union[InversePowerApproximant, PairApproximant, TableApproximant]


def _approximant_fn(spec: ApproximantSpec, op: OperatorExpr) -> Callable:
    if isinstance(spec, InversePowerApproximant):
        return lambda k_idx, power, target, s_idx: apply_power(op, target, -power)
    if isinstance(spec, PairApproximant):
        if not isinstance(op, DirectSumOp):
            raise CriterionDataError("pair approximant requires a direct-sum operator")
        left_fn = _approximant_fn(spec.left, op.left)
        right_fn = _approximant_fn(spec.right, op.right)
        return lambda k_idx, power, target, s_idx: DirectSumVector(
            left_fn(k_idx, power, target.left, s_idx),
            right_fn(k_idx, power, target.right, s_idx),
        )
    if isinstance(spec, TableApproximant):
        return lambda k_idx, power, target, s_idx: spec.lookup(k_idx, s_idx)
    raise CriterionDataError(f"unknown approximant spec {type(spec).__name__}")


@dataclass(frozen=True)
class CriterionData:
    """Everything a subspace-criterion check needs besides the operator."""

    iterates: tuple[int, ...]
    dense_decay: Union[DenseSetSpec, ExplicitDenseSpec, ProductDenseSpec]
    dense_targets: Union[DenseSetSpec, ExplicitDenseSpec, ProductDenseSpec]
    approximant: ApproximantSpec

    def __post_init__(self) -> None:
        it = tuple(int(n) for n in self.iterates)
        if not it:
            raise CriterionDataError("at least one iterate is required")
        if it[0] < 1 or any(b <= a for a, b in zip(it, it[1:])):
            raise CriterionDataError("iterates must be strictly increasing positive integers")
        object.__setattr__(self, "iterates", it)

    def describe(self) -> dict:
        return {
            "iterates": list(self.iterates),
            "dense_decay": self.dense_decay.describe(),
            "dense_targets": self.dense_targets.describe(),
            "approximant": self.approximant.describe(),
        }


# ---------------------------------------------------------------------------
# Report shape and verdict rules
# ---------------------------------------------------------------------------

@dataclass
class CriterionReport:
    kind: str
    verdict: str
    tol: float
    count: int
    iterates: tuple[int, ...]
    forward_log_trace: tuple[float, ...]
    backward_log_trace: tuple[float, ...]
    invariance_trace: tuple[bool, ...]
    convention: Optional[str] = None
    witness: Optional[dict] = None
    notes: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)


def _tail_ok(trace: Sequence[float], log_tol: float) -> bool:
    """Calibrated "eventually decreasing": the last half of the trace is
    nonincreasing and either strictly dropped or already at tolerance."""
    if not trace:
        return False
    tail = trace[-max(2, len(trace) // 2):]
    if any(b > a for a, b in zip(tail, tail[1:])):
        return False
    return tail[-1] < tail[0] or tail[-1] <= log_tol


def decide_verdict(
    traces: Sequence[Sequence[float]],
    invariance: Sequence[bool],
    iterates: Sequence[int],
    tol: float,
) -> tuple[str, Optional[dict]]:
    """Shared verdict rules.

    violated: an invariance failure (witnessed by its iterate) or no decay
    at all (final log product >= 0, i.e. the product never drops below 1).
    satisfied-to-horizon: every trace ends at or below log(tol) and its tail
    is nonincreasing.  Anything else is undecided.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    log_tol = math.log(tol)
    for pos, ok in enumerate(invariance):
        if not ok:
            return VERDICT_VIOLATED, {
                "reason": "invariance-failure",
                "step_index": pos + 1,
                "power": iterates[pos],
            }
    finals = [trace[-1] for trace in traces if trace]
    if not finals:
        return VERDICT_UNDECIDED, None
    if all(f <= log_tol for f in finals) and all(_tail_ok(t, log_tol) for t in traces if t):
        return VERDICT_SATISFIED, None
    worst = max(finals)
    if worst >= 0.0:
        return VERDICT_VIOLATED, {
            "reason": "no-decay",
            "step_index": len(iterates),
            "power": iterates[-1],
            "max_final_log_product": worst,
        }
    return VERDICT_UNDECIDED, None


# ---------------------------------------------------------------------------
# Weight-product evaluators
# ---------------------------------------------------------------------------

def _prepare_shift(op: OperatorExpr, subspace: CoordinateSubspace, basis_index: int) -> WeightedShift:
    if not isinstance(op, WeightedShift):
        raise UnsupportedOperatorError("weight-product criteria apply to pure forward shifts")
    if op.space_kind != BILATERAL or not is_invertible(op):
        raise NotInvertibleError("the weight-product criteria need an invertible bilateral shift")
    if not subspace.contains_index(basis_index):
        raise ValueError(f"basis index {basis_index} does not belong to the subspace")
    return op


def _clip_iterates(iterates: Sequence[int], count: int) -> tuple[int, ...]:
    it = tuple(int(n) for n in iterates)
    if count < 1:
        raise ValueError("count must be >= 1")
    clipped = it[:count]
    if not clipped:
        raise ValueError("no iterates supplied")
    if clipped[0] < 1 or any(b <= a for a, b in zip(clipped, clipped[1:])):
        raise ValueError("iterates must be strictly increasing positive integers")
    return clipped


def eval_forward_criterion(
    op: OperatorExpr,
    subspace: CoordinateSubspace,
    basis_index: int,
    iterates: Sequence[int],
    count: int = DEFAULT_COUNT,
    tol: float = DEFAULT_TOL,
    convention: str = "thm12",
) -> CriterionReport:
    """Weight-product transitivity test along ``iterates`` at one basis vector."""
    shift = _prepare_shift(op, subspace, basis_index)
    steps = _clip_iterates(iterates, count)
    forward = tuple(shift_power_norm(shift, basis_index, n, "forward") for n in steps)
    backward = tuple(
        shift_power_norm(shift, basis_index, n, "backward", convention) for n in steps
    )
    invariance = tuple(bool(invariance_check(shift, subspace, n)) for n in steps)
    verdict, witness = decide_verdict([forward, backward], invariance, steps, tol)
    notes = []
    if len(steps) < count:
        notes.append(f"only {len(steps)} iterates available of the {count} requested")
    return CriterionReport(
        kind="forward",
        verdict=verdict,
        tol=tol,
        count=len(steps),
        iterates=steps,
        forward_log_trace=forward,
        backward_log_trace=backward,
        invariance_trace=invariance,
        convention=convention,
        witness=witness,
        notes=tuple(notes),
    )


def eval_direct_sum_criterion(
    left_op: OperatorExpr,
    right_op: OperatorExpr,
    left_subspace: CoordinateSubspace,
    right_subspace: CoordinateSubspace,
    left_index: int,
    right_index: int,
    iterates: Sequence[int],
    count: int = DEFAULT_COUNT,
    tol: float = DEFAULT_TOL,
    convention: str = "thm12",
) -> CriterionReport:
    """Joint weight-product test for a direct sum of two shifts.

    Each trace entry is the max of the two component log products at the
    same iterate, so the combined trace decays iff both components decay
    along a common iterate sequence.
    """
    left = _prepare_shift(left_op, left_subspace, left_index)
    right = _prepare_shift(right_op, right_subspace, right_index)
    steps = _clip_iterates(iterates, count)

    lf = tuple(shift_power_norm(left, left_index, n, "forward") for n in steps)
    rf = tuple(shift_power_norm(right, right_index, n, "forward") for n in steps)
    lb = tuple(shift_power_norm(left, left_index, n, "backward", convention) for n in steps)
    rb = tuple(shift_power_norm(right, right_index, n, "backward", convention) for n in steps)
    forward = tuple(max(a, b) for a, b in zip(lf, rf))
    backward = tuple(max(a, b) for a, b in zip(lb, rb))
    invariance = tuple(
        bool(invariance_check(left, left_subspace, n))
        and bool(invariance_check(right, right_subspace, n))
        for n in steps
    )
    verdict, witness = decide_verdict([forward, backward], invariance, steps, tol)
    return CriterionReport(
        kind="direct-sum",
        verdict=verdict,
        tol=tol,
        count=len(steps),
        iterates=steps,
        forward_log_trace=forward,
        backward_log_trace=backward,
        invariance_trace=invariance,
        convention=convention,
        witness=witness,
        details={
            "left_forward_log_trace": lf,
            "right_forward_log_trace": rf,
            "left_backward_log_trace": lb,
            "right_backward_log_trace": rb,
        },
    )


# ---------------------------------------------------------------------------
# Dense-set criterion
# ---------------------------------------------------------------------------

def check_subspace_criterion(
    op: OperatorExpr,
    subspace,
    data: CriterionData,
    tol: float = DEFAULT_TOL,
    count: int = DEFAULT_COUNT,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
) -> CriterionReport:
    """Dense-set subspace-transitivity criterion at a finite horizon.

    Per iterate n_k the report records (in log scale) the worst orbit norm
    over the decay samples, the worst approximant norm, and the worst
    approximant residual ||T**n_k x_k - y||, plus exact invariance of the
    subspace under the n_k-th power.
    """
    steps = _clip_iterates(data.iterates, count)
    decay_samples = data.dense_decay.samples(sample_budget)
    target_samples = data.dense_targets.samples(sample_budget)
    notes = []
    if _is_trivial_subspace(subspace):
        notes.append("subspace is the whole space; the statement reduces to the classical one")
    if not decay_samples or not target_samples:
        return CriterionReport(
            kind="subspace",
            verdict=VERDICT_UNDECIDED,
            tol=tol,
            count=len(steps),
            iterates=steps,
            forward_log_trace=(),
            backward_log_trace=(),
            invariance_trace=(),
            notes=tuple(notes + ["empty dense-set sample"]),
        )
    for pos, sample in enumerate(decay_samples + target_samples):
        if not subspace.contains(sample):
            raise CriterionDataError(f"dense-set sample {pos} lies outside the subspace")

    approximant = _approximant_fn(data.approximant, op)
    decay_trace: list[float] = []
    norm_trace: list[float] = []
    residual_trace: list[float] = []
    invariance: list[bool] = []
    witness: Optional[dict] = None

    for k_idx, power in enumerate(steps, start=1):
        decay_trace.append(
            _log_or_neg_inf(max(apply_power(op, x, power).norm() for x in decay_samples))
        )
        worst_norm = 0.0
        worst_residual = 0.0
        for s_idx, target in enumerate(target_samples):
            candidate = approximant(k_idx, power, target, s_idx)
            if not subspace.contains(candidate):
                witness = {
                    "reason": "approximant-outside-subspace",
                    "step_index": k_idx,
                    "power": power,
                    "sample_index": s_idx,
                }
                break
            worst_norm = max(worst_norm, candidate.norm())
            worst_residual = max(
                worst_residual, (apply_power(op, candidate, power) - target).norm()
            )
        if witness is not None:
            break
        norm_trace.append(_log_or_neg_inf(worst_norm))
        residual_trace.append(_log_or_neg_inf(worst_residual))
        invariance.append(bool(invariance_check(op, subspace, power)))

    evaluated = steps[: len(norm_trace)]
    if witness is not None:
        verdict = VERDICT_VIOLATED
    else:
        verdict, witness = decide_verdict(
            [decay_trace, norm_trace, residual_trace], invariance, evaluated, tol
        )
    combined_backward = tuple(max(a, b) for a, b in zip(norm_trace, residual_trace))
    return CriterionReport(
        kind="subspace",
        verdict=verdict,
        tol=tol,
        count=len(steps),
        iterates=steps,
        forward_log_trace=tuple(decay_trace),
        backward_log_trace=combined_backward,
        invariance_trace=tuple(invariance),
        witness=witness,
        notes=tuple(notes),
        details={
            "approximant_norm_log_trace": tuple(norm_trace),
            "approximant_residual_log_trace": tuple(residual_trace),
            "decay_sample_count": len(decay_samples),
            "target_sample_count": len(target_samples),
        },
    )


def _is_trivial_subspace(subspace) -> bool:
    if isinstance(subspace, DirectSumSubspace):
        return subspace.left.is_whole_space() and subspace.right.is_whole_space()
    return subspace.is_whole_space()


# ---------------------------------------------------------------------------
# Lifting and splitting
# ---------------------------------------------------------------------------

def lift_criterion(data: CriterionData) -> CriterionData:
    """Criterion data for the doubled operator T (+) T on M (+) M.

    Dense sets become products of the original with itself and approximants
    act componentwise; each lifted trace entry is at most sqrt(2) times the
    original entry because pair norms add in squares.
    """
    if isinstance(data.dense_decay, ProductDenseSpec) or isinstance(
        data.dense_targets, ProductDenseSpec
    ):
        raise CriterionDataError("data is already in product form; lift expects scalar data")
    return CriterionData(
        iterates=data.iterates,
        dense_decay=ProductDenseSpec(data.dense_decay, data.dense_decay),
        dense_targets=ProductDenseSpec(data.dense_targets, data.dense_targets),
        approximant=PairApproximant(data.approximant, data.approximant),
    )


def split_criterion(data: CriterionData) -> tuple[CriterionData, CriterionData]:
    """Component criterion data of product-form data; inverse to lifting."""
    if not isinstance(data.dense_decay, ProductDenseSpec) or not isinstance(
        data.dense_targets, ProductDenseSpec
    ):
        raise CriterionDataError("split requires product-form dense sets")
    if not isinstance(data.approximant, PairApproximant):
        raise CriterionDataError("split requires a componentwise approximant")
    left = CriterionData(
        iterates=data.iterates,
        dense_decay=data.dense_decay.left,
        dense_targets=data.dense_targets.left,
        approximant=data.approximant.left,
    )
    right = CriterionData(
        iterates=data.iterates,
        dense_decay=data.dense_decay.right,
        dense_targets=data.dense_targets.right,
        approximant=data.approximant.right,
    )
    return left, right


# ---------------------------------------------------------------------------
# Opposed block construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Example32Certificate:
    horizon: int
    count: int
    tol: float
    floor: float
    left_verdict: str
    right_verdict: str
    min_max_forward_log2: int
    min_max_backward_log2: int
    ok: bool

    def describe(self) -> dict:
        return {
            "horizon": self.horizon,
            "count": self.count,
            "tol": self.tol,
            "floor": self.floor,
            "left_verdict": self.left_verdict,
            "right_verdict": self.right_verdict,
            "min_max_forward_log2": self.min_max_forward_log2,
            "min_max_backward_log2": self.min_max_backward_log2,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Example32Result:
    left_weights: WeightSequence
    right_weights: WeightSequence
    left_iterates: tuple[int, ...]
    right_iterates: tuple[int, ...]
    certificate: Example32Certificate


def build_example32_weights(
    horizon: int,
    count: int = 6,
    tol: float = DEFAULT_TOL,
    floor: float = 0.5,
) -> Example32Result:
    """Two block weight sequences that are individually transitive but share
    no common iterate sequence.

    Both take values in {1/2, 2} on blocks of length 4**k; the second is
    phase-shifted by one block, which makes it the pointwise reciprocal of
    the first.  Each sequence's forward product dips below any bound at the
    ends of its own 1/2-blocks, while for every n the larger of the two
    products is at least ``floor`` (the log2 paths are exact integers, so
    the scan is exact).  The same holds for the backward products by the
    reciprocal-mirror layout of negative indices.
    """
    if horizon < 64:
        raise ValueError("horizon must be >= 64")
    left = BlockWeights(4, (0.5, 2.0), phase=0)
    right = BlockWeights(4, (0.5, 2.0), phase=1)
    left_iterates = tuple(left.block_ends(count, 0.5))
    right_iterates = tuple(right.block_ends(count, 0.5))

    whole = CoordinateSubspace.full(BILATERAL)
    left_report = eval_forward_criterion(
        WeightedShift(left, BILATERAL), whole, 0, left_iterates, count=count, tol=tol
    )
    right_report = eval_forward_criterion(
        WeightedShift(right, BILATERAL), whole, 0, right_iterates, count=count, tol=tol
    )

    floor_log2 = math.log2(floor)
    min_max_forward = _min_max_log2_path(left, right, horizon, forward=True)
    min_max_backward = _min_max_log2_path(left, right, horizon, forward=False)
    ok = (
        left_report.verdict == VERDICT_SATISFIED
        and right_report.verdict == VERDICT_SATISFIED
        and min_max_forward >= floor_log2 - 1e-12
        and min_max_backward >= floor_log2 - 1e-12
    )
    certificate = Example32Certificate(
        horizon=horizon,
        count=count,
        tol=tol,
        floor=floor,
        left_verdict=left_report.verdict,
        right_verdict=right_report.verdict,
        min_max_forward_log2=min_max_forward,
        min_max_backward_log2=min_max_backward,
        ok=ok,
    )
    if not ok:
        raise ConstructionError(f"opposed block construction failed its certificate: {certificate}")
    return Example32Result(left, right, left_iterates, right_iterates, certificate)


def _min_max_log2_path(
    left: BlockWeights, right: BlockWeights, horizon: int, forward: bool
) -> int:
    """min over 1 <= n <= horizon of max(log2 product) -- exact in integers.

    Forward products multiply w(0..n-1); backward products multiply
    1/w(-1..-n).  Weight values are restricted to {1/2, 2}, so each log2
    path moves by exactly +-1 per step.
    """
    worst = 0
    path_left = 0
    path_right = 0
    for n in range(1, horizon + 1):
        if forward:
            path_left += 1 if left.value_at(n - 1) == 2.0 else -1
            path_right += 1 if right.value_at(n - 1) == 2.0 else -1
        else:
            path_left -= 1 if left.value_at(-n) == 2.0 else -1
            path_right -= 1 if right.value_at(-n) == 2.0 else -1
        worst = min(worst, max(path_left, path_right))
    return worst


@dataclass(frozen=True)
class CommonSubsequenceReport:
    horizon: int
    common: tuple[int, ...]
    verdict: str  # "disjoint-to-horizon" or "overlapping"


def common_subsequence_report(
    left_iterates: Sequence[int], right_iterates: Sequence[int], horizon: int
) -> CommonSubsequenceReport:
    """Intersection of two iterate sequences up to a horizon."""
    common = sorted(
        set(n for n in left_iterates if n <= horizon)
        & set(n for n in right_iterates if n <= horizon)
    )
    verdict = "overlapping" if common else "disjoint-to-horizon"
    return CommonSubsequenceReport(horizon=horizon, common=tuple(common), verdict=verdict)
