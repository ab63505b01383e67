"""Weighted shift operators and the expressions built from them.

The forward weighted shift sends basis vector e(n) to w(n) e(n+1).  Its
inverse, when the underlying space is bilateral and the weights are bounded
below, sends e(n) to e(n-1) / w(n-1).  Expressions combine shifts with the
unweighted backward shift, the identity, scalar multiples, integer powers,
compositions, and two-component direct sums.

Every scalar-space expression here maps each basis vector to a scalar
multiple of a single basis vector at a fixed index offset (there is no sum
node), so expressions compile to an exact "shift monomial" normal form.
That normal form is what makes power application, invariance decisions, and
norm bounds exact instead of sampled.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

from .spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
    SpaceMismatchError,
    check_space_kind,
)
from .weights import ConstantWeights, WeightSequence

# Powers up to this many steps multiply weights directly in the linear
# domain, which is exact for dyadic weights; longer ranges switch to the
# generators' log-range sums.
LINEAR_POWER_LIMIT = 4096


class NotInvertibleError(ValueError):
    """Raised when a negative power of a non-invertible operator is requested."""


class UnsupportedOperatorError(TypeError):
    """Raised when an operation does not apply to the given expression shape."""


class OperatorExpr:
    space_kind: str


@dataclass(frozen=True)
class WeightedShift(OperatorExpr):
    """Forward weighted shift: e(n) -> w(n) e(n+1)."""

    weights: WeightSequence
    space_kind: str = BILATERAL

    def __post_init__(self) -> None:
        check_space_kind(self.space_kind)


@dataclass(frozen=True)
class BackwardShift(OperatorExpr):
    """Unweighted left shift; on a unilateral space e(0) is annihilated."""

    space_kind: str = UNILATERAL

    def __post_init__(self) -> None:
        check_space_kind(self.space_kind)


@dataclass(frozen=True)
class IdentityOp(OperatorExpr):
    space_kind: str = BILATERAL

    def __post_init__(self) -> None:
        check_space_kind(self.space_kind)


@dataclass(frozen=True)
class ScaledOp(OperatorExpr):
    scalar: complex
    child: OperatorExpr

    def __post_init__(self) -> None:
        object.__setattr__(self, "scalar", complex(self.scalar))

    @property
    def space_kind(self) -> str:  # type: ignore[override]
        return self.child.space_kind


@dataclass(frozen=True)
class PowerOp(OperatorExpr):
    child: OperatorExpr
    exponent: int

    def __post_init__(self) -> None:
        if not isinstance(self.exponent, int):
            raise TypeError("power exponent must be an integer")

    @property
    def space_kind(self) -> str:  # type: ignore[override]
        return self.child.space_kind


@dataclass(frozen=True)
class ComposeOp(OperatorExpr):
    """Composition outer(inner(x)); inner acts first."""

    outer: OperatorExpr
    inner: OperatorExpr

    def __post_init__(self) -> None:
        if self.outer.space_kind != self.inner.space_kind:
            raise SpaceMismatchError("cannot compose operators on different spaces")

    @property
    def space_kind(self) -> str:  # type: ignore[override]
        return self.outer.space_kind


@dataclass(frozen=True)
class DirectSumOp(OperatorExpr):
    left: OperatorExpr
    right: OperatorExpr

    def __post_init__(self) -> None:
        if isinstance(self.left, DirectSumOp) or isinstance(self.right, DirectSumOp):
            raise UnsupportedOperatorError("nested direct sums are not supported")

    @property
    def space_kind(self) -> str:  # type: ignore[override]
        return f"{self.left.space_kind}+{self.right.space_kind}"


def rolewicz_operator(scale: complex) -> ScaledOp:
    """Scalar multiple of the unilateral backward shift."""
    return ScaledOp(scale, BackwardShift(UNILATERAL))


# ---------------------------------------------------------------------------
# Direct application
# ---------------------------------------------------------------------------

def apply(op: OperatorExpr, vector) -> Union[SparseVector, DirectSumVector]:
    """Apply an expression to a vector, node by node."""
    if isinstance(op, DirectSumOp):
        if not isinstance(vector, DirectSumVector):
            raise SpaceMismatchError("direct-sum operator needs a direct-sum vector")
        return DirectSumVector(apply(op.left, vector.left), apply(op.right, vector.right))
    if not isinstance(vector, SparseVector):
        raise SpaceMismatchError("scalar operator applied to a non-scalar vector")
    if op.space_kind != vector.space_kind:
        raise SpaceMismatchError(
            f"operator on {op.space_kind} space applied to {vector.space_kind} vector"
        )
    if isinstance(op, IdentityOp):
        return vector
    if isinstance(op, WeightedShift):
        return SparseVector(
            vector.space_kind,
            [(i + 1, op.weights.value_at(i) * c) for i, c in vector.items()],
        )
    if isinstance(op, BackwardShift):
        if op.space_kind == UNILATERAL:
            return SparseVector(vector.space_kind, [(i - 1, c) for i, c in vector.items() if i >= 1])
        return SparseVector(vector.space_kind, [(i - 1, c) for i, c in vector.items()])
    if isinstance(op, ScaledOp):
        return op.scalar * apply(op.child, vector)
    if isinstance(op, PowerOp):
        return apply_power(op.child, vector, op.exponent)
    if isinstance(op, ComposeOp):
        return apply(op.outer, apply(op.inner, vector))
    raise UnsupportedOperatorError(f"cannot apply {type(op).__name__}")


# ---------------------------------------------------------------------------
# Monomial normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftMonomial:
    """Exact normal form of a scalar-space expression.

    The action is e(i) -> coefficient(i) * e(i + displacement), where
    coefficient(i) = scalar * prod over factors (w(i + offset)) ** (+-1),
    except that on a unilateral space inputs with i < annihilation_floor
    (when set) map to zero.
    """

    space_kind: str
    displacement: int
    scalar: complex
    factors: tuple[tuple[WeightSequence, int, bool], ...]  # (weights, offset, inverted)
    annihilation_floor: Optional[int] = None

    def coefficient(self, index: int) -> complex:
        if self.annihilation_floor is not None and index < self.annihilation_floor:
            return 0j
        value: complex = self.scalar
        for weights, offset, inverted in self.factors:
            w = weights.value_at(index + offset)
            value = value / w if inverted else value * w
        return value

    def log_magnitude(self, index: int) -> float:
        """log |coefficient(index)|; -inf on annihilated inputs."""
        if self.annihilation_floor is not None and index < self.annihilation_floor:
            return -math.inf
        if self.scalar == 0:
            return -math.inf
        total = math.log(abs(self.scalar))
        for weights, offset, inverted in self.factors:
            lw = weights.log_at(index + offset)
            total += -lw if inverted else lw
        return total

    @property
    def phase(self) -> complex:
        """Unit-modulus factor applied per step (weights are positive)."""
        if self.scalar == 0:
            return 1.0 + 0j
        return self.scalar / abs(self.scalar)

    def survival_floor_for_power(self, steps: int) -> Optional[int]:
        """Smallest input index that survives ``steps`` applications."""
        if self.annihilation_floor is None:
            return None
        if steps <= 0:
            return None
        if self.displacement >= 0:
            return self.annihilation_floor
        return self.annihilation_floor - (steps - 1) * self.displacement


_IDENTITY_FACTORS: tuple = ()


def compile_monomial(op: OperatorExpr) -> ShiftMonomial:
    """Reduce a scalar-space expression to its shift-monomial normal form."""
    if isinstance(op, DirectSumOp):
        raise UnsupportedOperatorError("direct sums have no scalar monomial form")
    if isinstance(op, IdentityOp):
        return ShiftMonomial(op.space_kind, 0, 1.0 + 0j, _IDENTITY_FACTORS)
    if isinstance(op, WeightedShift):
        return ShiftMonomial(op.space_kind, 1, 1.0 + 0j, ((op.weights, 0, False),))
    if isinstance(op, BackwardShift):
        floor = 1 if op.space_kind == UNILATERAL else None
        return ShiftMonomial(op.space_kind, -1, 1.0 + 0j, _IDENTITY_FACTORS, floor)
    if isinstance(op, ScaledOp):
        m = compile_monomial(op.child)
        return ShiftMonomial(
            m.space_kind, m.displacement, op.scalar * m.scalar, m.factors, m.annihilation_floor
        )
    if isinstance(op, ComposeOp):
        inner = compile_monomial(op.inner)
        outer = compile_monomial(op.outer)
        return _compose_monomials(outer, inner)
    if isinstance(op, PowerOp):
        m = compile_monomial(op.child)
        n = op.exponent
        if n < 0:
            m = invert_monomial(m)
            n = -n
        result = ShiftMonomial(m.space_kind, 0, 1.0 + 0j, _IDENTITY_FACTORS)
        for _ in range(n):
            result = _compose_monomials(m, result)
        return result
    raise UnsupportedOperatorError(f"cannot compile {type(op).__name__}")


def _compose_monomials(outer: ShiftMonomial, inner: ShiftMonomial) -> ShiftMonomial:
    factors = inner.factors + tuple(
        (w, offset + inner.displacement, inv) for w, offset, inv in outer.factors
    )
    floor: Optional[int] = None
    candidates = []
    if inner.annihilation_floor is not None:
        candidates.append(inner.annihilation_floor)
    if outer.annihilation_floor is not None:
        candidates.append(outer.annihilation_floor - inner.displacement)
    if candidates:
        floor = max(candidates)
    return ShiftMonomial(
        inner.space_kind,
        inner.displacement + outer.displacement,
        outer.scalar * inner.scalar,
        factors,
        floor,
    )


def invert_monomial(m: ShiftMonomial) -> ShiftMonomial:
    """Inverse monomial; exists iff the operator is invertible on its space."""
    if m.annihilation_floor is not None:
        raise NotInvertibleError("operator annihilates part of the basis; no inverse")
    if m.scalar == 0:
        raise NotInvertibleError("zero operator has no inverse")
    if m.space_kind == UNILATERAL and m.displacement != 0:
        raise NotInvertibleError(
            "unilateral shifts are not surjective; inverse requested on a non-invertible operator"
        )
    for weights, _, _ in m.factors:
        if weights.inf() <= 0.0:
            raise NotInvertibleError("weights are not bounded away from zero")
    factors = tuple((w, offset - m.displacement, not inv) for w, offset, inv in m.factors)
    return ShiftMonomial(m.space_kind, -m.displacement, 1.0 / m.scalar, factors, None)


def is_invertible(op: OperatorExpr) -> bool:
    if isinstance(op, DirectSumOp):
        return is_invertible(op.left) and is_invertible(op.right)
    try:
        invert_monomial(compile_monomial(op))
    except NotInvertibleError:
        return False
    return True


# ---------------------------------------------------------------------------
# Powers
# ---------------------------------------------------------------------------

def _power_coefficient(m: ShiftMonomial, index: int, steps: int) -> complex:
    """Coefficient of e(index + steps * d) in monomial**steps applied to e(index)."""
    d = m.displacement
    if m.annihilation_floor is not None:
        lowest = index + min(0, (steps - 1) * d)
        if lowest < m.annihilation_floor:
            return 0j
    if steps <= LINEAR_POWER_LIMIT:
        value: complex = m.scalar ** steps
        for t in range(steps):
            i = index + t * d
            for weights, offset, inverted in m.factors:
                w = weights.value_at(i + offset)
                value = value / w if inverted else value * w
        return value
    log_mag = _power_log_magnitude(m, index, steps)
    phase = m.phase ** steps
    return cmath.rect(math.exp(log_mag), cmath.phase(phase)) if phase != 1 else complex(math.exp(log_mag))


def _power_log_magnitude(m: ShiftMonomial, index: int, steps: int) -> float:
    """log |coefficient| of monomial**steps at a basis index, via range sums."""
    d = m.displacement
    if m.annihilation_floor is not None:
        lowest = index + min(0, (steps - 1) * d)
        if lowest < m.annihilation_floor:
            return -math.inf
    if m.scalar == 0:
        return -math.inf
    total = steps * math.log(abs(m.scalar))
    for weights, offset, inverted in m.factors:
        if abs(d) == 1:
            start = index + offset if d == 1 else index + offset - (steps - 1)
            s = weights.log_range_sum(start, steps)
        elif d == 0:
            s = steps * weights.log_at(index + offset)
        else:
            s = math.fsum(weights.log_at(index + offset + t * d) for t in range(steps))
        total += -s if inverted else s
    return total


def apply_power(op: OperatorExpr, vector, steps: int):
    """Apply the ``steps``-th power (negative allowed when invertible).

    Pure shift powers reduce to one weight product per support index, so the
    cost is O(support * steps) in the linear regime and O(support) once the
    generators' closed-form range sums take over.
    """
    if isinstance(op, DirectSumOp):
        if not isinstance(vector, DirectSumVector):
            raise SpaceMismatchError("direct-sum operator needs a direct-sum vector")
        return DirectSumVector(
            apply_power(op.left, vector.left, steps),
            apply_power(op.right, vector.right, steps),
        )
    if not isinstance(vector, SparseVector):
        raise SpaceMismatchError("scalar operator applied to a non-scalar vector")
    if op.space_kind != vector.space_kind:
        raise SpaceMismatchError(
            f"operator on {op.space_kind} space applied to {vector.space_kind} vector"
        )
    if steps == 0:
        return vector
    m = compile_monomial(op)
    if steps < 0:
        m = invert_monomial(m)
        steps = -steps
    entries = []
    for i, c in vector.items():
        coeff = _power_coefficient(m, i, steps)
        if coeff != 0:
            entries.append((i + steps * m.displacement, c * coeff))
    return SparseVector(vector.space_kind, entries)


def shift_power_norm(
    op: OperatorExpr,
    basis_index: int,
    steps: int,
    direction: str = "forward",
    convention: str = "thm12",
) -> float:
    """log of the weight product governing a shift power at one basis vector.

    direction="forward" returns log ||T**n e(m)|| = sum of log w(j) for
    j in [m, m + n).  direction="backward" returns the log of the backward
    product used by the transitivity criteria.  The two published index
    conventions for the backward product disagree when m != 0:

    * "thm12": product of 1 / w(-j) for j in [m + 1, m + n]
    * "thm13": product of 1 / w(-j) for j in [1 - m, n - m], which equals
      log ||T**(-n) e(m)|| exactly.

    Both are exposed; callers choose via ``convention`` (default "thm12").
    """
    if steps < 0:
        raise ValueError("steps must be >= 0; use direction='backward' for inverse products")
    shift = _require_pure_shift(op)
    w = shift.weights
    if direction == "forward":
        return w.log_range_sum(basis_index, steps)
    if direction != "backward":
        raise ValueError(f"unknown direction {direction!r}")
    if shift.space_kind != BILATERAL:
        raise NotInvertibleError("backward products need an invertible (bilateral) shift")
    if convention == "thm12":
        return -w.log_range_sum(-basis_index - steps, steps)
    if convention == "thm13":
        return -w.log_range_sum(basis_index - steps, steps)
    raise ValueError(f"unknown backward index convention {convention!r}")


def _require_pure_shift(op: OperatorExpr) -> WeightedShift:
    if isinstance(op, WeightedShift):
        return op
    raise UnsupportedOperatorError(
        "this operation is defined for pure forward weighted shifts"
    )


# ---------------------------------------------------------------------------
# Invariance, commutation, norm bounds
# ---------------------------------------------------------------------------

def invariance_check(op: OperatorExpr, subspace, steps: int) -> Optional[bool]:
    """Exact decision of whether the ``steps``-th power maps the subspace into itself.

    Coordinate subspaces and shift-monomial operators make this pure index
    arithmetic.  Returns None for expression shapes with no monomial form
    (callers should fall back to ``sampled_invariance_check``).
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if isinstance(op, DirectSumOp) or isinstance(subspace, DirectSumSubspace):
        if not (isinstance(op, DirectSumOp) and isinstance(subspace, DirectSumSubspace)):
            raise SpaceMismatchError("direct-sum operator requires a direct-sum subspace")
        left = invariance_check(op.left, subspace.left, steps)
        right = invariance_check(op.right, subspace.right, steps)
        if left is None or right is None:
            return None
        return left and right
    if op.space_kind != subspace.space_kind:
        raise SpaceMismatchError("operator and subspace live in different spaces")
    try:
        m = compile_monomial(op)
    except UnsupportedOperatorError:
        return None
    if steps == 0 or m.scalar == 0:
        return True
    floor = m.survival_floor_for_power(steps)
    return subspace.invariant_under_shift(steps * m.displacement, survival_floor=floor)


def sampled_invariance_check(
    op: OperatorExpr, subspace, steps: int, window: int = 16
) -> bool:
    """Evidence-level invariance check on basis vectors within a window."""
    for i in _basis_window(op.space_kind, window):
        if subspace.contains_index(i):
            image = apply_power(op, SparseVector.basis(op.space_kind, i), steps)
            if not subspace.contains(image):
                return False
    return True


def _basis_window(space_kind: str, window: int) -> range:
    if space_kind == UNILATERAL:
        return range(0, window + 1)
    return range(-window, window + 1)


@dataclass(frozen=True)
class CommuteResult:
    commute: bool
    max_residual: float
    window: int
    tol: float


def commute_check(a: OperatorExpr, b: OperatorExpr, window: int = 12, tol: float = 1e-9) -> CommuteResult:
    """Max norm of (ab - ba) e over basis vectors with index in the window."""
    pair = isinstance(a, DirectSumOp)
    if pair != isinstance(b, DirectSumOp):
        raise SpaceMismatchError("cannot compare a direct sum with a scalar operator")
    worst = 0.0
    for probe in _commute_probes(a, window):
        ab = apply(a, apply(b, probe))
        ba = apply(b, apply(a, probe))
        worst = max(worst, (ab - ba).norm())
    return CommuteResult(worst <= tol, worst, window, tol)


def _commute_probes(op: OperatorExpr, window: int):
    if isinstance(op, DirectSumOp):
        lz = SparseVector.zero(op.left.space_kind)
        rz = SparseVector.zero(op.right.space_kind)
        for i in _basis_window(op.left.space_kind, window):
            yield DirectSumVector(SparseVector.basis(op.left.space_kind, i), rz)
        for i in _basis_window(op.right.space_kind, window):
            yield DirectSumVector(lz, SparseVector.basis(op.right.space_kind, i))
    else:
        for i in _basis_window(op.space_kind, window):
            yield SparseVector.basis(op.space_kind, i)


def operator_norm_bound(op: OperatorExpr) -> float:
    """Upper bound on the operator norm from weight suprema."""
    if isinstance(op, DirectSumOp):
        return max(operator_norm_bound(op.left), operator_norm_bound(op.right))
    m = compile_monomial(op)
    bound = abs(m.scalar)
    for weights, _, inverted in m.factors:
        bound *= (1.0 / weights.inf()) if inverted else weights.sup()
    return bound
