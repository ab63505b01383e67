"""Orbit traces, density reports, witnesses, and return sets.

Orbits of shift monomials are computed without materializing the iterates:
each entry of the start vector follows a straight index path, so its
coefficient magnitudes are a cumulative sum of per-step log factors.  Norm
and distance-to-subspace traces come out of that array in one vectorized
pass, which keeps million-step orbits cheap.  Full vectors are retained
only at geometrically spaced checkpoints.

All magnitudes are tracked in log scale; -inf marks an exact zero (an
annihilated orbit or a vector already inside the subspace).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .operators import (
    DirectSumOp,
    NotInvertibleError,
    OperatorExpr,
    PowerOp,
    ScaledOp,
    ShiftMonomial,
    UnsupportedOperatorError,
    WeightedShift,
    apply,
    apply_power,
    commute_check,
    compile_monomial,
    invariance_check,
    is_invertible,
    operator_norm_bound,
)
from .spaces import (
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
    SpaceMismatchError,
)
from .weights import ConstantWeights

RETENTION_RATIO = 1.2
_OVERFLOW_LOG = 700.0  # exp() overflows past this; retention skips such steps


def retention_steps(length: int, ratio: float = RETENTION_RATIO) -> list[int]:
    """0, the geometric ladder ceil(ratio**j), and the final step."""
    if length < 0:
        raise ValueError("length must be >= 0")
    steps = {0, length}
    value = 1.0
    while value < length:
        steps.add(math.ceil(value))
        value *= ratio
    return sorted(steps)


# ---------------------------------------------------------------------------
# Orbit traces
# ---------------------------------------------------------------------------

@dataclass
class OrbitTrace:
    """Norm/distance traces of n -> T**n x for n = 0..length."""

    op: OperatorExpr
    start: SparseVector
    length: int
    log_norms: np.ndarray
    log_dists: Optional[np.ndarray]
    retained: dict[int, SparseVector] = field(default_factory=dict)
    subspace: Optional[CoordinateSubspace] = None
    death_step: Optional[int] = None

    def norm_at(self, step: int) -> float:
        return float(math.exp(self.log_norms[step])) if self.log_norms[step] > -math.inf else 0.0

    def dist_at(self, step: int) -> float:
        if self.log_dists is None:
            raise ValueError("orbit was computed without a subspace")
        value = self.log_dists[step]
        return float(math.exp(value)) if value > -math.inf else 0.0

    def vector_at(self, step: int) -> SparseVector:
        if not 0 <= step <= self.length:
            raise ValueError(f"step {step} outside 0..{self.length}")
        if step in self.retained:
            return self.retained[step]
        return apply_power(self.op, self.start, step)


@dataclass
class DirectSumOrbitTrace:
    left: OrbitTrace
    right: OrbitTrace
    length: int
    log_norms: np.ndarray
    log_dists: Optional[np.ndarray]

    def norm_at(self, step: int) -> float:
        return float(math.exp(self.log_norms[step])) if self.log_norms[step] > -math.inf else 0.0

    def dist_at(self, step: int) -> float:
        if self.log_dists is None:
            raise ValueError("orbit was computed without a subspace")
        value = self.log_dists[step]
        return float(math.exp(value)) if value > -math.inf else 0.0

    def vector_at(self, step: int) -> DirectSumVector:
        return DirectSumVector(self.left.vector_at(step), self.right.vector_at(step))


def _entry_log_magnitudes(
    monomial: ShiftMonomial, start: SparseVector, length: int
) -> tuple[np.ndarray, np.ndarray]:
    """Index paths (E, length+1) and cumulative log magnitudes (E, length+1)."""
    entries = start.items()
    count = len(entries)
    idx0 = np.array([i for i, _ in entries], dtype=np.int64).reshape(count, 1)
    paths = idx0 + monomial.displacement * np.arange(length + 1, dtype=np.int64)
    if length == 0:
        factors = np.zeros((count, 0))
    else:
        before = paths[:, :-1]
        scalar_mag = abs(monomial.scalar)
        base = math.log(scalar_mag) if scalar_mag > 0.0 else -math.inf
        factors = np.full(before.shape, base)
        for weights, offset, inverted in monomial.factors:
            logs = weights.log_values(before + offset)
            factors += -logs if inverted else logs
        if monomial.annihilation_floor is not None:
            factors[before < monomial.annihilation_floor] = -math.inf
    start_logs = np.array(
        [math.log(abs(c)) for _, c in entries], dtype=np.float64
    ).reshape(count, 1)
    log_mags = start_logs + np.concatenate(
        [np.zeros((count, 1)), np.cumsum(factors, axis=1)], axis=1
    )
    return paths, log_mags


def compute_orbit(
    op: OperatorExpr,
    start: Union[SparseVector, DirectSumVector],
    length: int,
    subspace=None,
    retain: bool = True,
) -> Union[OrbitTrace, DirectSumOrbitTrace]:
    """Trace the orbit of ``start`` under ``op`` for ``length`` steps."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if isinstance(op, DirectSumOp):
        if not isinstance(start, DirectSumVector):
            raise SpaceMismatchError("direct-sum operator needs a direct-sum start vector")
        if subspace is not None and not isinstance(subspace, DirectSumSubspace):
            raise SpaceMismatchError("direct-sum orbit needs a direct-sum subspace")
        left = compute_orbit(
            op.left, start.left, length, None if subspace is None else subspace.left, retain
        )
        right = compute_orbit(
            op.right, start.right, length, None if subspace is None else subspace.right, retain
        )
        log_norms = np.logaddexp(2.0 * left.log_norms, 2.0 * right.log_norms) / 2.0
        log_dists = None
        if subspace is not None:
            log_dists = np.logaddexp(2.0 * left.log_dists, 2.0 * right.log_dists) / 2.0
        return DirectSumOrbitTrace(left, right, length, log_norms, log_dists)

    if isinstance(start, DirectSumVector):
        raise SpaceMismatchError("scalar operator cannot act on a direct-sum vector")
    if start.space_kind != op.space_kind:
        raise SpaceMismatchError("start vector and operator live on different spaces")
    if subspace is not None and subspace.space_kind != op.space_kind:
        raise SpaceMismatchError("subspace and operator live on different spaces")
    monomial = compile_monomial(op)

    if not start.items():
        flat = np.full(length + 1, -math.inf)
        log_dists = np.full(length + 1, -math.inf) if subspace is not None else None
        retained = {0: start, length: start} if retain else {}
        return OrbitTrace(op, start, length, flat, log_dists, retained, subspace, 0)

    paths, log_mags = _entry_log_magnitudes(monomial, start, length)
    if log_mags.shape[0] == 1:
        log_norms = log_mags[0].copy()
    else:
        log_norms = np.logaddexp.reduce(2.0 * log_mags, axis=0) / 2.0

    log_dists = None
    if subspace is not None:
        inside = subspace.contains_index_array(paths)
        outside_mags = np.where(inside, -math.inf, 2.0 * log_mags)
        log_dists = np.logaddexp.reduce(outside_mags, axis=0) / 2.0
        if log_dists.ndim == 0:
            log_dists = log_dists.reshape(1)

    death_step: Optional[int] = None
    dead = np.isneginf(log_norms)
    if dead.any():
        death_step = int(np.argmax(dead))

    retained: dict[int, SparseVector] = {}
    if retain:
        for step in retention_steps(length):
            if log_norms[step] <= _OVERFLOW_LOG:
                retained[step] = apply_power(op, start, step)
    return OrbitTrace(op, start, length, log_norms, log_dists, retained, subspace, death_step)


def project_orbit(trace: DirectSumOrbitTrace, side: str) -> OrbitTrace:
    """Component trace of a direct-sum orbit ("left" or "right")."""
    if side == "left":
        return trace.left
    if side == "right":
        return trace.right
    raise ValueError("side must be 'left' or 'right'")


# ---------------------------------------------------------------------------
# Density of an orbit against a family of targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityRow:
    target_index: int
    target_norm: float
    best_step: int
    best_distance: float
    hit: bool


@dataclass
class DensityReport:
    length: int
    tolerance: float
    rows: tuple[DensityRow, ...]
    coverage: float

    def describe(self) -> dict:
        return {
            "length": self.length,
            "tolerance": self.tolerance,
            "coverage": self.coverage,
            "targets": len(self.rows),
            "hits": sum(1 for r in self.rows if r.hit),
        }


class OrbitGeometry:
    """Shared arrays for distance-to-target traces of one orbit."""

    def __init__(self, op: OperatorExpr, start: SparseVector, length: int):
        self.start = start
        self.length = length
        self.monomial = compile_monomial(op)
        trace = compute_orbit(op, start, length, retain=False)
        with np.errstate(over="ignore"):
            self.norm_sq = np.exp(2.0 * trace.log_norms)
        self.entries = start.items()
        if self.entries:
            _, self.log_mags = _entry_log_magnitudes(self.monomial, start, length)
        else:
            self.log_mags = None
        self.steps = np.arange(length + 1)

    def distance_sq_to(self, target: SparseVector) -> np.ndarray:
        """dist(T**n x, t)**2 for n = 0..length.

        Expands ||T**n x||**2 + ||t||**2 - 2 Re <T**n x, t>; the inner
        product is nonzero only where an entry path crosses the support of
        t, so each target costs O(entries * support) corrections on top of
        the norm trace.
        """
        if target.space_kind != self.start.space_kind:
            raise SpaceMismatchError("target lives on a different space")
        dist_sq = self.norm_sq + target.norm_sq()
        for e_pos, (i0, coeff) in enumerate(self.entries):
            unit = coeff / abs(coeff)
            for j, t_coeff in target.items():
                if self.monomial.displacement == 0:
                    if i0 != j:
                        continue
                    overlap = self.steps
                else:
                    delta = j - i0
                    n, rem = divmod(delta, self.monomial.displacement)
                    if rem != 0 or not 0 <= n <= self.length:
                        continue
                    overlap = np.array([n])
                with np.errstate(over="ignore"):
                    mags = np.exp(self.log_mags[e_pos, overlap])
                orbit_coeff = unit * (self.monomial.phase ** overlap) * mags
                dist_sq[overlap] -= 2.0 * (orbit_coeff * np.conj(t_coeff)).real
        return np.where(np.isnan(dist_sq), math.inf, np.maximum(dist_sq, 0.0))


def distance_trace_to_target(
    op: OperatorExpr, start: SparseVector, length: int, target: SparseVector
) -> np.ndarray:
    """||T**n x - t|| for n = 0..length, vectorized over the whole orbit."""
    return np.sqrt(OrbitGeometry(op, start, length).distance_sq_to(target))


def density_report(
    op: OperatorExpr,
    start: SparseVector,
    length: int,
    targets: Sequence[SparseVector],
    tolerance: float,
) -> DensityReport:
    """Closest approach of the orbit to each target vector."""
    if not (tolerance > 0.0):
        raise ValueError("tolerance must be positive")
    geometry = OrbitGeometry(op, start, length)
    rows = []
    for t_pos, target in enumerate(targets):
        dist_sq = geometry.distance_sq_to(target)
        best = int(np.argmin(dist_sq))
        best_distance = float(math.sqrt(dist_sq[best]))
        rows.append(
            DensityRow(
                target_index=t_pos,
                target_norm=target.norm(),
                best_step=best,
                best_distance=best_distance,
                hit=best_distance <= tolerance,
            )
        )
    coverage = (sum(1 for r in rows if r.hit) / len(rows)) if rows else 0.0
    return DensityReport(length, tolerance, tuple(rows), coverage)


# ---------------------------------------------------------------------------
# Transitivity witnesses and return sets
# ---------------------------------------------------------------------------

def _right_inverse(op: OperatorExpr) -> OperatorExpr:
    """An operator R with op . R = identity (exact on every basis vector)."""
    if is_invertible(op):
        return PowerOp(op, -1)
    monomial = compile_monomial(op)
    if monomial.factors == () and monomial.displacement < 0 and monomial.scalar != 0:
        # backward-shift style: shift up |d| and undo the scalar
        upward = PowerOp(
            WeightedShift(ConstantWeights(1.0), op.space_kind), -monomial.displacement
        )
        return ScaledOp(1.0 / monomial.scalar, upward)
    raise NotInvertibleError("no usable inverse or right inverse for this operator")


@dataclass
class TransitivityWitness:
    step: int
    z: Union[SparseVector, DirectSumVector]
    err_near: float
    err_far: float
    invariant_ok: Optional[bool]
    z_in_subspace: bool


def transitivity_witness(
    op: OperatorExpr,
    subspace,
    u,
    v,
    step: int,
) -> TransitivityWitness:
    """A candidate z near u with T**step z near v, built from a right inverse.

    Residuals are measured, not assumed: err_near = ||z - u|| and
    err_far = ||T**step z - v||.
    """
    if step < 1:
        raise ValueError("step must be >= 1")
    if not subspace.contains(u) or not subspace.contains(v):
        raise ValueError("both endpoint vectors must lie in the subspace")
    if isinstance(op, DirectSumOp):
        left = transitivity_witness(op.left, subspace.left, u.left, v.left, step)
        right = transitivity_witness(op.right, subspace.right, u.right, v.right, step)
        z = DirectSumVector(left.z, right.z)
        err_near = math.hypot(left.err_near, right.err_near)
        err_far = math.hypot(left.err_far, right.err_far)
        inv = invariance_check(op, subspace, step)
        return TransitivityWitness(
            step, z, err_near, err_far, inv, left.z_in_subspace and right.z_in_subspace
        )
    correction = apply_power(_right_inverse(op), v, step)
    z = u + correction
    err_near = correction.norm()
    err_far = (apply_power(op, z, step) - v).norm()
    return TransitivityWitness(
        step,
        z,
        err_near,
        err_far,
        invariance_check(op, subspace, step),
        subspace.contains(z),
    )


@dataclass
class ReturnSetReport:
    horizon: int
    near_radius: float
    far_radius: float
    members: tuple[int, ...]
    classification: str
    cofinite_from: Optional[int] = None

    def describe(self) -> dict:
        return {
            "horizon": self.horizon,
            "near_radius": self.near_radius,
            "far_radius": self.far_radius,
            "member_count": len(self.members),
            "classification": self.classification,
            "cofinite_from": self.cofinite_from,
        }


def classify_return_steps(
    members: Sequence[int],
    horizon: int,
    min_tail: int = 10,
    infinite_fraction: float = 0.1,
) -> tuple[str, Optional[int]]:
    """empty / cofinite-beyond / infinite-to-horizon / finite, by census.

    cofinite-beyond requires an unbroken run of members ending at the
    horizon, at least ``min_tail`` long; infinite-to-horizon requires at
    least ``infinite_fraction`` of all steps to be members.
    """
    if not members:
        return "empty", None
    ordered = sorted(members)
    if ordered[-1] == horizon:
        start = horizon
        position = len(ordered) - 1
        while position > 0 and ordered[position - 1] == start - 1:
            position -= 1
            start -= 1
        if horizon - start + 1 >= min_tail:
            return "cofinite-beyond", start
    if len(ordered) >= horizon * infinite_fraction:
        return "infinite-to-horizon", None
    return "finite", None


def return_set(
    op: OperatorExpr,
    subspace,
    u,
    v,
    near_radius: float,
    far_radius: float,
    horizon: int,
    min_tail: int = 10,
    infinite_fraction: float = 0.1,
) -> ReturnSetReport:
    """Steps n <= horizon admitting a witness z in the subspace with
    ||z - u|| < near_radius and ||T**n z - v|| < far_radius.

    The witness is z = u + R**n v for a right inverse R, so the two error
    terms are ||R**n v|| and ||T**n u||; membership additionally demands
    that the subspace is invariant under T**n and that z stays inside it.
    For direct sums every condition is applied componentwise (product
    balls), which makes the pair return set exactly the intersection of the
    component return sets.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if isinstance(op, DirectSumOp):
        left = return_set(
            op.left, subspace.left, u.left, v.left, near_radius, far_radius, horizon,
            min_tail, infinite_fraction,
        )
        right = return_set(
            op.right, subspace.right, u.right, v.right, near_radius, far_radius, horizon,
            min_tail, infinite_fraction,
        )
        members = tuple(sorted(set(left.members) & set(right.members)))
        classification, start = classify_return_steps(
            members, horizon, min_tail, infinite_fraction
        )
        return ReturnSetReport(
            horizon, near_radius, far_radius, members, classification, start
        )
    if not subspace.contains(u) or not subspace.contains(v):
        raise ValueError("both endpoint vectors must lie in the subspace")
    forward = compute_orbit(op, u, horizon, retain=False)
    inverse = compute_orbit(_right_inverse(op), v, horizon, subspace, retain=False)
    log_near = math.log(near_radius)
    log_far = math.log(far_radius)
    members = []
    for n in range(1, horizon + 1):
        if inverse.log_norms[n] >= log_near or forward.log_norms[n] >= log_far:
            continue
        if not np.isneginf(inverse.log_dists[n]):
            continue
        if not invariance_check(op, subspace, n):
            continue
        members.append(n)
    classification, start = classify_return_steps(members, horizon, min_tail, infinite_fraction)
    return ReturnSetReport(
        horizon, near_radius, far_radius, tuple(members), classification, start
    )


# ---------------------------------------------------------------------------
# Transport along a commuting operator
# ---------------------------------------------------------------------------

@dataclass
class CommutantTransportReport:
    commute_residual: float
    image_subspace: CoordinateSubspace
    base_trace: OrbitTrace
    mapped_trace: OrbitTrace
    transport_residual: float
    norm_bound: float
    law_ok: bool

    def describe(self) -> dict:
        return {
            "commute_residual": self.commute_residual,
            "image_subspace": self.image_subspace.describe(),
            "transport_residual": self.transport_residual,
            "norm_bound": self.norm_bound,
            "law_ok": self.law_ok,
        }


def map_orbit_by_commutant(
    op: OperatorExpr,
    other: OperatorExpr,
    start: SparseVector,
    length: int,
    subspace: CoordinateSubspace,
    rel_slack: float = 1e-9,
) -> CommutantTransportReport:
    """Push an orbit through a commuting operator and audit the transport law.

    If S commutes with T then S maps the orbit of x onto the orbit of Sx,
    and distances to the image subspace are controlled by the norm bound:
    dist(T**n Sx, S M) <= ||S|| dist(T**n x, M).
    """
    check = commute_check(op, other)
    if not check.commute:
        raise UnsupportedOperatorError(
            f"operators do not commute (residual {check.max_residual})"
        )
    other_monomial = compile_monomial(other)
    image = subspace.shifted(other_monomial.displacement)
    base = compute_orbit(op, start, length, subspace)
    mapped_start = apply(other, start)
    mapped = compute_orbit(op, mapped_start, length, image)

    bound = operator_norm_bound(other)
    audit_steps = [n for n in retention_steps(length) if n <= 4096]
    residual = 0.0
    for n in audit_steps:
        via_orbit = apply_power(op, mapped_start, n)
        via_map = apply(other, apply_power(op, start, n))
        residual = max(residual, (via_orbit - via_map).norm())
    law_ok = True
    for n in range(length + 1):
        lhs = mapped.log_dists[n]
        if np.isneginf(lhs):
            continue
        rhs = base.log_dists[n] + math.log(bound) if bound > 0 else -math.inf
        if lhs > rhs + math.log1p(rel_slack):
            law_ok = False
            break
    return CommutantTransportReport(
        commute_residual=check.max_residual,
        image_subspace=image,
        base_trace=base,
        mapped_trace=mapped,
        transport_residual=residual,
        norm_bound=bound,
        law_ok=law_ok,
    )
