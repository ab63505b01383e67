"""Sparse vectors and coordinate subspaces of one- and two-sided sequence spaces.

Vectors are finitely supported elements of l2 over the integers (bilateral)
or the nonnegative integers (unilateral), stored as index -> coefficient
maps with exact zeros pruned.  Subspaces are closed spans of basis vectors
selected by a decidable index set, so membership, distance, and shift
invariance are all computable exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

BILATERAL = "bilateral"
UNILATERAL = "unilateral"
_SPACE_KINDS = (BILATERAL, UNILATERAL)


class SpaceMismatchError(ValueError):
    """Raised when vectors or subspaces from different spaces are combined."""


class EmptySubspaceError(ValueError):
    """Raised when an operation needs at least one basis index in a subspace."""


def check_space_kind(space_kind: str) -> str:
    if space_kind not in _SPACE_KINDS:
        raise ValueError(f"unknown space kind {space_kind!r}; expected one of {_SPACE_KINDS}")
    return space_kind


def valid_index(space_kind: str, index: int) -> bool:
    return space_kind == BILATERAL or index >= 0


def canonical_index_order(space_kind: str) -> Iterator[int]:
    """Yield basis indices in the conventional order.

    Unilateral: 0, 1, 2, ...  Bilateral: 0, 1, -1, 2, -2, ... (ascending
    absolute value, nonnegative first).  Every enumeration in this package
    that says "first indices" refers to this order.
    """
    check_space_kind(space_kind)
    if space_kind == UNILATERAL:
        return itertools.count(0)

    def _bilateral() -> Iterator[int]:
        yield 0
        for i in itertools.count(1):
            yield i
            yield -i

    return _bilateral()


class SparseVector:
    """Immutable finitely supported vector with complex coefficients.

    Exact zeros are never stored, so ``support`` always reflects the true
    support and two vectors are equal iff their entry maps are equal.
    """

    __slots__ = ("space_kind", "_entries")

    def __init__(
        self,
        space_kind: str,
        entries: Union[Mapping[int, complex], Iterable[tuple[int, complex]]] = (),
    ) -> None:
        check_space_kind(space_kind)
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[int, complex] = {}
        for index, coeff in items:
            if not isinstance(index, int):
                raise TypeError(f"basis index must be int, got {index!r}")
            if not valid_index(space_kind, index):
                raise ValueError(f"negative index {index} not allowed in a unilateral space")
            value = complex(coeff)
            if value != 0:
                data[index] = data.get(index, 0j) + value
                if data[index] == 0:
                    del data[index]
        object.__setattr__(self, "space_kind", space_kind)
        object.__setattr__(self, "_entries", data)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("SparseVector is immutable")

    @classmethod
    def zero(cls, space_kind: str) -> "SparseVector":
        return cls(space_kind)

    @classmethod
    def basis(cls, space_kind: str, index: int, coeff: complex = 1.0) -> "SparseVector":
        return cls(space_kind, [(index, coeff)])

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._entries))

    def items(self) -> list[tuple[int, complex]]:
        """Entries sorted by index; the only iteration order used anywhere."""
        return sorted(self._entries.items())

    def coefficient(self, index: int) -> complex:
        return self._entries.get(index, 0j)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def norm_sq(self) -> float:
        return math.fsum(abs(c) ** 2 for c in self._entries.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def restricted(self, keep) -> "SparseVector":
        """Vector with only the entries whose index satisfies ``keep``."""
        return SparseVector(self.space_kind, [(i, c) for i, c in self._entries.items() if keep(i)])

    def _check_same_space(self, other: "SparseVector") -> None:
        if self.space_kind != other.space_kind:
            raise SpaceMismatchError(
                f"cannot combine {self.space_kind} and {other.space_kind} vectors"
            )

    def __add__(self, other: "SparseVector") -> "SparseVector":
        self._check_same_space(other)
        merged = dict(self._entries)
        for i, c in other._entries.items():
            merged[i] = merged.get(i, 0j) + c
        return SparseVector(self.space_kind, merged)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-1.0) * other

    def __neg__(self) -> "SparseVector":
        return (-1.0) * self

    def __rmul__(self, scalar: complex) -> "SparseVector":
        return SparseVector(self.space_kind, [(i, scalar * c) for i, c in self._entries.items()])

    def __mul__(self, scalar: complex) -> "SparseVector":
        return self.__rmul__(scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.space_kind == other.space_kind and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.space_kind, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {c}" for i, c in self.items())
        return f"SparseVector({self.space_kind}, {{{body}}})"


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueClasses:
    """Indices congruent to one of ``residues`` modulo ``modulus``."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "residues", frozenset(r % self.modulus for r in self.residues))

    @classmethod
    def full(cls, modulus: int = 1) -> "ResidueClasses":
        return cls(modulus, frozenset(range(modulus)))

    def contains(self, index: int) -> bool:
        return index % self.modulus in self.residues

    def shifted(self, offset: int) -> "ResidueClasses":
        return ResidueClasses(self.modulus, frozenset((r + offset) % self.modulus for r in self.residues))

    def is_empty(self, space_kind: str) -> bool:
        return not self.residues

    def is_full(self, space_kind: str) -> bool:
        return len(self.residues) == self.modulus

    def invariant_under_shift(self, offset: int, space_kind: str, survival_floor: Optional[int]) -> bool:
        # Arbitrarily large indices realize every residue, so an annihilation
        # floor never weakens the condition.
        if not self.residues:
            return True
        return all((r + offset) % self.modulus in self.residues for r in self.residues)

    def describe(self) -> dict:
        return {
            "kind": "residues",
            "modulus": self.modulus,
            "residues": sorted(self.residues),
        }


@dataclass(frozen=True)
class HalfLine:
    """Indices greater than or equal to ``start``."""

    start: int

    def contains(self, index: int) -> bool:
        return index >= self.start

    def shifted(self, offset: int) -> "HalfLine":
        return HalfLine(self.start + offset)

    def _effective_start(self, space_kind: str) -> int:
        return max(self.start, 0) if space_kind == UNILATERAL else self.start

    def is_empty(self, space_kind: str) -> bool:
        return False

    def is_full(self, space_kind: str) -> bool:
        return space_kind == UNILATERAL and self.start <= 0

    def invariant_under_shift(self, offset: int, space_kind: str, survival_floor: Optional[int]) -> bool:
        if offset >= 0:
            return True
        low = self._effective_start(space_kind)
        if survival_floor is not None:
            low = max(low, survival_floor)
        return low + offset >= self._effective_start(space_kind)

    def describe(self) -> dict:
        return {"kind": "half_line", "start": self.start}


@dataclass(frozen=True)
class BelowLine:
    """Indices strictly below ``cutoff`` (arises as a half-line complement)."""

    cutoff: int

    def contains(self, index: int) -> bool:
        return index < self.cutoff

    def shifted(self, offset: int) -> "BelowLine":
        return BelowLine(self.cutoff + offset)

    def is_empty(self, space_kind: str) -> bool:
        return space_kind == UNILATERAL and self.cutoff <= 0

    def is_full(self, space_kind: str) -> bool:
        return False

    def invariant_under_shift(self, offset: int, space_kind: str, survival_floor: Optional[int]) -> bool:
        if self.is_empty(space_kind):
            return True
        if offset <= 0:
            return True
        if space_kind == UNILATERAL and survival_floor is not None:
            # Only indices at or above the floor survive the operator at all.
            return all(
                i + offset < self.cutoff
                for i in range(max(0, survival_floor), self.cutoff)
            )
        return False

    def describe(self) -> dict:
        return {"kind": "below_line", "cutoff": self.cutoff}


@dataclass(frozen=True)
class ExplicitIndices:
    """A finite, explicitly listed index set."""

    indices: frozenset[int]

    def contains(self, index: int) -> bool:
        return index in self.indices

    def shifted(self, offset: int) -> "ExplicitIndices":
        return ExplicitIndices(frozenset(i + offset for i in self.indices))

    def _valid(self, space_kind: str) -> frozenset[int]:
        if space_kind == UNILATERAL:
            return frozenset(i for i in self.indices if i >= 0)
        return self.indices

    def is_empty(self, space_kind: str) -> bool:
        return not self._valid(space_kind)

    def is_full(self, space_kind: str) -> bool:
        return False

    def invariant_under_shift(self, offset: int, space_kind: str, survival_floor: Optional[int]) -> bool:
        for i in self._valid(space_kind):
            if survival_floor is not None and i < survival_floor:
                continue  # annihilated, lands on the zero vector
            if i + offset not in self.indices:
                return False
            if not valid_index(space_kind, i + offset):
                return False
        return True

    def describe(self) -> dict:
        return {"kind": "explicit", "indices": sorted(self.indices)}


@dataclass(frozen=True)
class CofiniteIndices:
    """All valid indices except a finite excluded set."""

    excluded: frozenset[int]

    def contains(self, index: int) -> bool:
        return index not in self.excluded

    def shifted(self, offset: int) -> "CofiniteIndices":
        return CofiniteIndices(frozenset(i + offset for i in self.excluded))

    def _valid_excluded(self, space_kind: str) -> frozenset[int]:
        if space_kind == UNILATERAL:
            return frozenset(i for i in self.excluded if i >= 0)
        return self.excluded

    def is_empty(self, space_kind: str) -> bool:
        return False

    def is_full(self, space_kind: str) -> bool:
        return not self._valid_excluded(space_kind)

    def invariant_under_shift(self, offset: int, space_kind: str, survival_floor: Optional[int]) -> bool:
        # Members are everything outside ``excluded``; the image misses the
        # set iff every excluded index has an excluded (or invalid, or
        # annihilated) preimage.
        for e in self.excluded:
            pre = e - offset
            if not valid_index(space_kind, pre):
                continue
            if survival_floor is not None and pre < survival_floor:
                continue
            if pre not in self.excluded:
                return False
        return True

    def describe(self) -> dict:
        return {"kind": "cofinite", "excluded": sorted(self.excluded)}


IndexSet = Union[ResidueClasses, HalfLine, BelowLine, ExplicitIndices, CofiniteIndices]


# ---------------------------------------------------------------------------
# Coordinate subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateSubspace:
    """Closed span of the basis vectors whose index lies in ``index_set``."""

    space_kind: str
    index_set: IndexSet

    def __post_init__(self) -> None:
        check_space_kind(self.space_kind)

    # -- constructors ------------------------------------------------------
    @classmethod
    def residues(cls, space_kind: str, modulus: int, residues="full") -> "CoordinateSubspace":
        if residues == "full":
            return cls(space_kind, ResidueClasses.full(modulus))
        return cls(space_kind, ResidueClasses(modulus, frozenset(residues)))

    @classmethod
    def half_line(cls, space_kind: str, start: int) -> "CoordinateSubspace":
        return cls(space_kind, HalfLine(start))

    @classmethod
    def explicit(cls, space_kind: str, indices: Iterable[int]) -> "CoordinateSubspace":
        return cls(space_kind, ExplicitIndices(frozenset(indices)))

    @classmethod
    def full(cls, space_kind: str) -> "CoordinateSubspace":
        return cls.residues(space_kind, 1)

    # -- membership --------------------------------------------------------
    def contains_index(self, index: int) -> bool:
        return valid_index(self.space_kind, index) and self.index_set.contains(index)

    def contains_index_array(self, indices: np.ndarray) -> np.ndarray:
        """Vectorized membership for an integer index array."""
        idx = np.asarray(indices)
        s = self.index_set
        if isinstance(s, ResidueClasses):
            member = np.isin(idx % s.modulus, np.array(sorted(s.residues), dtype=idx.dtype))
        elif isinstance(s, HalfLine):
            member = idx >= s.start
        elif isinstance(s, BelowLine):
            member = idx < s.cutoff
        elif isinstance(s, ExplicitIndices):
            member = np.isin(idx, np.array(sorted(s.indices), dtype=idx.dtype))
        else:
            member = ~np.isin(idx, np.array(sorted(s.excluded), dtype=idx.dtype))
        if self.space_kind == UNILATERAL:
            member = member & (idx >= 0)
        return member

    def contains(self, vector: "SparseVector") -> bool:
        if vector.space_kind != self.space_kind:
            raise SpaceMismatchError(
                f"vector lives in a {vector.space_kind} space, subspace in {self.space_kind}"
            )
        return all(self.contains_index(i) for i, _ in vector.items())

    # -- structure ---------------------------------------------------------
    def is_zero_subspace(self) -> bool:
        return self.index_set.is_empty(self.space_kind)

    def is_whole_space(self) -> bool:
        return self.index_set.is_full(self.space_kind)

    @property
    def is_nontrivial(self) -> bool:
        """True when the subspace is neither the zero subspace nor everything."""
        return not self.is_zero_subspace() and not self.is_whole_space()

    def first_indices(self, count: int) -> list[int]:
        """First ``count`` member indices in canonical order (fewer if finite)."""
        if count < 0:
            raise ValueError("count must be >= 0")
        if self.is_zero_subspace():
            return []
        found: list[int] = []
        limit = None
        if isinstance(self.index_set, ExplicitIndices):
            valid = [i for i in self.index_set.indices if valid_index(self.space_kind, i)]
            limit = max(abs(i) for i in valid)
        if isinstance(self.index_set, BelowLine) and self.space_kind == UNILATERAL:
            limit = self.index_set.cutoff
        for i in canonical_index_order(self.space_kind):
            if limit is not None and abs(i) > limit:
                break
            if self.contains_index(i):
                found.append(i)
                if len(found) == count:
                    break
        return found

    def complement(self) -> "CoordinateSubspace":
        """The coordinate subspace spanned by all the other basis vectors."""
        s = self.index_set
        if isinstance(s, ResidueClasses):
            other = frozenset(range(s.modulus)) - s.residues
            return CoordinateSubspace(self.space_kind, ResidueClasses(s.modulus, other))
        if isinstance(s, HalfLine):
            if self.space_kind == UNILATERAL:
                return CoordinateSubspace.explicit(self.space_kind, range(0, max(s.start, 0)))
            return CoordinateSubspace(self.space_kind, BelowLine(s.start))
        if isinstance(s, BelowLine):
            return CoordinateSubspace(self.space_kind, HalfLine(s.cutoff))
        if isinstance(s, ExplicitIndices):
            return CoordinateSubspace(self.space_kind, CofiniteIndices(s.indices))
        return CoordinateSubspace(self.space_kind, ExplicitIndices(s.excluded))

    def shifted(self, offset: int) -> "CoordinateSubspace":
        """Image of the subspace under the index translation ``i -> i + offset``.

        For unilateral spaces indices that fall below zero simply disappear
        from the image; membership tests account for validity.
        """
        return CoordinateSubspace(self.space_kind, self.index_set.shifted(offset))

    def invariant_under_shift(self, offset: int, survival_floor: Optional[int] = None) -> bool:
        """Exact decision of ``translate(S, offset) within S``.

        ``survival_floor`` marks the smallest index an annihilating operator
        keeps alive; smaller member indices map to zero, which every subspace
        contains.
        """
        return self.index_set.invariant_under_shift(offset, self.space_kind, survival_floor)

    def describe(self) -> dict:
        d = self.index_set.describe()
        d["space"] = self.space_kind
        return d


# ---------------------------------------------------------------------------
# Direct sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectSumVector:
    """Element (left, right) of a two-component direct sum."""

    left: SparseVector
    right: SparseVector

    def norm_sq(self) -> float:
        return self.left.norm_sq() + self.right.norm_sq()

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    @property
    def is_zero(self) -> bool:
        return self.left.is_zero and self.right.is_zero

    def __add__(self, other: "DirectSumVector") -> "DirectSumVector":
        return DirectSumVector(self.left + other.left, self.right + other.right)

    def __sub__(self, other: "DirectSumVector") -> "DirectSumVector":
        return DirectSumVector(self.left - other.left, self.right - other.right)

    def __rmul__(self, scalar: complex) -> "DirectSumVector":
        return DirectSumVector(scalar * self.left, scalar * self.right)

    def __mul__(self, scalar: complex) -> "DirectSumVector":
        return self.__rmul__(scalar)


@dataclass(frozen=True)
class DirectSumSubspace:
    """Pairs (x, y) with x in ``left`` and y in ``right``."""

    left: CoordinateSubspace
    right: CoordinateSubspace

    def contains(self, vector: DirectSumVector) -> bool:
        return self.left.contains(vector.left) and self.right.contains(vector.right)

    @property
    def is_nontrivial(self) -> bool:
        whole = self.left.is_whole_space() and self.right.is_whole_space()
        zero = self.left.is_zero_subspace() and self.right.is_zero_subspace()
        return not whole and not zero

    def describe(self) -> dict:
        return {"kind": "direct_sum", "left": self.left.describe(), "right": self.right.describe()}


Vector = Union[SparseVector, DirectSumVector]
Subspace = Union[CoordinateSubspace, DirectSumSubspace]


def direct_sum_norm(vector: DirectSumVector) -> float:
    """Norm of a pair; the square is the sum of the component squares."""
    return vector.norm()


def vector_norm(vector: Vector) -> float:
    return vector.norm()


def distance_to_subspace(vector: Vector, subspace: Subspace) -> float:
    """Distance from ``vector`` to a coordinate subspace.

    The orthogonal projection onto a coordinate subspace just truncates
    coefficients, so the distance is the norm of the part supported outside.
    """
    if isinstance(vector, DirectSumVector) or isinstance(subspace, DirectSumSubspace):
        if not (isinstance(vector, DirectSumVector) and isinstance(subspace, DirectSumSubspace)):
            raise SpaceMismatchError("direct-sum vector requires a direct-sum subspace")
        dl = distance_to_subspace(vector.left, subspace.left)
        dr = distance_to_subspace(vector.right, subspace.right)
        return math.sqrt(dl * dl + dr * dr)
    if vector.space_kind != subspace.space_kind:
        raise SpaceMismatchError(
            f"vector lives in a {vector.space_kind} space, subspace in {subspace.space_kind}"
        )
    outside = math.fsum(
        abs(c) ** 2 for i, c in vector.items() if not subspace.contains_index(i)
    )
    return math.sqrt(outside)


def make_net(
    subspace: CoordinateSubspace,
    support_size: int,
    coefficient_grid: Sequence[float],
    radius_cap: float,
) -> list[SparseVector]:
    """Deterministic finite net inside a coordinate subspace.

    Enumerates every vector supported on the first ``support_size`` member
    indices of the subspace (canonical order) whose coefficients all come
    from ``coefficient_grid`` and whose norm is at most ``radius_cap``.  The
    grid is sorted ascending and tuples are produced in lexicographic order,
    so the output order is reproducible bit for bit.
    """
    if support_size < 1:
        raise ValueError("support_size must be >= 1")
    if not coefficient_grid:
        raise ValueError("coefficient_grid must be nonempty")
    if subspace.is_zero_subspace():
        raise EmptySubspaceError("cannot build a net in the zero subspace")
    indices = subspace.first_indices(support_size)
    grid = sorted({float(g) for g in coefficient_grid})
    net: list[SparseVector] = []
    for coeffs in itertools.product(grid, repeat=len(indices)):
        vec = SparseVector(subspace.space_kind, zip(indices, coeffs))
        if vec.norm() <= radius_cap:
            net.append(vec)
    return net
