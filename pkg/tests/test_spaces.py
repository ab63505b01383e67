"""Vector arithmetic, subspace membership, distances, and net enumeration."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftdyn.spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    EmptySubspaceError,
    SparseVector,
    SpaceMismatchError,
    distance_to_subspace,
    make_net,
)

coeffs = st.complex_numbers(min_magnitude=0.0, max_magnitude=8.0, allow_nan=False, allow_infinity=False)


def small_vectors(space_kind: str = BILATERAL):
    index = st.integers(min_value=0 if space_kind == UNILATERAL else -12, max_value=12)
    return st.dictionaries(index, coeffs, max_size=6).map(
        lambda d: SparseVector(space_kind, d)
    )


class TestSparseVector:
    def test_zero_pruning(self):
        v = SparseVector(BILATERAL, {0: 1.0, 3: 0.0, -2: 2.0})
        assert v.support == (-2, 0)

    def test_cancellation_prunes(self):
        v = SparseVector(BILATERAL, {1: 1.5})
        assert (v - v).is_zero

    def test_duplicate_indices_accumulate(self):
        v = SparseVector(BILATERAL, [(0, 1.0), (0, -1.0), (1, 2.0)])
        assert v.support == (1,)

    def test_unilateral_rejects_negative_indices(self):
        with pytest.raises(ValueError):
            SparseVector(UNILATERAL, {-1: 1.0})

    def test_norm_three_four_five(self):
        v = SparseVector(BILATERAL, {0: 3.0, 7: 4.0})
        assert v.norm() == 5.0

    def test_space_mismatch_on_add(self):
        with pytest.raises(SpaceMismatchError):
            SparseVector(BILATERAL, {0: 1.0}) + SparseVector(UNILATERAL, {0: 1.0})

    @given(small_vectors(), small_vectors())
    @settings(max_examples=60, deadline=None)
    def test_pair_norm_identity(self, left, right):
        pair = DirectSumVector(left, right)
        assert pair.norm_sq() == pytest.approx(left.norm_sq() + right.norm_sq(), rel=1e-12, abs=1e-12)


class TestSubspaces:
    def test_residue_membership(self):
        m = CoordinateSubspace.residues(BILATERAL, 3, {0, 1})
        assert m.contains_index(-3) and m.contains_index(4)
        assert not m.contains_index(-1)  # -1 % 3 == 2

    def test_first_indices_order(self):
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        assert even.first_indices(4) == [0, 2, -2, 4]
        tail = CoordinateSubspace.half_line(BILATERAL, -1)
        assert tail.first_indices(4) == [0, 1, -1, 2]

    def test_first_indices_finite_exhaustion(self):
        m = CoordinateSubspace.explicit(BILATERAL, {5, -2})
        assert m.first_indices(10) == [-2, 5]

    def test_nontriviality_flags(self):
        assert not CoordinateSubspace.full(BILATERAL).is_nontrivial
        assert CoordinateSubspace.residues(BILATERAL, 2, {0}).is_nontrivial
        assert not CoordinateSubspace.half_line(UNILATERAL, 0).is_nontrivial
        assert CoordinateSubspace.half_line(BILATERAL, 0).is_nontrivial
        assert not CoordinateSubspace.explicit(BILATERAL, ()).is_nontrivial

    def test_complements(self):
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        assert even.complement().contains_index(3)
        assert not even.complement().contains_index(2)

        tail = CoordinateSubspace.half_line(BILATERAL, 1)
        below = tail.complement()
        assert below.contains_index(0) and not below.contains_index(1)

        utail = CoordinateSubspace.half_line(UNILATERAL, 2)
        head = utail.complement()
        assert head.contains_index(1) and not head.contains_index(2)

        fin = CoordinateSubspace.explicit(BILATERAL, {0, 4})
        cof = fin.complement()
        assert cof.contains_index(1) and not cof.contains_index(4)

    def test_shifted_image(self):
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        assert even.shifted(3).contains_index(5)
        assert not even.shifted(3).contains_index(4)
        tail = CoordinateSubspace.half_line(BILATERAL, 0)
        assert tail.shifted(-2).contains_index(-2)


class TestDistance:
    def test_distance_outside_mass(self):
        v = SparseVector(BILATERAL, {0: 1.0, 1: 2.0})
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        assert distance_to_subspace(v, even) == 2.0

    def test_distance_zero_iff_supported_inside(self):
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        inside = SparseVector(BILATERAL, {0: 1.0, -4: 1j})
        outside = inside + SparseVector(BILATERAL, {1: 1e-9})
        assert distance_to_subspace(inside, even) == 0.0
        assert distance_to_subspace(outside, even) > 0.0

    @given(small_vectors())
    @settings(max_examples=60, deadline=None)
    def test_pythagoras_with_complement(self, v):
        m = CoordinateSubspace.residues(BILATERAL, 3, {0, 2})
        d_in = distance_to_subspace(v, m)
        d_out = distance_to_subspace(v, m.complement())
        assert d_in**2 + d_out**2 == pytest.approx(v.norm_sq(), rel=1e-12, abs=1e-12)

    def test_pair_distance(self):
        pair = DirectSumVector(
            SparseVector(BILATERAL, {1: 3.0}), SparseVector(BILATERAL, {1: 4.0})
        )
        subspace = DirectSumSubspace(
            CoordinateSubspace.residues(BILATERAL, 2, {0}),
            CoordinateSubspace.residues(BILATERAL, 2, {0}),
        )
        assert distance_to_subspace(pair, subspace) == 5.0

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            distance_to_subspace(
                SparseVector(UNILATERAL, {0: 1.0}),
                CoordinateSubspace.full(BILATERAL),
            )


class TestMakeNet:
    def test_single_support_example(self):
        m = CoordinateSubspace.full(BILATERAL)
        net = make_net(m, 1, (-1.0, 0.0, 1.0), 1.0)
        assert net == [
            SparseVector(BILATERAL, {0: -1.0}),
            SparseVector.zero(BILATERAL),
            SparseVector(BILATERAL, {0: 1.0}),
        ]

    def test_radius_cap_filters(self):
        m = CoordinateSubspace.full(BILATERAL)
        net = make_net(m, 2, (-1.0, 0.0, 1.0), 1.0)
        assert len(net) == 5  # zero plus the four signed unit vectors
        assert all(v.norm() <= 1.0 for v in net)

    def test_support_lies_in_subspace(self):
        even = CoordinateSubspace.residues(BILATERAL, 2, {0})
        net = make_net(even, 3, (0.0, 1.0), 4.0)
        assert all(even.contains(v) for v in net)
        assert any(v.support == (-2, 0, 2) for v in net)

    def test_deterministic_order(self):
        m = CoordinateSubspace.half_line(UNILATERAL, 0)
        a = make_net(m, 2, (0.5, -0.5, 0.0), 2.0)
        b = make_net(m, 2, (0.0, -0.5, 0.5), 2.0)
        assert a == b

    def test_empty_subspace_rejected(self):
        empty = CoordinateSubspace.explicit(BILATERAL, ())
        with pytest.raises(EmptySubspaceError):
            make_net(empty, 1, (1.0,), 1.0)

    def test_finite_subspace_short_support(self):
        m = CoordinateSubspace.explicit(BILATERAL, {3})
        net = make_net(m, 4, (0.0, 1.0), 2.0)
        assert net == [SparseVector.zero(BILATERAL), SparseVector(BILATERAL, {3: 1.0})]
