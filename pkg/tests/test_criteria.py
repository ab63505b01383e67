"""Criterion evaluators, dense-set checks, lifting, and the opposed blocks."""

import math

import pytest

from shiftdyn.criteria import (
    CommonSubsequenceReport,
    ConstructionError,
    CriterionData,
    CriterionDataError,
    DenseSetSpec,
    ExplicitDenseSpec,
    InversePowerApproximant,
    PairApproximant,
    ProductDenseSpec,
    TableApproximant,
    VERDICT_SATISFIED,
    VERDICT_UNDECIDED,
    VERDICT_VIOLATED,
    arithmetic_iterates,
    build_example32_weights,
    check_subspace_criterion,
    common_subsequence_report,
    decide_verdict,
    eval_direct_sum_criterion,
    eval_forward_criterion,
    lift_criterion,
    split_criterion,
)
from shiftdyn.operators import (
    DirectSumOp,
    IdentityOp,
    NotInvertibleError,
    UnsupportedOperatorError,
    WeightedShift,
)
from shiftdyn.spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    DirectSumSubspace,
    DirectSumVector,
    SparseVector,
)
from shiftdyn.weights import BlockWeights, ConstantWeights, PiecewiseWeights

LOG2 = math.log(2.0)
LOG_TOL = math.log(1e-6)

# weights 1/2 ahead, 2 behind: products shrink in both directions
MIXING = WeightedShift(PiecewiseWeights(0.5, 2.0), BILATERAL)
FULL = CoordinateSubspace.full(BILATERAL)
EVENS = CoordinateSubspace.residues(BILATERAL, 2, {0})


def approx(x, rel=1e-12):
    return pytest.approx(x, rel=rel)


class TestArithmeticIterates:
    def test_values(self):
        assert arithmetic_iterates(3, 4) == (3, 6, 9, 12)
        assert arithmetic_iterates(3, 4, start=5) == (5, 8, 11, 14)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            arithmetic_iterates(0, 4)
        with pytest.raises(ValueError):
            arithmetic_iterates(2, 0)
        with pytest.raises(ValueError):
            arithmetic_iterates(2, 3, start=0)


class TestVerdictRules:
    def test_satisfied_needs_tolerance_and_monotone_tail(self):
        verdict, witness = decide_verdict([[-1.0, -2.0, -20.0]], [True] * 3, [1, 2, 3], 1e-6)
        assert verdict == VERDICT_SATISFIED and witness is None

    def test_rebounding_tail_is_undecided(self):
        verdict, _ = decide_verdict([[-1.0, -30.0, -20.0]], [True] * 3, [1, 2, 3], 1e-6)
        assert verdict == VERDICT_UNDECIDED

    def test_slow_decay_is_undecided(self):
        verdict, _ = decide_verdict([[-1.0, -2.0, -3.0]], [True] * 3, [1, 2, 3], 1e-6)
        assert verdict == VERDICT_UNDECIDED

    def test_no_decay_is_violated(self):
        verdict, witness = decide_verdict([[-1.0, 0.5]], [True] * 2, [1, 2], 1e-6)
        assert verdict == VERDICT_VIOLATED
        assert witness == {
            "reason": "no-decay",
            "step_index": 2,
            "power": 2,
            "max_final_log_product": 0.5,
        }

    def test_constant_one_products_are_violated(self):
        # log products identically zero never decay
        verdict, witness = decide_verdict([[0.0, 0.0, 0.0]], [True] * 3, [1, 2, 3], 1e-6)
        assert verdict == VERDICT_VIOLATED
        assert witness["reason"] == "no-decay"

    def test_invariance_failure_wins_with_witness(self):
        verdict, witness = decide_verdict([[-50.0, -60.0]], [True, False], [2, 4], 1e-6)
        assert verdict == VERDICT_VIOLATED
        assert witness == {"reason": "invariance-failure", "step_index": 2, "power": 4}

    def test_empty_traces_are_undecided(self):
        verdict, witness = decide_verdict([[], []], [], [], 1e-6)
        assert verdict == VERDICT_UNDECIDED and witness is None

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            decide_verdict([[-1.0]], [True], [1], 0.0)


class TestDenseSetSpec:
    def test_first_samples_match_net_order(self):
        spec = DenseSetSpec(FULL)
        assert spec.samples(3) == [
            SparseVector(BILATERAL, {0: -1.0}),
            SparseVector.zero(BILATERAL),
            SparseVector(BILATERAL, {0: 1.0}),
        ]

    def test_deterministic_distinct_and_inside_subspace(self):
        subspace = CoordinateSubspace.residues(BILATERAL, 3, {0, 2})
        spec = DenseSetSpec(subspace)
        first = spec.samples(40)
        second = spec.samples(40)
        assert first == second
        assert len(first) == 40
        assert len({tuple(v.items()) for v in first}) == 40
        assert all(subspace.contains(v) for v in first)

    def test_later_stages_refine_the_grid(self):
        samples = DenseSetSpec(FULL).samples(60)
        # stage 2 uses half-integer coefficients on two coordinates
        assert any(
            any(abs(c.real - 0.5) < 1e-12 for _, c in v.items()) for v in samples
        )

    def test_rejects_bad_parameters(self):
        with pytest.raises(CriterionDataError):
            DenseSetSpec(FULL, base_support=0)
        with pytest.raises(CriterionDataError):
            DenseSetSpec(FULL, radius_cap=0.0)


class TestProductDenseSpec:
    def test_row_major_pairing(self):
        left = ExplicitDenseSpec(
            (SparseVector.basis(BILATERAL, 0), SparseVector.basis(BILATERAL, 2))
        )
        spec = ProductDenseSpec(left, left)
        got = spec.samples(4)
        assert got[0] == DirectSumVector(left.vectors[0], left.vectors[0])
        assert got[1] == DirectSumVector(left.vectors[0], left.vectors[1])
        assert got[2] == DirectSumVector(left.vectors[1], left.vectors[0])
        assert len(got) == 4

    def test_budget_truncation(self):
        spec = ProductDenseSpec(DenseSetSpec(FULL), DenseSetSpec(FULL))
        assert len(spec.samples(5)) == 5


class TestCriterionDataValidation:
    def test_rejects_empty_and_nonincreasing(self):
        d = DenseSetSpec(FULL)
        with pytest.raises(CriterionDataError):
            CriterionData((), d, d, InversePowerApproximant())
        with pytest.raises(CriterionDataError):
            CriterionData((3, 3), d, d, InversePowerApproximant())
        with pytest.raises(CriterionDataError):
            CriterionData((0, 1), d, d, InversePowerApproximant())

    def test_table_lookup_missing_entry(self):
        with pytest.raises(CriterionDataError):
            TableApproximant(()).lookup(1, 0)


class TestForwardCriterion:
    def test_mixing_shift_is_satisfied_with_frozen_traces(self):
        report = eval_forward_criterion(MIXING, FULL, 0, arithmetic_iterates(2, 10))
        assert report.verdict == VERDICT_SATISFIED
        assert report.kind == "forward"
        assert report.iterates == arithmetic_iterates(2, 10)
        assert report.forward_log_trace == approx([-2 * k * LOG2 for k in range(1, 11)])
        assert report.backward_log_trace == approx([-2 * k * LOG2 for k in range(1, 11)])
        assert all(report.invariance_trace)
        assert report.witness is None

    def test_short_horizon_is_undecided(self):
        report = eval_forward_criterion(MIXING, FULL, 0, arithmetic_iterates(2, 10), count=5)
        # final log product -10 log 2 has not yet reached log(1e-6)
        assert report.verdict == VERDICT_UNDECIDED
        assert report.count == 5
        assert len(report.forward_log_trace) == 5

    def test_contraction_blows_up_backward(self):
        op = WeightedShift(ConstantWeights(0.5), BILATERAL)
        report = eval_forward_criterion(op, FULL, 0, arithmetic_iterates(1, 10))
        assert report.verdict == VERDICT_VIOLATED
        assert report.witness["reason"] == "no-decay"
        assert report.backward_log_trace[-1] == approx(10 * LOG2)

    def test_expansion_blows_up_forward(self):
        op = WeightedShift(ConstantWeights(2.0), BILATERAL)
        report = eval_forward_criterion(op, FULL, 0, arithmetic_iterates(1, 10))
        assert report.verdict == VERDICT_VIOLATED
        assert report.forward_log_trace[-1] == approx(10 * LOG2)

    def test_odd_power_breaks_parity_subspace(self):
        report = eval_forward_criterion(MIXING, EVENS, 0, (1, 2))
        assert report.verdict == VERDICT_VIOLATED
        assert report.witness == {"reason": "invariance-failure", "step_index": 1, "power": 1}

    def test_even_powers_preserve_parity_subspace(self):
        report = eval_forward_criterion(MIXING, EVENS, 0, arithmetic_iterates(2, 20))
        assert report.verdict == VERDICT_SATISFIED
        assert all(report.invariance_trace)

    def test_backward_convention_flag(self):
        steps = (4, 8, 16)
        thm12 = eval_forward_criterion(MIXING, FULL, 3, steps, convention="thm12")
        thm13 = eval_forward_criterion(MIXING, FULL, 3, steps, convention="thm13")
        assert thm12.backward_log_trace == approx([-4 * LOG2, -8 * LOG2, -16 * LOG2])
        # the anchored convention crosses the seam: three inverted small
        # weights contribute a factor 8 before the decaying side takes over
        assert thm13.backward_log_trace == approx([2 * LOG2, -2 * LOG2, -10 * LOG2])

    def test_requires_pure_invertible_bilateral_shift(self):
        with pytest.raises(UnsupportedOperatorError):
            eval_forward_criterion(IdentityOp(), FULL, 0, (1, 2))
        unilateral = WeightedShift(ConstantWeights(0.5), UNILATERAL)
        with pytest.raises(NotInvertibleError):
            eval_forward_criterion(
                unilateral, CoordinateSubspace.full(UNILATERAL), 0, (1, 2)
            )
        with pytest.raises(ValueError):
            eval_forward_criterion(MIXING, EVENS, 1, (2, 4))


class TestDirectSumCriterion:
    def test_two_mixing_components_agree_with_single(self):
        steps = arithmetic_iterates(2, 10)
        single = eval_forward_criterion(MIXING, FULL, 0, steps)
        joint = eval_direct_sum_criterion(MIXING, MIXING, FULL, FULL, 0, 0, steps)
        assert joint.verdict == VERDICT_SATISFIED
        assert joint.forward_log_trace == single.forward_log_trace
        assert joint.details["left_forward_log_trace"] == single.forward_log_trace

    def test_opposed_blocks_never_decay_jointly(self):
        built = build_example32_weights(4096)
        left = WeightedShift(built.left_weights, BILATERAL)
        right = WeightedShift(built.right_weights, BILATERAL)
        report = eval_direct_sum_criterion(
            left, right, FULL, FULL, 0, 0, built.left_iterates, count=6
        )
        assert report.verdict == VERDICT_VIOLATED
        assert report.witness["reason"] == "no-decay"
        # the phase-1 sequence is the pointwise reciprocal of the phase-0 one
        assert report.details["left_forward_log_trace"][:2] == approx([-LOG2, -13 * LOG2])
        assert report.details["right_forward_log_trace"][:2] == approx([LOG2, 13 * LOG2])
        assert report.forward_log_trace[:2] == approx([LOG2, 13 * LOG2])

    def test_joint_invariance_uses_both_subspaces(self):
        report = eval_direct_sum_criterion(MIXING, MIXING, EVENS, FULL, 0, 0, (1, 2))
        assert report.verdict == VERDICT_VIOLATED
        assert report.witness["reason"] == "invariance-failure"


class TestSubspaceCriterion:
    def test_mixing_full_space_satisfied_with_exact_recovery(self):
        data = CriterionData(
            arithmetic_iterates(4, 12),
            DenseSetSpec(FULL),
            DenseSetSpec(FULL),
            InversePowerApproximant(),
        )
        report = check_subspace_criterion(MIXING, FULL, data, sample_budget=9)
        assert report.verdict == VERDICT_SATISFIED
        assert all(report.invariance_trace)
        # dyadic weights: the inverse-power approximant reproduces targets bit
        # for bit, so every residual is exactly zero
        assert all(r == -math.inf for r in report.details["approximant_residual_log_trace"])
        assert report.forward_log_trace[-1] <= LOG_TOL
        assert any("whole space" in note for note in report.notes)

    def test_parity_subspace_satisfied(self):
        data = CriterionData(
            arithmetic_iterates(4, 12),
            DenseSetSpec(EVENS),
            DenseSetSpec(EVENS),
            InversePowerApproximant(),
        )
        report = check_subspace_criterion(MIXING, EVENS, data, sample_budget=6)
        assert report.verdict == VERDICT_SATISFIED
        assert all(report.invariance_trace)
        assert report.notes == ()

    def test_approximant_escaping_subspace_is_witnessed(self):
        e0 = SparseVector.basis(BILATERAL, 0)
        data = CriterionData(
            (2,),
            ExplicitDenseSpec((e0,)),
            ExplicitDenseSpec((e0,)),
            TableApproximant((((1, 0), SparseVector.basis(BILATERAL, 1)),)),
        )
        report = check_subspace_criterion(MIXING, EVENS, data, sample_budget=1)
        assert report.verdict == VERDICT_VIOLATED
        assert report.witness == {
            "reason": "approximant-outside-subspace",
            "step_index": 1,
            "power": 2,
            "sample_index": 0,
        }

    def test_empty_sample_family_is_undecided(self):
        data = CriterionData(
            (2, 4),
            ExplicitDenseSpec(()),
            ExplicitDenseSpec(()),
            InversePowerApproximant(),
        )
        report = check_subspace_criterion(MIXING, FULL, data)
        assert report.verdict == VERDICT_UNDECIDED
        assert "empty dense-set sample" in report.notes

    def test_sample_outside_subspace_is_a_data_error(self):
        stray = SparseVector.basis(BILATERAL, 1)
        data = CriterionData(
            (2,),
            ExplicitDenseSpec((stray,)),
            ExplicitDenseSpec((stray,)),
            InversePowerApproximant(),
        )
        with pytest.raises(CriterionDataError):
            check_subspace_criterion(MIXING, EVENS, data)

    def test_missing_table_entry_surfaces_as_data_error(self):
        e0 = SparseVector.basis(BILATERAL, 0)
        data = CriterionData(
            (2,),
            ExplicitDenseSpec((e0,)),
            ExplicitDenseSpec((e0,)),
            TableApproximant(()),
        )
        with pytest.raises(CriterionDataError):
            check_subspace_criterion(MIXING, FULL, data, sample_budget=1)


class TestLiftAndSplit:
    def _scalar_data(self):
        return CriterionData(
            arithmetic_iterates(4, 12),
            DenseSetSpec(FULL),
            DenseSetSpec(FULL),
            InversePowerApproximant(),
        )

    def test_split_of_lift_returns_the_original_components(self):
        data = self._scalar_data()
        left, right = split_criterion(lift_criterion(data))
        for part in (left, right):
            assert part.iterates == data.iterates
            assert part.dense_decay is data.dense_decay
            assert part.dense_targets is data.dense_targets
            assert part.approximant is data.approximant

    def test_lift_rejects_product_input_and_split_rejects_scalar(self):
        data = self._scalar_data()
        lifted = lift_criterion(data)
        with pytest.raises(CriterionDataError):
            lift_criterion(lifted)
        with pytest.raises(CriterionDataError):
            split_criterion(data)

    def test_lifted_traces_pay_exactly_sqrt_two(self):
        data = self._scalar_data()
        scalar = check_subspace_criterion(MIXING, FULL, data, sample_budget=3)
        doubled = DirectSumOp(MIXING, MIXING)
        pair_space = DirectSumSubspace(FULL, FULL)
        lifted = check_subspace_criterion(
            doubled, pair_space, lift_criterion(data), sample_budget=9
        )
        assert lifted.verdict == VERDICT_SATISFIED
        half_log2 = 0.5 * LOG2
        for got, base in zip(lifted.forward_log_trace, scalar.forward_log_trace):
            assert got == approx(base + half_log2, rel=1e-9)
            assert got <= base + math.log(math.sqrt(2.0) + 1e-12)

    def test_split_component_check_matches_scalar_check_exactly(self):
        data = self._scalar_data()
        left, _ = split_criterion(lift_criterion(data))
        scalar = check_subspace_criterion(MIXING, FULL, data, sample_budget=3)
        again = check_subspace_criterion(MIXING, FULL, left, sample_budget=3)
        assert again.forward_log_trace == scalar.forward_log_trace
        assert again.backward_log_trace == scalar.backward_log_trace
        assert again.verdict == scalar.verdict


class TestOpposedBlockConstruction:
    def test_frozen_iterates_and_certificate(self):
        built = build_example32_weights(10_000)
        assert built.left_iterates == (1, 21, 341, 5461, 87381, 1398101)
        assert built.right_iterates == (5, 85, 1365, 21845, 349525, 5592405)
        cert = built.certificate
        assert cert.ok
        assert cert.left_verdict == VERDICT_SATISFIED
        assert cert.right_verdict == VERDICT_SATISFIED
        # reciprocal pairing: max of the two log2 paths is |path| >= 0
        assert cert.min_max_forward_log2 == 0
        assert cert.min_max_backward_log2 == 0
        assert isinstance(built.left_weights, BlockWeights)
        assert built.right_weights.phase == 1

    def test_individual_traces_decay_along_own_blocks(self):
        built = build_example32_weights(256)
        report = eval_forward_criterion(
            WeightedShift(built.left_weights, BILATERAL),
            FULL,
            0,
            built.left_iterates,
            count=6,
        )
        assert report.verdict == VERDICT_SATISFIED
        assert report.forward_log_trace[:3] == approx([-LOG2, -13 * LOG2, -205 * LOG2])
        assert report.backward_log_trace[:3] == approx([-LOG2, -13 * LOG2, -205 * LOG2])

    def test_certificate_holds_even_at_floor_one(self):
        assert build_example32_weights(1024, floor=1.0).certificate.ok

    def test_unreachable_floor_raises(self):
        with pytest.raises(ConstructionError):
            build_example32_weights(1024, floor=1.5)

    def test_horizon_too_small(self):
        with pytest.raises(ValueError):
            build_example32_weights(32)

    def test_iterate_sequences_share_nothing(self):
        built = build_example32_weights(2048)
        report = common_subsequence_report(
            built.left_iterates, built.right_iterates, 10_000_000
        )
        assert isinstance(report, CommonSubsequenceReport)
        assert report.verdict == "disjoint-to-horizon"
        assert report.common == ()

    def test_overlap_detection(self):
        report = common_subsequence_report((1, 2, 3), (3, 4), 10)
        assert report.verdict == "overlapping"
        assert report.common == (3,)
