"""Acceptance criteria for the toolkit, one test per criterion.

Each test prints a single PASS line with its headline numbers once its
assertions hold (a failing test shows up as the pytest FAILED line for
that criterion).  Oracles here are computed independently of the library
paths under test: closed forms, exact rational/integer arithmetic, and
brute-force scans over the defining data.
"""

import math
import time
from fractions import Fraction

from shiftdyn.criteria import build_example32_weights
from shiftdyn.cli import main
from shiftdyn.experiments import (
    run_criterion_transfer_experiment,
    run_mixing_experiment,
    run_projection_experiment,
)
from shiftdyn.operators import (
    WeightedShift,
    invariance_check,
    rolewicz_operator,
    shift_power_norm,
)
from shiftdyn.orbits import compute_orbit, density_report, transitivity_witness
from shiftdyn.spaces import (
    BILATERAL,
    UNILATERAL,
    CoordinateSubspace,
    SparseVector,
    make_net,
)
from shiftdyn.weights import BlockWeights, ConstantWeights, PiecewiseWeights

LOG2 = math.log(2.0)


def _announce(capsys, line: str):
    with capsys.disabled():
        print(f"\n{line}")


def test_a1_rolewicz_dichotomy(capsys):
    t0 = time.perf_counter()
    space = CoordinateSubspace.full(UNILATERAL)
    net = make_net(space, 4, (-1.0, -0.5, 0.0, 0.5, 1.0), 2.0)
    assert len(net) == 625

    # |scale| > 1: a witness at n = 30 with closed-form error 2^-30 ||v||
    expanding = rolewicz_operator(2.0)
    zero = SparseVector.zero(UNILATERAL)
    max_err = 0.0
    for target in net:
        w = transitivity_witness(expanding, space, zero, target, 30)
        max_err = max(max_err, w.err_near + w.err_far)
    closed_form = 2.0 ** -30 * max(v.norm() for v in net)
    assert max_err <= closed_form
    assert max_err <= 1e-6

    # |scale| < 1: the orbit dies instantly and covers almost nothing
    contracting = rolewicz_operator(0.5)
    e0 = SparseVector.basis(UNILATERAL, 0)
    coverage = density_report(contracting, e0, 1000, net, 0.5).coverage
    assert coverage < 0.10

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _announce(
        capsys,
        f"ACCEPTANCE 1 (rolewicz dichotomy): PASS - witness err {max_err:.3e} "
        f"<= {closed_form:.3e}, contracting coverage {coverage:.4f} [{elapsed:.2f}s]",
    )


def test_a2_weight_product_evaluator_exactness(capsys):
    t0 = time.perf_counter()
    op = WeightedShift(PiecewiseWeights(0.5, 2.0), BILATERAL)

    forward = shift_power_norm(op, 0, 20, "forward")
    assert abs(forward - 20 * math.log(0.5)) <= 1e-12
    for convention in ("thm12", "thm13"):
        backward = shift_power_norm(op, 0, 20, "backward", convention)
        assert abs(backward - 20 * math.log(0.5)) <= 1e-12

    # exact rational oracle for the same product
    product = Fraction(1, 2) ** 20
    assert product == Fraction(1, 1048576)
    assert float(product) == 9.5367431640625e-7
    assert abs(math.exp(forward) - float(product)) <= 1e-12 * float(product)

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _announce(
        capsys,
        f"ACCEPTANCE 2 (evaluator exactness): PASS - log products at "
        f"20*log(1/2), product {float(product)!r} [{elapsed:.2f}s]",
    )


def _brute_force_min_max_log2(left, right, horizon: int, forward: bool):
    """Scan n = 1..horizon accumulating integer log2 weight sums directly."""
    log2_of = {0.5: -1, 2.0: 1}
    s_left = s_right = 0
    best = None
    for n in range(1, horizon + 1):
        if forward:
            s_left += log2_of[left.value_at(n - 1)]
            s_right += log2_of[right.value_at(n - 1)]
        else:
            s_left -= log2_of[left.value_at(-n)]
            s_right -= log2_of[right.value_at(-n)]
        worst = max(s_left, s_right)
        if best is None or worst < best:
            best = worst
    return best


def test_a3_example32_certificate(capsys):
    t0 = time.perf_counter()
    horizon = 10_000
    result = build_example32_weights(horizon)
    cert = result.certificate
    assert cert.count == 6
    assert cert.tol == 1e-6
    assert cert.left_verdict == "satisfied-to-horizon"
    assert cert.right_verdict == "satisfied-to-horizon"
    assert cert.ok

    fwd = _brute_force_min_max_log2(result.left_weights, result.right_weights, horizon, True)
    back = _brute_force_min_max_log2(result.left_weights, result.right_weights, horizon, False)
    assert fwd == cert.min_max_forward_log2
    assert back == cert.min_max_backward_log2
    # min over n of the larger forward product stays >= 1/2 (log2 >= -1)
    assert fwd >= -1 and back >= -1

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _announce(
        capsys,
        f"ACCEPTANCE 3 (example32 certificate): PASS - components satisfied, "
        f"min-max log2 forward {fwd} backward {back} (floor -1) [{elapsed:.2f}s]",
    )


def test_a4_projection_law(capsys):
    t0 = time.perf_counter()
    rep = run_projection_experiment()
    assert len(rep.traces["runs"]) == 100
    assert rep.traces["steps_per_run"] == 501
    assert rep.traces["pair_targets"] >= 27
    assert rep.traces["violations"] == 0
    assert rep.traces["checked"] == 8_116_200
    # the injected negative control (corrupted pair distances) must trip
    assert rep.traces["control_violations"] > 0
    assert rep.verdicts == {"projection-law": "pass", "negative-control": "pass"}

    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _announce(
        capsys,
        f"ACCEPTANCE 4 (projection law): PASS - 0 violations in "
        f"{rep.traces['checked']} checks over {rep.traces['pair_targets']} pair "
        f"targets, control tripped {rep.traces['control_violations']} times [{elapsed:.2f}s]",
    )


def test_a5_criterion_lifting(capsys):
    t0 = time.perf_counter()
    rep = run_criterion_transfer_experiment()
    rows = rep.traces["instances"]
    assert len(rows) == 20
    factor_log = math.log(math.sqrt(2.0) + 1e-12)
    for row in rows:
        assert row["scalar"]["verdict"] == "satisfied-to-horizon"
        assert row["scalar"]["tol"] == 1e-8
        assert row["lifted"]["verdict"] == "satisfied-to-horizon"
        assert row["lifted"]["tol"] == math.sqrt(2.0) * 1e-8
        for key in ("forward_log_trace", "backward_log_trace"):
            for base, up in zip(row["scalar"][key], row["lifted"][key]):
                if not (math.isinf(base) and math.isinf(up)):
                    assert up <= base + factor_log
        assert row["split"]["forward_log_trace"] == row["scalar"]["forward_log_trace"]
        assert row["split"]["backward_log_trace"] == row["scalar"]["backward_log_trace"]
    assert all(v == "pass" for v in rep.verdicts.values())

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _announce(
        capsys,
        f"ACCEPTANCE 5 (criterion lifting): PASS - 20 instances lift within "
        f"sqrt(2) pointwise and split back exactly [{elapsed:.2f}s]",
    )


def test_a6_invariance_exactness(capsys):
    t0 = time.perf_counter()
    op = WeightedShift(ConstantWeights(1.0), BILATERAL)
    cases = 0
    mismatches = 0
    for p in range(1, 13):
        for mask in range(1, 2 ** p - 1):
            subset = frozenset(i for i in range(p) if mask >> i & 1)
            subspace = CoordinateSubspace.residues(BILATERAL, p, subset)
            for n in range(1, 101):
                got = invariance_check(op, subspace, n)
                # one-period oracle: shifting residues by n must stay inside
                want = all((x + n) % p in subset for x in subset)
                cases += 1
                mismatches += got != want
    assert cases >= 10_000
    assert mismatches == 0

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _announce(
        capsys,
        f"ACCEPTANCE 6 (invariance exactness): PASS - {cases} cases, "
        f"0 mismatches vs one-period oracle [{elapsed:.2f}s]",
    )


def test_a7_mixing_transitive_composition(capsys):
    t0 = time.perf_counter()
    rep = run_mixing_experiment(horizon=2000)
    left = rep.traces["left"]
    right = rep.traces["right"]
    pair = rep.traces["pair"]
    assert left["classification"] == "cofinite-beyond"
    assert left["cofinite_from"] is not None and left["cofinite_from"] <= 200
    assert len(right["members"]) >= 50
    intersection = set(left["members"]) & set(right["members"])
    assert set(pair["members"]) >= intersection
    assert rep.status == "pass"

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _announce(
        capsys,
        f"ACCEPTANCE 7 (return-set composition): PASS - mixing cofinite from "
        f"{left['cofinite_from']}, block set {len(right['members'])} members, "
        f"pair contains the {len(intersection)}-element intersection [{elapsed:.2f}s]",
    )


def _block_log2_prefix_oracle(checkpoints):
    """Integer log2 sums of the 4^k block layout, from the block geometry alone."""
    results = {}
    wanted = sorted(checkpoints)
    pos = 0
    total = 0
    k = 0
    idx = 0
    for n in wanted:
        while pos < n:
            block_end = (4 ** (k + 1) - 1) // 3
            take = min(n, block_end) - pos
            total += take * (-1 if k % 2 == 0 else 1)
            pos += take
            if pos == block_end:
                k += 1
        results[n] = total
    return results


def test_a8_performance(capsys):
    # million-step orbit with norm and subspace-distance tracking
    op = WeightedShift(ConstantWeights(0.5), BILATERAL)
    start = SparseVector.basis(BILATERAL, 0)
    evens = CoordinateSubspace.residues(BILATERAL, 2, {0})
    t0 = time.perf_counter()
    trace = compute_orbit(op, start, 1_000_000, evens, retain=False)
    orbit_time = time.perf_counter() - t0
    assert len(trace.log_norms) == 1_000_001
    assert trace.log_dists is not None
    assert orbit_time < 1.0

    # prefix products across 10^6 weights against exact integer log2 sums
    weights = BlockWeights(4, (0.5, 2.0))
    checkpoints = list(range(1000, 1_000_001, 1000))
    oracle = _block_log2_prefix_oracle(checkpoints)
    worst_rel = 0.0
    for n in checkpoints:
        got = weights.log_range_sum(0, n)
        want = oracle[n] * LOG2  # exact rational 2**oracle[n]
        if want == 0.0:
            assert got == 0.0
        else:
            worst_rel = max(worst_rel, abs(got - want) / abs(want))
    assert worst_rel <= 1e-9

    _announce(
        capsys,
        f"ACCEPTANCE 8 (performance): PASS - 10^6-step tracked orbit in "
        f"{orbit_time:.3f}s, 1000 prefix products within rel {worst_rel:.2e} [{orbit_time:.2f}s]",
    )


def test_a9_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    names = (
        "projection",
        "mixing",
        "transfer",
        "transfer-counterexample",
        "commutant",
        "extraction",
        "rolewicz",
    )
    dirs = (tmp_path / "first", tmp_path / "second")
    for out in dirs:
        for name in names:
            code = main(["experiment", name, "--out", str(out)])
            assert code == 0, name
    compared = 0
    for name in names:
        first = (dirs[0] / f"experiment-{name}.json").read_bytes()
        second = (dirs[1] / f"experiment-{name}.json").read_bytes()
        assert first == second, name
        compared += 1
    assert compared == len(names)

    elapsed = time.perf_counter() - t0
    _announce(
        capsys,
        f"ACCEPTANCE 9 (determinism): PASS - {compared} experiment reports "
        f"byte-identical across independent reruns [{elapsed:.2f}s]",
    )
