"""Acceptance suite: one test per exit criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Every comparison is exact (Fraction equality, zero tolerance); the
stated wall-clock budgets are asserted as well.
"""

import time
from fractions import Fraction as F

from seqdyn.certificates import verify_certificate
from seqdyn.cli import main
from seqdyn.construct import (
    basic_seq_build,
    basic_seq_verify,
    fhc_prefix_certificate,
    hc_prefix_certificate,
    subspace_prefix_certificates,
    with_perturbation,
)
from seqdyn.criteria import (
    NoSubspaceEntry,
    NoSubspaceWitness,
    TargetFamily,
    frequent_schedule_criterion,
    no_subspace_witness_verify,
    support_growth_criterion,
    universal_span_criterion,
    ws_gap_criterion,
)
from seqdyn.density import DensitySetFamily
from seqdyn.operators import (
    OperatorSequence,
    affine_support_operator,
    closed_form_support,
    constant_weights,
    identity_operator,
    iterate,
    iterate_support,
    polynomial_shift_mix,
    weighted_backward_shift,
)
from seqdyn.sampling import make_rng, sample_coefficients
from seqdyn.seqspace import (
    Domain,
    FiniteSeq,
    constant_norm_family,
    factorial_gap_family,
    omega_family,
)
from seqdyn.verdicts import Status

B_TEXT = "preset = backward_shift\nweights = const 1\n"


def _ok(number, label):
    print(f"ACCEPTANCE {number}: PASS — {label}")


def B_op():
    return weighted_backward_shift(constant_weights(1))


def test_acceptance_01_support_index_oracle_equivalence():
    start = time.monotonic()
    presets = [
        ("B", B_op(), range(0, 21)),
        ("2B", weighted_backward_shift(constant_weights(2, Domain.BILATERAL),
                                       Domain.BILATERAL), range(-5, 21)),
        ("P(B)", polynomial_shift_mix([0, 2, 1]), range(0, 21)),
        ("synthetic r=2", affine_support_operator(2, 2), range(0, 21)),
    ]
    for name, op, index_range in presets:
        for k in range(1, 6):
            power = iterate(op, k)
            for i in index_range:
                assert iterate_support(op, k, i) == power.support_index(i), \
                    (name, k, i)
    elapsed = time.monotonic() - start
    assert elapsed < 5.0
    _ok(1, f"recursion equals matrix-power support indices on 4 presets, "
           f"k<=5, i<=20 ({elapsed:.2f}s)")


def test_acceptance_02_closed_form_support_indices():
    start = time.monotonic()
    for r in (1, 2, 3):
        for c0 in (2, 3):
            op = affine_support_operator(c0, r)
            for k in range(1, 6):
                for i in range(0, 21):
                    want = sum(r ** n for n in range(k)) * (c0 - 1) \
                        + r ** k * i + 1
                    assert iterate_support(op, k, i) == want
                    assert closed_form_support(r, c0, k, i) == want
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _ok(2, f"recursion equals the closed form for r in {{1,2,3}}, "
           f"c0 in {{2,3}}, k<=5, i<=20 ({elapsed:.2f}s)")


def test_acceptance_03_criterion_suite_on_presets():
    assert support_growth_criterion(B_op(), 100).status is Status.HOLDS
    assert support_growth_criterion(polynomial_shift_mix([0, 2, 1]),
                                    100).status is Status.HOLDS
    assert support_growth_criterion(identity_operator(),
                                    100).status is Status.REFUTED

    assert frequent_schedule_criterion(
        OperatorSequence.iterates(B_op()), 100).status is Status.HOLDS
    assert frequent_schedule_criterion(
        OperatorSequence.iterates(affine_support_operator(2, 2)),
        100).status is Status.HOLDS

    w = constant_weights(1)
    assert ws_gap_criterion(omega_family(), w, 10_000).status is Status.HOLDS
    assert ws_gap_criterion(constant_norm_family(), w,
                            10_000).status is Status.REFUTED
    gap_verdict = ws_gap_criterion(factorial_gap_family(6, 10_000), w,
                                   10_000, max_rows=6)
    assert gap_verdict.status is Status.VERIFIED_UP_TO
    assert gap_verdict.horizon == 10_000
    _ok(3, "support growth, schedule and gap criteria give the listed "
           "verdicts on all presets")


def test_acceptance_04_certificates_reverify_to_zero(tmp_path):
    start = time.monotonic()
    ops = OperatorSequence.iterates(B_op())
    hc = hc_prefix_certificate(ops, 5, operator_text=B_TEXT)
    report = verify_certificate(hc)
    assert report.ok and not report.failures
    hc_path = tmp_path / "hc.cert"
    hc_path.write_text(hc.to_text())
    assert main(["verify", str(hc_path), "--out",
                 str(tmp_path / "v1.txt")]) == 0
    hc_elapsed = time.monotonic() - start
    assert hc_elapsed < 10.0

    start = time.monotonic()
    fhc = fhc_prefix_certificate(ops, 2, 2, horizon=500,
                                 operator_text=B_TEXT)
    assert not fhc.warnings
    report = verify_certificate(fhc)
    assert report.ok and not report.failures
    fhc_path = tmp_path / "fhc.cert"
    fhc_path.write_text(fhc.to_text())
    assert main(["verify", str(fhc_path), "--out",
                 str(tmp_path / "v2.txt")]) == 0
    fhc_elapsed = time.monotonic() - start
    assert fhc_elapsed < 10.0
    _ok(4, f"hc-prefix (L=5) and fhc (L=2, J=2, horizon=500) certificates "
           f"re-verify with zero residuals ({hc_elapsed:.2f}s / "
           f"{fhc_elapsed:.2f}s)")


def test_acceptance_05_subspace_combination_property():
    ops = OperatorSequence.iterates(B_op())
    cert, report = subspace_prefix_certificates(
        ops, 2, 3, seed=2024, samples=200, operator_text=B_TEXT)
    assert report.ok and not report.failures

    # independent replay of the 200 seeded unit-leading combinations
    hits = {}
    for j, l, n in cert.window_checks:
        hits.setdefault(j, []).append((l, n))
    rng = make_rng(cert.seed)
    js = sorted(cert.vectors)
    failures = 0
    for s in range(200):
        j0 = js[s % len(js)]
        coeffs = sample_coefficients(rng, len(js), unit_index=js.index(j0))
        combined = FiniteSeq.zero()
        for c, j in zip(coeffs, js):
            combined = combined + cert.vectors[j].scale(c)
        for l, n in hits[j0]:
            got = iterate(ops.base, n).apply_window(combined, l)
            if got != cert.target_window(l, l):
                failures += 1
    assert failures == 0
    _ok(5, "unit-leading combinations hit their windows exactly on 200 "
           "seeded samples (L=2, J=3)")


def test_acceptance_06_no_subspace_witness_for_bilateral_shift():
    from seqdyn.sampling import sample_rational
    from seqdyn.seqspace import bilateral_summable_family

    start = time.monotonic()
    space = bilateral_summable_family()
    twoB = weighted_backward_shift(constant_weights(2, Domain.BILATERAL),
                                   Domain.BILATERAL)
    entries = []
    for n in range(0, 7):
        for m in range(1, 7):
            entries.append(NoSubspaceEntry(
                grade=n, iterate=m, constant=F(2) ** m,
                annihilated=frozenset(range(-n, m))))
    witness = NoSubspaceWitness(q_row=0, entries=tuple(entries))
    verdict = no_subspace_witness_verify(twoB, space, witness,
                                         sample_count=100, seed=606)
    assert verdict.status is Status.HOLDS

    # on the witnessed subspaces the bound is an exact equality: check it
    # on every basis vector of each verified window and on 100 samples
    checked_windows = {(w["grade"], w["iterate"]): w["checked"]
                       for _, w in verdict.witnesses}
    rng = make_rng(607)
    for entry in entries:
        k_lo, k_hi = checked_windows[(entry.grade, entry.iterate)]
        Tm = iterate(twoB, entry.iterate)
        free = [k for k in range(k_lo, k_hi + 1)
                if k not in entry.annihilated]
        for k in free:
            e_k = FiniteSeq.basis(k, Domain.BILATERAL)
            assert space.seminorm(0, Tm.apply(e_k)) == \
                entry.constant * space.seminorm(entry.grade, e_k)
    for _ in range(100):
        entry = entries[rng.randrange(len(entries))]
        k_lo, k_hi = checked_windows[(entry.grade, entry.iterate)]
        free = [k for k in range(k_lo, k_hi + 1)
                if k not in entry.annihilated]
        x = FiniteSeq({k: sample_rational(rng) for k in free},
                      Domain.BILATERAL)
        Tm = iterate(twoB, entry.iterate)
        assert space.seminorm(0, Tm.apply(x)) == \
            entry.constant * space.seminorm(entry.grade, x)
    elapsed = time.monotonic() - start
    assert elapsed < 5.0
    _ok(6, f"q(T^m x) = 2^m p_n(x) exactly, on every basis vector in the "
           f"computed windows and 100 samples, m, n <= 6 ({elapsed:.2f}s)")


def test_acceptance_07_density_sets_exhaustive():
    start = time.monotonic()
    fam = DensitySetFamily()
    horizon = 100_000
    sets = {(l, nu): fam.elements(l, nu, 1, horizon)
            for l in range(1, 5) for nu in range(1, 5)}

    for (l, nu), pts in sets.items():
        assert pts, (l, nu)
        assert min(pts) >= nu
        assert all(b - a >= 2 * nu for a, b in zip(pts, pts[1:]))

    tagged = sorted((p, nu, key) for key, pts in sets.items()
                    for nu in [key[1]] for p in pts)
    max_radius = 8  # nu + mu <= 4 + 4 within this range
    for i, (p, nu, key) in enumerate(tagged):
        for q, mu, key2 in tagged[i + 1:]:
            if q - p >= max_radius:
                break
            if key != key2:
                assert q != p, (key, key2, p)
                assert q - p >= nu + mu, (key, key2, p, q)

    for (l, nu) in sets:
        report = fam.empirical_report(l, nu, horizon)
        assert report["ok"], (l, nu, report)
        assert report["min_ratio"] >= report["delta"] > 0
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    _ok(7, f"disjointness, floors, separation and declared density bounds "
           f"hold exhaustively on [1, 10^5] for l, nu <= 4 ({elapsed:.2f}s)")


def test_acceptance_08_basic_sequence_suite():
    fam = constant_norm_family()
    bundle = basic_seq_build(fam, 10, space_text="preset = constant_norm\n")
    assert all(fam.seminorm(0, u) == 1 for u in bundle.vectors)
    assert bundle.kappa == 1

    report = basic_seq_verify(bundle, 100, seed=808)
    assert report.ok and not report.failures

    perturbed = with_perturbation(bundle, F(1, 2))
    assert perturbed.delta == F(1, 2)
    report2 = basic_seq_verify(perturbed, 100, seed=808)
    assert report2.ok and not report2.failures

    # the coefficient bound with K = 1 reads |a_n| <= 2 p_1(x): check the
    # sharpest instance directly
    rng = make_rng(809)
    for _ in range(100):
        coeffs = sample_coefficients(rng, 10)
        x = FiniteSeq.zero()
        for c, u in zip(coeffs, bundle.vectors):
            x = x + u.scale(c)
        p1 = fam.seminorm(0, x)
        assert all(abs(c) <= 2 * p1 for c in coeffs)
    _ok(8, "u_1..u_10 normalized, nesting bound with eps = 0, coefficient "
           "bound with K = 1, and the delta = 1/2 perturbed lower bound all "
           "hold exactly on 100 seeded samples")


def test_acceptance_09_universal_span_examples():
    start = time.monotonic()
    constant = TargetFamily(1, ((F(1),),), ("cycle", 1))
    truncated = TargetFamily(1, ((F(1),),), ("zero",))
    cyclic = TargetFamily(2, ((F(1), F(0)), (F(0), F(1)), (F(1), F(1))),
                          ("cycle", 3))
    assert universal_span_criterion(constant, 5, 100).status is Status.HOLDS
    assert universal_span_criterion(truncated, 5, 100).status is Status.REFUTED
    assert universal_span_criterion(cyclic, 5, 100).status is Status.HOLDS
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _ok(9, f"constant / truncated / cyclic target families give "
           f"HOLDS / REFUTED / HOLDS ({elapsed:.2f}s)")


def test_acceptance_10_reports_are_deterministic(tmp_path):
    two_b_text = ("preset = backward_shift\ndomain = bilateral\n"
                  "weights = const 2\n")
    for name, text in [("B.op", B_TEXT), ("2B.op", two_b_text),
                       ("bi.space", "preset = bilateral_summable\n"),
                       ("w.txt", "q_row = 0\nentry = grade=1 iterate=2 "
                                 "constant=4 annihilated=-1,0,1\n")]:
        (tmp_path / name).write_text(text)
    b_op = str(tmp_path / "B.op")

    runs = [
        ["check", "fhc-schedule", "--op", b_op],
        ["check", "rank", "--op", b_op, "--N", "5", "--l", "3",
         "--horizon", "40"],
        ["check", "no-subspace", "--space", str(tmp_path / "bi.space"),
         "--op", str(tmp_path / "2B.op"),
         "--witness", str(tmp_path / "w.txt"),
         "--samples", "25", "--seed", "99"],
        ["construct", "subspace", "--op", b_op, "--L", "2", "--J", "2",
         "--seed", "31", "--samples", "50"],
        ["construct", "basic-seq", "--space", str(tmp_path / "ones.space"),
         "--n", "6", "--delta", "1/2", "--samples", "40", "--seed", "7"],
    ]
    (tmp_path / "ones.space").write_text(
        "kind = weighted_l1\ngenerator = ones 1\nrow 0 = ; tail const 1 @ 0\n")
    for idx, args in enumerate(runs):
        a = tmp_path / f"a{idx}.txt"
        b = tmp_path / f"b{idx}.txt"
        code_a = main(args + ["--out", str(a)])
        code_b = main(args + ["--out", str(b)])
        assert code_a == code_b
        assert a.read_bytes() == b.read_bytes(), args
    _ok(10, "five representative runs re-executed byte-identically with "
            "fixed seeds")
