"""Constructive builders and certificate re-verification."""

from fractions import Fraction as F

import pytest

from seqdyn.certificates import Certificate, verify_certificate
from seqdyn.construct import (
    basic_seq_build,
    basic_seq_verify,
    basker_verify,
    fhc_prefix_certificate,
    hc_prefix_certificate,
    subspace_prefix_certificates,
    with_perturbation,
)
from seqdyn.errors import (
    MembershipFailError,
    NoWitnessError,
    PreconditionError,
    SupportExhaustedError,
)
from seqdyn.operators import (
    OperatorSequence,
    constant_weights,
    identity_operator,
    iterate,
    weighted_backward_shift,
)
from seqdyn.sampling import make_rng, sample_coefficients
from seqdyn.seqspace import (
    FiniteSeq,
    constant_norm_family,
    factorial_gap_family,
    omega_family,
)

B_TEXT = "preset = backward_shift\nweights = const 1\n"


def B_iterates():
    return OperatorSequence.iterates(
        weighted_backward_shift(constant_weights(1)))


# -- single-vector prefixes ----------------------------------------------------------


def test_hc_prefix_spec_shape():
    # targets (5) and (1, 2) on the shift: disjoint blocks, hit times are
    # the block starts
    cert = hc_prefix_certificate(B_iterates(), 2, targets=[(5,), (1, 2)],
                                 operator_text=B_TEXT)
    assert cert.vectors[1] == FiniteSeq({1: 5, 2: 1, 3: 2})
    assert cert.window_checks == [(1, 1, 1), (1, 2, 2)]
    assert verify_certificate(cert).ok


def test_hc_prefix_dense_targets():
    cert = hc_prefix_certificate(B_iterates(), 5, operator_text=B_TEXT)
    report = verify_certificate(cert)
    assert report.ok and not report.failures
    times = [n for _, _, n in cert.window_checks]
    assert times == sorted(times) and len(set(times)) == 5


def test_hc_prefix_empty():
    cert = hc_prefix_certificate(B_iterates(), 0, operator_text=B_TEXT)
    assert not cert.window_checks
    assert verify_certificate(cert).ok


def test_hc_prefix_identity_has_no_witness():
    with pytest.raises(NoWitnessError) as info:
        hc_prefix_certificate(OperatorSequence.iterates(identity_operator()),
                              1, horizon=40)
    assert info.value.level == 1


def test_hc_prefix_residuals_rechecked_independently():
    ops = B_iterates()
    cert = hc_prefix_certificate(ops, 4, operator_text=B_TEXT)
    x = cert.vectors[1]
    for j, l, n in cert.window_checks:
        got = iterate(ops.base, n).apply_window(x, l)
        assert got == cert.target_window(l, l)


def test_hc_prefix_tampered_certificate_fails():
    cert = hc_prefix_certificate(B_iterates(), 3, operator_text=B_TEXT)
    bad = Certificate.from_text(cert.to_text())
    bad.vectors[1] = bad.vectors[1] + FiniteSeq({1: 1})
    report = verify_certificate(bad)
    assert not report.ok


# -- subspace prefixes ---------------------------------------------------------------


def test_subspace_certificates_verify():
    cert, report = subspace_prefix_certificates(
        B_iterates(), 2, 2, seed=5, samples=40, operator_text=B_TEXT)
    assert report.ok
    assert set(cert.vectors) == {1, 2}
    # valuations strictly increase
    firsts = [cert.valuations[j][2] for j in sorted(cert.valuations)]
    assert firsts == sorted(firsts) and len(set(firsts)) == len(firsts)


def test_subspace_j1_reduces_to_single_vector_prefix():
    cert, report = subspace_prefix_certificates(
        B_iterates(), 2, 1, seed=1, samples=10, operator_text=B_TEXT)
    assert report.ok
    assert list(cert.vectors) == [1]
    for j, l, n in cert.window_checks:
        assert j == 1


def test_subspace_unit_selection_reproduces_hits():
    cert, _ = subspace_prefix_certificates(
        B_iterates(), 2, 3, seed=9, samples=10, operator_text=B_TEXT)
    ops = B_iterates()
    hits = {}
    for j, l, n in cert.window_checks:
        hits.setdefault(j, []).append((l, n))
    for j0 in (1, 2, 3):
        for l, n in hits[j0]:
            got = iterate(ops.base, n).apply_window(cert.vectors[j0], l)
            assert got == cert.target_window(l, l)


def test_subspace_combination_property_is_exact():
    cert, _ = subspace_prefix_certificates(
        B_iterates(), 2, 3, seed=17, samples=5, operator_text=B_TEXT)
    ops = B_iterates()
    rng = make_rng(123)
    hits = {}
    for j, l, n in cert.window_checks:
        hits.setdefault(j, []).append((l, n))
    for trial in range(30):
        j0 = (trial % 3) + 1
        coeffs = sample_coefficients(rng, 3, unit_index=j0 - 1)
        combined = FiniteSeq.zero()
        for c, j in zip(coeffs, (1, 2, 3)):
            combined = combined + cert.vectors[j].scale(c)
        for l, n in hits[j0]:
            got = iterate(ops.base, n).apply_window(combined, l)
            assert got == cert.target_window(l, l)


# -- frequent-visit prefixes ------------------------------------------------------------


def test_fhc_prefix_on_shift():
    cert = fhc_prefix_certificate(B_iterates(), 2, 2, horizon=500,
                                  operator_text=B_TEXT)
    assert not cert.warnings
    report = verify_certificate(cert)
    assert report.ok and not report.failures
    # both vectors received hits for both targets
    hit_pairs = {(j, l) for j, l, _ in cert.window_checks}
    assert hit_pairs == {(1, 1), (1, 2), (2, 1), (2, 2)}


def test_fhc_schedule_consistency_between_consecutive_events():
    cert = fhc_prefix_certificate(B_iterates(), 2, 2, horizon=500,
                                  operator_text=B_TEXT)
    op = weighted_backward_shift(constant_weights(1))
    from seqdyn.operators import iterate_support
    for k, l, nxt in cert.schedule_checks:
        f = max(iterate_support(op, k, i) for i in range(l))
        assert f <= iterate_support(op, nxt, 0) - 1


def test_fhc_empty_horizon_warns():
    cert = fhc_prefix_certificate(B_iterates(), 1, 1, horizon=20,
                                  operator_text=B_TEXT)
    assert cert.warnings
    assert not cert.window_checks


def test_fhc_identity_rejected():
    with pytest.raises(PreconditionError):
        fhc_prefix_certificate(
            OperatorSequence.iterates(identity_operator()), 1, 1)


# -- basic sequences ----------------------------------------------------------------------


def test_basic_seq_exhausts_on_omega():
    with pytest.raises(SupportExhaustedError):
        basic_seq_build(omega_family(), 3)


def test_basic_seq_on_norm_family():
    fam = constant_norm_family()
    bundle = basic_seq_build(fam, 10, space_text="preset = constant_norm\n")
    assert [v.support[0] for v in bundle.vectors] == list(range(10))
    for v in bundle.vectors:
        assert fam.seminorm(0, v) == 1
    assert bundle.kappa == 1
    report = basic_seq_verify(bundle, 100, seed=21)
    assert report.ok and not report.failures


def test_basic_seq_perturbation_exact_delta():
    fam = constant_norm_family()
    bundle = basic_seq_build(fam, 6, space_text="preset = constant_norm\n")
    perturbed = with_perturbation(bundle, F(1, 2))
    assert perturbed.delta == F(1, 2)
    total = sum(2 * perturbed.kappa *
                fam.seminorm(bundle.base_row + k, u - f)
                for k, (u, f) in enumerate(zip(perturbed.vectors,
                                               perturbed.perturbed)))
    assert total == F(1, 2)
    report = basic_seq_verify(perturbed, 100, seed=22)
    assert report.ok and not report.failures


def test_basic_seq_nesting_bound_tight_for_disjoint_supports():
    # with disjoint supports the bound holds with factor exactly 1
    fam = constant_norm_family()
    bundle = basic_seq_build(fam, 5)
    rng = make_rng(40)
    for _ in range(50):
        coeffs = sample_coefficients(rng, 5)
        partial = FiniteSeq.zero()
        values = []
        for c, u in zip(coeffs, bundle.vectors):
            partial = partial + u.scale(c)
            values.append(fam.seminorm(0, partial))
        assert all(a <= b for a, b in zip(values, values[1:]))


# -- graded-kernel verification -------------------------------------------------------------


def test_basker_on_gap_family():
    fam = factorial_gap_family(explicit_rows=5, horizon=2_000)
    # u_k must vanish for grade k but not k+1: pick indices in the zero set
    # of row k that the next row keeps (factorial block with m = k exactly)
    vectors = [FiniteSeq.basis(1),    # ker p_1 \ ker p_2 (block m=1 minus m=2)
               FiniteSeq.basis(2),    # block m=2 = [2,4], row 3 keeps 2
               FiniteSeq.basis(6)]    # block m=3 = [6,9]
    report = basker_verify(vectors, fam, base_row=1, samples=10, seed=4)
    assert report.ok and not report.failures


def test_basker_rejects_constant_vector():
    fam = factorial_gap_family(explicit_rows=3, horizon=500)
    with pytest.raises(MembershipFailError) as info:
        basker_verify([FiniteSeq.basis(0)], fam, base_row=0)
    assert info.value.index == 1


def test_basker_empty_is_vacuous():
    report = basker_verify([], omega_family())
    assert report.ok


# -- certificate round trips ------------------------------------------------------------------


def test_certificate_text_roundtrip():
    cert, _ = subspace_prefix_certificates(
        B_iterates(), 2, 2, seed=3, samples=8, operator_text=B_TEXT)
    text = cert.to_text()
    again = Certificate.from_text(text)
    assert again.to_text() == text
    assert verify_certificate(again).ok


def test_basic_seq_certificate_roundtrip():
    fam = constant_norm_family()
    bundle = with_perturbation(
        basic_seq_build(fam, 4, space_text="preset = constant_norm\n"),
        F(1, 2))
    cert = bundle.certificate(seed=11, samples=20)
    again = Certificate.from_text(cert.to_text())
    report = verify_certificate(again)
    assert report.ok and not report.failures
