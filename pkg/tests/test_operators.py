"""Column-finite operators: application, composition, support indices."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from _brute import dense_truncation, mat_mult, mat_power, row_support_end
from seqdyn.errors import (
    NonbandedComposeError,
    RecursionEscapeError,
    RowUnavailableError,
    UnboundedResultError,
    ZeroWeightError,
)
from seqdyn.operators import (
    BandEnvelope,
    ColumnFiniteOperator,
    OperatorSequence,
    RowRule,
    affine_support_operator,
    closed_form_support,
    compose,
    constant_weights,
    identity_operator,
    iterate,
    iterate_support,
    polynomial_shift_mix,
    weighted_backward_shift,
    weighted_forward_shift,
    zero_operator,
)
from seqdyn.seqspace import Domain, FiniteSeq, TailRule, WeightRow


def unweighted_B():
    return weighted_backward_shift(constant_weights(1))


# -- application -------------------------------------------------------------------


def test_backward_shift_moves_basis_down():
    B = unweighted_B()
    assert B.apply(FiniteSeq.basis(5)) == FiniteSeq.basis(4)
    assert B.apply(FiniteSeq.basis(0)).is_zero()


def test_identity_applies_as_identity():
    I = identity_operator()
    x = FiniteSeq({0: F(1, 2), 7: -3})
    assert I.apply(x) == x


def test_apply_window_of_square():
    B2 = iterate(unweighted_B(), 2)
    assert B2.apply_window(FiniteSeq.basis(7), 3) == (0, 0, 0)
    assert B2.apply_window(FiniteSeq.basis(7), 6)[5] == 1


def test_zero_operator_window():
    Z = zero_operator()
    assert Z.apply_window(FiniteSeq.basis(2), 4) == (0, 0, 0, 0)


def test_bilateral_scaled_shift():
    twoB = weighted_backward_shift(constant_weights(2, Domain.BILATERAL),
                                   Domain.BILATERAL)
    out = twoB.apply_rows(FiniteSeq.basis(0, Domain.BILATERAL), [-1])
    assert out[-1] == 2


def test_apply_unbounded_raises():
    # every row reads column 0: full application of e_0 has infinite support
    rule = RowRule(lambda i: FiniteSeq({0: 1}), BandEnvelope(1, 0, 1, 0))
    # envelope slopes are >= 1 by construction, so fake the situation with
    # rows that escape any increasing band: use an explicit-only bilateral
    # operator with no rows, which cannot bound candidates either
    op = ColumnFiniteOperator(Domain.BILATERAL)
    with pytest.raises(UnboundedResultError):
        op.apply(FiniteSeq.basis(0, Domain.BILATERAL))


# -- composition and iteration ---------------------------------------------------------


def test_iterate_of_shift_row0():
    B3 = iterate(unweighted_B(), 3)
    assert B3.row(0) == FiniteSeq({3: 1})


def test_compose_with_identity():
    B = unweighted_B()
    for i in range(6):
        assert compose(identity_operator(), B).row(i) == B.row(i)
        assert compose(B, identity_operator()).row(i) == B.row(i)


def test_iterate_matches_dense_matrix_power():
    # oracle: multiply explicit 20x20 truncations
    P = polynomial_shift_mix([0, 2, 1])  # t^2 + 2t, weights 1
    dense = dense_truncation(P, 20, 20)
    dense2 = mat_power(dense, 2)
    lazy2 = iterate(P, 2)
    for i in range(3):
        row = lazy2.row(i)
        assert [row[j] for j in range(20)] == dense2[i][:20]


def test_compose_explicit_only_falls_back_or_raises():
    explicit = ColumnFiniteOperator(
        explicit_rows={0: FiniteSeq({1: 1}), 1: FiniteSeq({2: 1})})
    B = unweighted_B()
    composed = compose(explicit, B)
    assert composed.row(0) == FiniteSeq({2: 1})
    with pytest.raises(NonbandedComposeError):
        compose(B, explicit)


def test_apply_of_composition_is_composition_of_applies():
    B = unweighted_B()
    P = polynomial_shift_mix([1, 1], alpha=[F(1, 2)])
    x = FiniteSeq({0: 1, 3: F(-2, 3), 8: 5})
    assert compose(B, P).apply(x) == B.apply(P.apply(x))


# -- support indices ----------------------------------------------------------------


def test_support_index_presets():
    assert [identity_operator().support_index(i) for i in range(4)] == \
        [1, 2, 3, 4]
    assert [unweighted_B().support_index(i) for i in range(4)] == [2, 3, 4, 5]
    assert zero_operator().support_index(7) == 0


def test_support_index_of_shift_satisfies_growth_hypotheses():
    B = unweighted_B()
    cs = [B.support_index(i) for i in range(30)]
    assert all(c == i + 2 for i, c in enumerate(cs))
    assert len(set(cs)) == len(cs)


def test_iterate_support_closed_form_for_B():
    B = unweighted_B()
    assert iterate_support(B, 3, 0) == 4  # r=1, c0=2: 3 + 0 + 1
    assert closed_form_support(1, 2, 3, 0) == 4


def test_iterate_support_synthetic_r2():
    syn = affine_support_operator(2, 2)  # c_i = 2 + 2i
    for i in range(21):
        assert iterate_support(syn, 2, i) == 4 * i + 4
        assert closed_form_support(2, 2, 2, i) == 4 * i + 4
    # cross-check against the dense square
    dense = dense_truncation(syn, 6, 30)
    dense2 = mat_mult(dense_truncation(syn, 6, 60),
                      dense_truncation(syn, 60, 30))
    for i in range(3):
        assert row_support_end(dense2[i]) == 4 * i + 4


def test_iterate_support_k1_is_support_index():
    P = polynomial_shift_mix([0, 1, 0, 2])
    for i in range(10):
        assert iterate_support(P, 1, i) == P.support_index(i)


def test_iterate_support_escapes_on_zero_row():
    with pytest.raises(RecursionEscapeError):
        iterate_support(zero_operator(), 2, 0)


def test_iterate_support_equals_support_of_iterate_on_presets():
    ops = [unweighted_B(), polynomial_shift_mix([0, 2, 1]),
           affine_support_operator(2, 2),
           weighted_backward_shift(constant_weights(2, Domain.BILATERAL),
                                   Domain.BILATERAL)]
    for op in ops:
        for k in range(1, 5):
            Tk = iterate(op, k)
            for i in range(8):
                assert iterate_support(op, k, i) == Tk.support_index(i)


def test_window_depends_only_on_first_ci_coordinates():
    # changing x beyond c_i - 1 never changes window i+1
    P = polynomial_shift_mix([0, 2, 1])
    i = 3
    c = P.support_index(i)
    x = FiniteSeq({j: j + 1 for j in range(c)})
    noise = FiniteSeq({c + 2: 99, c + 5: -7})
    assert P.apply_window(x, i + 1) == P.apply_window(x + noise, i + 1)


# -- presets ----------------------------------------------------------------------------


def test_weighted_shift_rows():
    Bw = weighted_backward_shift(constant_weights(2))
    for i in range(5):
        assert Bw.row(i) == FiniteSeq({i + 1: 2})


def test_poly_mix_degenerates_to_shift():
    P = polynomial_shift_mix([0, 1])
    B = unweighted_B()
    for i in range(6):
        assert P.row(i) == B.row(i)


def test_poly_mix_band_inspection():
    P = polynomial_shift_mix([0, 2, 1])
    assert [P.support_index(i) for i in range(11)] == \
        [i + 3 for i in range(11)]


def test_forward_shift_and_mix_columns():
    S = weighted_forward_shift(constant_weights(1))
    assert S.row(0).is_zero()
    assert S.row(3) == FiniteSeq({2: 1})
    mix = polynomial_shift_mix([0, 1], alpha=[F(1, 3)])
    assert mix.row(2) == FiniteSeq({1: F(1, 3), 3: 1})


def test_zero_weight_rejected():
    with pytest.raises(ZeroWeightError):
        weighted_backward_shift(constant_weights(0))
    with pytest.raises(ZeroWeightError):
        weighted_backward_shift(
            WeightRow({1: 1}, tail=TailRule.zero(), tail_start=2))


def test_explicit_operator_row_unavailable():
    op = ColumnFiniteOperator(explicit_rows={0: FiniteSeq({0: 1})})
    with pytest.raises(RowUnavailableError):
        op.row(5)


def test_operator_sequence_explicit_member():
    seq = OperatorSequence.explicit([identity_operator(), unweighted_B()])
    assert seq.member(2).row(0) == FiniteSeq({1: 1})
    with pytest.raises(RowUnavailableError):
        seq.member(3)


# -- random compose/apply consistency ---------------------------------------------------


small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)


@st.composite
def small_explicit_ops(draw):
    rows = {}
    for i in range(draw(st.integers(min_value=1, max_value=4))):
        entries = {draw(st.integers(min_value=0, max_value=6)):
                   draw(small_rationals) for _ in range(2)}
        rows[i] = FiniteSeq(entries)
    return ColumnFiniteOperator(explicit_rows=rows)


@given(t=small_explicit_ops(), s=small_explicit_ops(),
       data=st.data())
@settings(max_examples=40, deadline=None)
def test_compose_apply_associativity_on_explicit_blocks(t, s, data):
    # s must cover every row the composition needs
    needed = {j for i in t.explicit_rows for j in t.row(i).support}
    for j in needed:
        if j not in s.explicit_rows:
            s.explicit_rows[j] = FiniteSeq(
                {data.draw(st.integers(min_value=0, max_value=6)):
                 data.draw(small_rationals)})
    x_entries = {data.draw(st.integers(min_value=0, max_value=6)):
                 data.draw(small_rationals) for _ in range(3)}
    x = FiniteSeq(x_entries)
    assert compose(t, s).apply(x) == t.apply(s.apply(x))


# -- rule-operator composition against dense truncations -----------------------------------


@st.composite
def shift_mixes(draw):
    degree = draw(st.integers(min_value=1, max_value=3))
    poly = [draw(small_rationals) for _ in range(degree)] + \
        [draw(small_rationals.filter(lambda q: q != 0))]
    alpha = [draw(small_rationals) for _ in
             range(draw(st.integers(min_value=0, max_value=2)))]
    weight = draw(st.sampled_from([F(1), F(2), F(-1), F(1, 2)]))
    return polynomial_shift_mix(poly, alpha, constant_weights(weight))


@given(t=shift_mixes(), s=shift_mixes())
@settings(max_examples=25, deadline=None)
def test_rule_composition_matches_dense_product(t, s):
    size = 16
    dense = mat_mult(dense_truncation(t, 6, size),
                     dense_truncation(s, size, size))
    composed = compose(t, s)
    for i in range(6):
        row = composed.row(i)
        assert [row[j] for j in range(size)] == dense[i]


@given(t=shift_mixes(), s=shift_mixes(),
       i=st.integers(min_value=0, max_value=30))
@settings(max_examples=25, deadline=None)
def test_composed_translation_certificate_is_sound(t, s, i):
    # rows promised to translate must translate exactly
    composed = compose(t, s)
    cert = composed.translation
    if cert is None:
        return
    base = max(i, cert.from_row)
    row_a = composed.row(base)
    row_b = composed.row(base + cert.period)
    shifted = FiniteSeq({k + cert.period: v for k, v in row_a.items()})
    assert row_b == shifted


@given(k=st.integers(min_value=1, max_value=4),
       i=st.integers(min_value=-8, max_value=8))
@settings(max_examples=30, deadline=None)
def test_bilateral_iterated_translation_certificate(k, i):
    twoB = weighted_backward_shift(constant_weights(2, Domain.BILATERAL),
                                   Domain.BILATERAL)
    power = iterate(twoB, k)
    cert = power.translation
    assert cert is not None and cert.below_row is not None
    for base in (max(i, cert.from_row), min(i, cert.below_row) - cert.period):
        row_a = power.row(base)
        row_b = power.row(base + cert.period)
        shifted = FiniteSeq({c + cert.period: v for c, v in row_a.items()},
                            Domain.BILATERAL)
        assert row_b == shifted
