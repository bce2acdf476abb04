"""The dense enumeration and its inverse."""

from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from seqdyn.enumeration import (
    calkin_wilf,
    calkin_wilf_index,
    dense_index,
    decode_nonzero,
    encode_nonzero,
    enumerate_dense,
)
from seqdyn.seqspace import FiniteSeq


def test_first_element_is_zero_vector():
    assert enumerate_dense(1).is_zero()


def test_calkin_wilf_prefix():
    want = [F(1), F(1, 2), F(2), F(1, 3), F(3, 2), F(2, 3), F(3)]
    assert [calkin_wilf(n) for n in range(1, 8)] == want


def test_enumeration_injective_on_prefix():
    seen = set()
    for l in range(1, 10_001):
        y = enumerate_dense(l)
        assert y not in seen
        seen.add(y)


def test_roundtrip_on_prefix():
    for l in range(1, 4_001):
        assert dense_index(enumerate_dense(l)) == l


def test_small_sign_vectors_all_appear_early():
    # vectors with support in {0, 1} and entries in {0, +-1}: the largest
    # index is 27 (computed through the inverse enumeration and frozen)
    vecs = [FiniteSeq({0: a, 1: b}) for a in (0, 1, -1) for b in (0, 1, -1)]
    indices = sorted(dense_index(v) for v in vecs)
    assert max(indices) == 27
    prefix = {enumerate_dense(l) for l in range(1, 28)}
    assert all(v in prefix for v in vecs)


@given(st.integers(min_value=1, max_value=50_000))
@settings(max_examples=120, deadline=None)
def test_calkin_wilf_roundtrip(n):
    assert calkin_wilf_index(calkin_wilf(n)) == n


@given(st.fractions(min_value=-80, max_value=80, max_denominator=30)
       .filter(lambda q: q != 0))
@settings(max_examples=120, deadline=None)
def test_nonzero_code_roundtrip(q):
    assert decode_nonzero(encode_nonzero(q)) == q


@st.composite
def sparse_vectors(draw):
    idx = draw(st.lists(st.integers(min_value=0, max_value=10),
                        min_size=0, max_size=4, unique=True))
    vals = draw(st.lists(
        st.fractions(min_value=-9, max_value=9, max_denominator=9)
        .filter(lambda q: q != 0),
        min_size=len(idx), max_size=len(idx)))
    return FiniteSeq(dict(zip(idx, vals)))


@given(sparse_vectors())
@settings(max_examples=100, deadline=None)
def test_every_vector_has_a_unique_index(x):
    l = dense_index(x)
    assert l >= 1
    assert enumerate_dense(l) == x
