"""Deterministic bijective enumeration of finite-support rational sequences.

The enumeration realizes a concrete dense sequence y_1, y_2, ... of the
space of finitely supported rational vectors, with a computable inverse so
certificates can name targets by index alone.

Convention (version 1, frozen — certificates depend on it):

* y_1 is the zero vector.
* For l >= 2, let m = l - 2 and split m = pair(s, v) with the Cantor
  pairing.  ``s + 1`` read in binary is the characteristic function of the
  (nonempty) support set.  ``v`` encodes the tuple of nonzero values on the
  sorted support by right-folded Cantor pairing of per-value codes.
* A nonzero rational gets the code 2*(n-1) (positive) or 2*(n-1)+1
  (negative), where n is its 1-based position in the Calkin-Wilf
  enumeration of the positive rationals (1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Tuple

from .errors import PreconditionError, SchemaMismatchError
from .seqspace import Domain, FiniteSeq

ENUMERATION_VERSION = 1


# -- Calkin-Wilf enumeration of positive rationals --------------------------------


def calkin_wilf(n: int) -> Fraction:
    """n-th positive rational (n >= 1): walk the binary digits of n below the
    leading bit; 0 steps to x/(x+1), 1 steps to x+1."""
    if n < 1:
        raise PreconditionError("Calkin-Wilf index must be >= 1")
    x = Fraction(1)
    for bit in bin(n)[3:]:
        if bit == "1":
            x = x + 1
        else:
            x = x / (x + 1)
    return x


def calkin_wilf_index(q: Fraction) -> int:
    """Inverse of calkin_wilf on positive rationals."""
    q = Fraction(q)
    if q <= 0:
        raise PreconditionError("Calkin-Wilf enumerates positive rationals")
    p, r = q.numerator, q.denominator
    bits = []
    while not (p == 1 and r == 1):
        if p > r:
            bits.append("1")
            p -= r
        else:
            bits.append("0")
            r -= p
    return int("1" + "".join(reversed(bits)), 2)


def encode_nonzero(value: Fraction) -> int:
    value = Fraction(value)
    if value == 0:
        raise PreconditionError("zero has no nonzero-rational code")
    n = calkin_wilf_index(abs(value))
    return 2 * (n - 1) + (1 if value < 0 else 0)


def decode_nonzero(code: int) -> Fraction:
    if code < 0:
        raise PreconditionError("codes are nonnegative")
    n = code // 2 + 1
    q = calkin_wilf(n)
    return -q if code % 2 else q


# -- Cantor pairing ---------------------------------------------------------------


def pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def unpair(m: int) -> Tuple[int, int]:
    w = (math.isqrt(8 * m + 1) - 1) // 2
    b = m - w * (w + 1) // 2
    return w - b, b


def _encode_tuple(codes) -> int:
    codes = list(codes)
    acc = codes[-1]
    for c in reversed(codes[:-1]):
        acc = pair(c, acc)
    return acc


def _decode_tuple(code: int, count: int) -> list:
    out = []
    for _ in range(count - 1):
        a, code = unpair(code)
        out.append(a)
    out.append(code)
    return out


# -- the enumeration ----------------------------------------------------------------


def enumerate_dense(l: int) -> FiniteSeq:
    """y_l for l >= 1; deterministic, bijective, unilateral."""
    if l < 1:
        raise PreconditionError("enumeration starts at l = 1")
    if l == 1:
        return FiniteSeq.zero(Domain.UNILATERAL)
    support_code, value_code = unpair(l - 2)
    mask = support_code + 1
    support = [k for k in range(mask.bit_length()) if mask >> k & 1]
    codes = _decode_tuple(value_code, len(support))
    return FiniteSeq({k: decode_nonzero(c) for k, c in zip(support, codes)})


def dense_index(x: FiniteSeq) -> int:
    """Inverse of enumerate_dense: the unique l with y_l == x."""
    if x.domain is not Domain.UNILATERAL:
        raise SchemaMismatchError("the enumeration covers unilateral vectors")
    if x.is_zero():
        return 1
    mask = 0
    codes = []
    for k, v in x.items():
        mask |= 1 << k
        codes.append(encode_nonzero(v))
    return pair(mask - 1, _encode_tuple(codes)) + 2
