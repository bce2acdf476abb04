"""Disjoint integer sets of positive lower density with pairwise separation.

The family A(l, nu), l >= 1, nu >= 1, satisfies exactly:

* n in A(l, nu) implies n >= nu;
* n, m in A(l, nu), n != m implies |n - m| >= 2 nu;
* n in A(l, nu), m in A(l', nu'), (l, nu) != (l', nu') implies
  |n - m| >= nu + nu';
* the sets are pairwise disjoint and each has positive lower density.

Scheme ("blocks", version 1).  Pairs (l, nu) get a code s via square-shell
pairing.  The integers are partitioned into dyadic blocks [2^r, 2^(r+1));
inside each block, codes 0, 1, 2, ... greedily claim consecutive segments
(a code is active once its demanded width fits the remaining budget, at
most three quarters of the block).  A set places an arithmetic progression
of dyadic step sigma = 2^ceil(log2(2 nu)) inside its segment, one sigma
away from both segment ends.  Separation then follows from the margins
(every point is >= sigma >= nu from its segment boundary and segments are
disjoint intervals), and the eventual proportional segment widths give a
positive lower density.

Membership is O(log n): locate the block, replay the greedy layout over at
most 2r codes, and test one congruence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Tuple

from .errors import PreconditionError, SchemaMismatchError

SCHEME_NAME = "blocks-v1"

_FIRST_BLOCK = 4          # blocks start at [16, 32)
_BUDGET_NUM = 3           # usable fraction of a block: 3/4
_BUDGET_SHIFT = 2
_PROP_SHIFT = 8           # proportional demand: sigma * 2^(r - shell - 8)


def shell_pair(a: int, b: int) -> int:
    """Square-shell pairing of Z+ x Z+ (keeps small pairs at small codes)."""
    m = max(a, b)
    if b == m:
        return m * m + a
    return m * m + 2 * m - b


def shell_unpair(s: int) -> Tuple[int, int]:
    m = math.isqrt(s)
    k = s - m * m
    if k <= m:
        return k, m
    return m, 2 * m - k


def pair_code(l: int, nu: int) -> int:
    if l < 1 or nu < 1:
        raise PreconditionError("density sets need l >= 1 and nu >= 1")
    return shell_pair(l - 1, nu - 1)


def code_pair(s: int) -> Tuple[int, int]:
    a, b = shell_unpair(s)
    return a + 1, b + 1


def _sigma(nu: int) -> int:
    """Dyadic progression step >= 2 nu."""
    return 1 << (2 * nu - 1).bit_length()


def _demand(r: int, s: int) -> int:
    nu = code_pair(s)[1]
    sigma = _sigma(nu)
    shell = math.isqrt(s)
    prop = (sigma << r) >> (shell + _PROP_SHIFT)
    return max(3 * sigma, prop)


def _usable(r: int) -> int:
    return (_BUDGET_NUM << r) >> _BUDGET_SHIFT


def _segments(r: int) -> Iterator[Tuple[int, int, int, int]]:
    """Greedy layout of block r: yields (code, segment_start, width, sigma)."""
    base = 1 << r
    budget = _usable(r)
    cum = 0
    for s in range(0, 2 * r + 1):
        d = _demand(r, s)
        if cum + d > budget:
            break
        nu = code_pair(s)[1]
        yield s, base + cum, d, _sigma(nu)
        cum += d


@dataclass(frozen=True)
class DensitySetFamily:
    """View of the fixed scheme; all methods are pure and deterministic."""

    scheme: str = SCHEME_NAME

    def __post_init__(self):
        if self.scheme != SCHEME_NAME:
            raise SchemaMismatchError(f"unknown density scheme {self.scheme!r}")

    def member(self, n: int, l: int, nu: int) -> bool:
        if n < (1 << _FIRST_BLOCK):
            return False
        target = pair_code(l, nu)
        r = n.bit_length() - 1
        for s, start, width, sigma in _segments(r):
            if s != target:
                continue
            offset = n - (start + sigma)
            last = start + width - sigma
            return 0 <= offset and n <= last and offset % sigma == 0
        return False

    def elements(self, l: int, nu: int, lo: int, hi: int) -> List[int]:
        """All members of A(l, nu) in [lo, hi], ascending."""
        target = pair_code(l, nu)
        out: List[int] = []
        if hi < (1 << _FIRST_BLOCK):
            return out
        for r in range(_FIRST_BLOCK, hi.bit_length()):
            for s, start, width, sigma in _segments(r):
                if s != target:
                    continue
                p = start + sigma
                while p <= start + width - sigma:
                    if lo <= p <= hi:
                        out.append(p)
                    p += sigma
        return out

    def declared_delta(self, l: int, nu: int) -> Fraction:
        """Declared positive lower-density bound.

        Once the proportional demand dominates (r large), a block [2^r,
        2^(r+1)) holds about 2^(r - shell - 8) points of the set, so the
        prefix density settles near 2^-(shell + 9); an extra factor 8
        absorbs startup blocks, floors and margins.
        """
        s = pair_code(l, nu)
        shell = math.isqrt(s)
        return Fraction(1, 1 << (shell + _PROP_SHIFT + 4))

    def empirical_report(self, l: int, nu: int, horizon: int) -> dict:
        """Prefix lower-density statistic, measured from the first element on.

        The literal minimum of |A ∩ [1, n]| / n over all n >= 1 is zero for
        any set whose first element exceeds 1, so the statistic meaningful
        for a liminf starts at min(A): report
        min over n in [min A, horizon] of |A ∩ [1, n]| / n.
        """
        pts = self.elements(l, nu, 1, horizon)
        delta = self.declared_delta(l, nu)
        if not pts:
            return {"count": 0, "first": None, "min_ratio": Fraction(0),
                    "delta": delta, "ok": False}
        worst = Fraction(1)
        # ratio minima occur just before each next element and at the horizon
        for idx, p in enumerate(pts[1:], start=1):
            worst = min(worst, Fraction(idx, p - 1))
        worst = min(worst, Fraction(len(pts), horizon))
        return {"count": len(pts), "first": pts[0], "min_ratio": worst,
                "delta": delta, "ok": worst >= delta}


def density_sets(l: int, nu: int, prefix_horizon: int,
                 scheme: str = SCHEME_NAME) -> Tuple[DensitySetFamily, dict]:
    """The scheme view plus the empirical density report for A(l, nu)."""
    fam = DensitySetFamily(scheme)
    report = fam.empirical_report(l, nu, prefix_horizon)
    report["scheme"] = scheme
    report["l"], report["nu"] = l, nu
    return fam, report
