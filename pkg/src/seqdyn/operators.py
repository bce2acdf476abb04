"""Column-finite operators on sequence spaces.

An operator is stored by rows: each row is a finite-support sequence, so
application, composition and windows are finite exact computations.  The
infinite part of an operator is presented by a row rule with an affine
band envelope (support of row i inside [lo_slope*i + lo_int, hi_slope*i +
hi_int]); anything else must be given as an explicit block, and downstream
verdicts then degrade to horizon-bounded ones.

Presets additionally carry two proof tokens derived from their
construction: an affine support profile (c_i = c0 + r*i for every row, the
leading entry provably nonzero) and a row-translation certificate (rows
repeat under shifting beyond a threshold).  Criteria use these to upgrade
searches into exact verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import (
    DomainMismatchError,
    NonbandedComposeError,
    PreconditionError,
    RecursionEscapeError,
    RowUnavailableError,
    SchemaMismatchError,
    UnboundedResultError,
    ZeroWeightError,
)
from .seqspace import Domain, FiniteSeq, TailKind, TailRule, WeightRow


@dataclass(frozen=True)
class BandEnvelope:
    """Affine bounds on row supports: supp(row i) ⊆ [lo(i), hi(i)].

    Slopes must be >= 1 so that both bounds are strictly increasing, which
    keeps full application finitely supported and makes envelopes compose.
    """

    lo_slope: int
    lo_intercept: int
    hi_slope: int
    hi_intercept: int

    def __post_init__(self):
        if self.lo_slope < 1 or self.hi_slope < 1:
            raise SchemaMismatchError("band envelope slopes must be >= 1")

    def lo(self, i: int) -> int:
        return self.lo_slope * i + self.lo_intercept

    def hi(self, i: int) -> int:
        return self.hi_slope * i + self.hi_intercept

    def compose(self, inner: "BandEnvelope") -> "BandEnvelope":
        # supp(row_TS(i)) ⊆ union of inner bands over the outer band
        return BandEnvelope(
            inner.lo_slope * self.lo_slope,
            inner.lo_slope * self.lo_intercept + inner.lo_intercept,
            inner.hi_slope * self.hi_slope,
            inner.hi_slope * self.hi_intercept + inner.hi_intercept,
        )


@dataclass(frozen=True)
class TranslationCert:
    """row(i + period) equals row(i) shifted by period, for all i >= from_row
    (and, bilaterally, for all i <= below_row)."""

    period: int
    from_row: int
    below_row: Optional[int] = None


@dataclass(frozen=True)
class RowRule:
    fn: Callable[[int], FiniteSeq]
    envelope: BandEnvelope


class ColumnFiniteOperator:
    """Operator given by finite-support rows (a_{i,j})_j.

    Rows come from an explicit block, a banded rule, or both (explicit
    entries override the rule at their indices).  Instances are immutable;
    the row cache and support memo are only ever appended to, so sharing
    across threads is safe.
    """

    def __init__(self, domain: Domain = Domain.UNILATERAL,
                 explicit_rows: Dict[int, FiniteSeq] = None,
                 rule: RowRule = None,
                 support_profile: Optional[Tuple[int, int]] = None,
                 translation: Optional[TranslationCert] = None,
                 name: str = ""):
        self.domain = domain
        self.explicit_rows = dict(explicit_rows or {})
        for i, row in self.explicit_rows.items():
            if row.domain is not domain:
                raise SchemaMismatchError(f"row {i} domain differs from operator domain")
            if domain is Domain.UNILATERAL and i < 0:
                raise SchemaMismatchError("unilateral operator cannot have row < 0")
        self.rule = rule
        self.support_profile = support_profile  # (r, c0): c_i = c0 + r*i
        self.translation = translation
        self.name = name
        self._row_cache: Dict[int, FiniteSeq] = {}
        self._support_memo: Dict[Tuple[int, int], int] = {}

    # -- rows ---------------------------------------------------------------

    def row(self, i: int) -> FiniteSeq:
        if i in self.explicit_rows:
            return self.explicit_rows[i]
        if i in self._row_cache:
            return self._row_cache[i]
        if self.domain is Domain.UNILATERAL and i < 0:
            raise RowUnavailableError(i)
        if self.rule is None:
            raise RowUnavailableError(i)
        row = self.rule.fn(i)
        if row.domain is not self.domain:
            raise SchemaMismatchError("rule produced a row in the wrong domain")
        env = self.rule.envelope
        if not row.is_zero():
            left_bound = env.lo(i)
            if self.domain is Domain.UNILATERAL:
                left_bound = max(0, left_bound)
            if row.min_support() < left_bound:
                raise SchemaMismatchError(f"row {i} escapes its band on the left")
            if row.max_support() > env.hi(i):
                raise SchemaMismatchError(f"row {i} escapes its band on the right")
        self._row_cache[i] = row
        return row

    def has_rule(self) -> bool:
        return self.rule is not None

    def support_index(self, i: int) -> int:
        """Smallest c with a_{i,j} = 0 for all j >= c (0 for a zero row)."""
        row = self.row(i)
        hi = row.max_support()
        return 0 if hi is None else hi + 1

    # -- application ----------------------------------------------------------

    def _candidate_rows(self, x: FiniteSeq) -> List[int]:
        lo_s, hi_s = x.min_support(), x.max_support()
        rows = set(self.explicit_rows)
        if self.rule is not None and not x.is_zero():
            env = self.rule.envelope
            # rows whose band meets [lo_s, hi_s]
            i_hi = (hi_s - env.lo_intercept) // env.lo_slope
            i_lo = -((env.hi_intercept - lo_s) // env.hi_slope)
            if self.domain is Domain.UNILATERAL:
                i_lo = max(0, i_lo)
            rows.update(range(i_lo, i_hi + 1))
        return sorted(rows)

    def apply(self, x: FiniteSeq) -> FiniteSeq:
        """Exact T x as a finite-support sequence.

        Raises UnboundedResultError when the presentation cannot bound the
        set of rows meeting x's support; request a window in that case.
        """
        if x.domain is not self.domain:
            raise DomainMismatchError("vector domain differs from operator domain")
        if x.is_zero():
            return FiniteSeq.zero(self.domain)
        if self.rule is None and self.domain is Domain.BILATERAL and not self.explicit_rows:
            raise UnboundedResultError("no rows presented")
        try:
            candidates = self._candidate_rows(x)
        except SchemaMismatchError as exc:  # defensive; envelopes validate slopes
            raise UnboundedResultError(str(exc))
        out = {}
        for i in candidates:
            v = self._row_dot(i, x)
            if v != 0:
                out[i] = v
        return FiniteSeq(out, self.domain)

    def _row_dot(self, i: int, x: FiniteSeq) -> Fraction:
        total = Fraction(0)
        row = self.row(i)
        # iterate over the smaller support
        if len(row.items()) <= len(x.items()):
            for j, a in row.items():
                xv = x[j]
                if xv != 0:
                    total += a * xv
        else:
            for j, xv in x.items():
                a = row[j]
                if a != 0:
                    total += a * xv
        return total

    def apply_window(self, x: FiniteSeq, length: int) -> Tuple[Fraction, ...]:
        """Exact first ``length`` coordinates of T x (rows 0..length-1)."""
        if length < 1:
            raise PreconditionError("window length must be >= 1")
        if x.domain is not self.domain:
            raise DomainMismatchError("vector domain differs from operator domain")
        return tuple(self._row_dot(i, x) for i in range(length))

    def apply_rows(self, x: FiniteSeq, rows: Sequence[int]) -> Dict[int, Fraction]:
        if x.domain is not self.domain:
            raise DomainMismatchError("vector domain differs from operator domain")
        return {i: self._row_dot(i, x) for i in rows}

    def __repr__(self) -> str:
        return f"<operator {self.name or 'unnamed'} on {self.domain.value}>"


# -- composition and iteration --------------------------------------------------


def compose(outer: ColumnFiniteOperator,
            inner: ColumnFiniteOperator) -> ColumnFiniteOperator:
    """Exact operator product outer∘inner, rows computed lazily.

    Needs the outer operator to be explicit-only (finite rows) or both
    operators to carry banded rules; otherwise the symbolic composition is
    not well defined and NonbandedComposeError is raised.
    """
    if outer.domain is not inner.domain:
        raise DomainMismatchError("cannot compose operators on different domains")
    domain = outer.domain

    def composed_row(i: int) -> FiniteSeq:
        acc: Dict[int, Fraction] = {}
        for m, a in outer.row(i).items():
            for j, b in inner.row(m).items():
                acc[j] = acc.get(j, Fraction(0)) + a * b
        return FiniteSeq(acc, domain)

    name = f"({outer.name or '?'})∘({inner.name or '?'})"

    if outer.rule is None:
        rows = {}
        for i in outer.explicit_rows:
            try:
                rows[i] = composed_row(i)
            except RowUnavailableError as exc:
                raise NonbandedComposeError(
                    f"inner operator lacks row {exc.index}; supply an explicit "
                    f"block up to a horizon") from None
        return ColumnFiniteOperator(domain, explicit_rows=rows, name=name)

    if inner.rule is None:
        raise NonbandedComposeError(
            "outer rule needs inner rows at unboundedly many indices; "
            "supply an explicit block up to a horizon")

    env = outer.rule.envelope.compose(inner.rule.envelope)
    profile = None
    if outer.support_profile and inner.support_profile:
        profile = _compose_profiles(outer, inner)
    translation = _compose_translation(outer, inner)
    return ColumnFiniteOperator(domain, rule=RowRule(composed_row, env),
                                support_profile=profile,
                                translation=translation, name=name)


def _compose_profiles(outer, inner) -> Optional[Tuple[int, int]]:
    """Support profile of the product when the leading entries cannot cancel.

    For single-leading-audit purposes we only combine profiles coming from
    presets, where the leading coefficient of each row is a product of
    nonzero scalars; then c_{TS,i} = c_S(c_T(i) - 1 ... ) reduces to the
    affine composition below.
    """
    r1, c1 = outer.support_profile
    r2, c2 = inner.support_profile
    if c1 < 1:
        return (0, 0) if (r1, c1) == (0, 0) else None
    # leading column of outer row i is c1 + r1*i - 1; the product's leading
    # column is the leading column of inner's row at that index
    return (r2 * r1, r2 * (c1 - 1) + c2)


def _compose_translation(outer, inner) -> Optional[TranslationCert]:
    t_out = outer.translation
    t_in = inner.translation
    if t_out is None or t_in is None:
        return None
    period = math.lcm(t_out.period, t_in.period)
    env = outer.rule.envelope
    # outer row i only touches inner rows >= lo(i); require those to translate
    need = t_in.from_row
    from_row = max(t_out.from_row, -(-(need - env.lo_intercept) // env.lo_slope))
    below = None
    if t_out.below_row is not None and t_in.below_row is not None:
        below = min(t_out.below_row,
                    (t_in.below_row - env.hi_intercept) // env.hi_slope)
    return TranslationCert(period, from_row, below)


def iterate(op: ColumnFiniteOperator, k: int) -> ColumnFiniteOperator:
    """Exact k-th power, k >= 1 (k = 1 returns the operator itself)."""
    if k < 1:
        raise PreconditionError("iterate needs k >= 1")
    out = op
    for _ in range(k - 1):
        out = compose(op, out)
    if out is not op:
        out.name = f"{op.name or '?'}^{k}"
    return out


def iterate_support(op: ColumnFiniteOperator, k: int, i: int) -> int:
    """Support index of row i of the k-th power via the one-step recursion
    c^{(k)}_i = c^{(k-1)}_{c_i - 1}, memoized by (k, i).

    The recursion is exact for operators whose leading row entries never
    cancel under composition (all presets); it is undefined through a zero
    row, where RecursionEscapeError is raised.
    """
    if k < 1:
        raise PreconditionError("iterate_support needs k >= 1")
    memo = op._support_memo
    if (k, i) in memo:
        return memo[(k, i)]
    path = []
    j = i
    steps = k
    while True:
        if (steps, j) in memo:
            value = memo[(steps, j)]
            break
        path.append((steps, j))
        try:
            c = op.support_index(j)
            zero_row = op.row(j).is_zero()
        except RowUnavailableError:
            raise RecursionEscapeError(steps, j) from None
        if steps == 1:
            value = c
            break
        if zero_row:
            # the step descends to row c-1, which a vanished row never names
            raise RecursionEscapeError(steps, j)
        j = c - 1
        steps -= 1
    for key in path:
        memo[key] = value
    return value


def closed_form_support(r: int, c0: int, k: int, i: int) -> int:
    """Affine-profile support index of the k-th power:
    sum_{n=0}^{k-1} r^n (c0 - 1) + r^k i + 1."""
    if k < 1:
        raise PreconditionError("closed form needs k >= 1")
    geom = sum(r ** n for n in range(k))
    return geom * (c0 - 1) + r ** k * i + 1


class OperatorSequence:
    """Either the iterates T, T^2, ... of one operator, or an explicit list."""

    def __init__(self, base: ColumnFiniteOperator = None,
                 members: Sequence[ColumnFiniteOperator] = None):
        if (base is None) == (members is None):
            raise SchemaMismatchError("give exactly one of base or members")
        self.base = base
        self.members = list(members) if members is not None else None
        self._powers: Dict[int, ColumnFiniteOperator] = {}

    @classmethod
    def iterates(cls, base: ColumnFiniteOperator) -> "OperatorSequence":
        return cls(base=base)

    @classmethod
    def explicit(cls, members) -> "OperatorSequence":
        return cls(members=members)

    @property
    def is_iterates(self) -> bool:
        return self.base is not None

    @property
    def domain(self) -> Domain:
        return (self.base or self.members[0]).domain

    def member(self, k: int) -> ColumnFiniteOperator:
        """T_k for k >= 1 (iterates: T^k; explicit: the k-th listed)."""
        if k < 1:
            raise PreconditionError("operator sequences are indexed from 1")
        if self.is_iterates:
            if k not in self._powers:
                prev = self._powers.get(k - 1)
                if prev is not None:
                    self._powers[k] = compose(self.base, prev)
                else:
                    self._powers[k] = iterate(self.base, k)
            return self._powers[k]
        if k > len(self.members):
            raise RowUnavailableError(k, what="operator")
        return self.members[k - 1]

    def known_horizon(self) -> Optional[int]:
        return None if self.is_iterates else len(self.members)


# -- weight handling -------------------------------------------------------------


def _weight_at(weights: WeightRow, k: int) -> Fraction:
    value = weights.weight(k)
    if value == 0:
        raise ZeroWeightError(f"weight at index {k} is zero")
    return value


def _validate_weights_nonzero(weights: WeightRow, domain: Domain,
                              lo_index: int = 0) -> None:
    """Every weight the operator can read must be provably nonzero.

    Unilateral shifts only read indices >= lo_index (1 for a backward
    shift); bilateral ones read everything.
    """
    for k, v in weights.explicit.items():
        if domain is Domain.UNILATERAL and k < lo_index:
            continue
        if v == 0:
            raise ZeroWeightError(f"weight at index {k} is zero")
    lo = weights.neg_tail_start + 1 if domain is Domain.BILATERAL else lo_index
    for k in range(lo, weights.tail_start):
        if k not in weights.explicit:
            raise ZeroWeightError(f"weight at index {k} is zero (not listed)")
    tails = [weights.tail]
    if domain is Domain.BILATERAL:
        tails.append(weights.neg_tail)
    for rule in tails:
        nz = rule.nowhere_zero()
        if nz is None:
            raise ZeroWeightError("weights beyond the presented block are unknown")
        if not nz:
            raise ZeroWeightError("weight tail rule vanishes somewhere")


def _weights_translation(weights: WeightRow, offset: int,
                         domain: Domain) -> Optional[TranslationCert]:
    """Row-translation certificate for a shift whose row i uses w_{i+offset}."""
    tail = weights.tail
    if tail.kind is TailKind.CONSTANT:
        period = 1
    elif tail.kind is TailKind.PERIODIC:
        period = len(tail.pattern)
    else:
        return None
    from_row = weights.tail_start - offset
    below = None
    if domain is Domain.BILATERAL:
        neg = weights.neg_tail
        if neg.kind is TailKind.CONSTANT:
            nperiod = 1
        elif neg.kind is TailKind.PERIODIC:
            nperiod = len(neg.pattern)
        else:
            return None
        period = math.lcm(period, nperiod)
        below = weights.neg_tail_start - offset - period
    else:
        from_row = max(0, from_row)
    return TranslationCert(period, from_row, below)


def constant_weights(value, domain: Domain = Domain.UNILATERAL) -> WeightRow:
    """w_k = value for every index in the domain."""
    if domain is Domain.BILATERAL:
        return WeightRow({}, tail=TailRule.constant(value), tail_start=0,
                         neg_tail=TailRule.constant(value), neg_tail_start=-1,
                         domain=domain)
    return WeightRow({}, tail=TailRule.constant(value), tail_start=0)


# -- presets ---------------------------------------------------------------------


def weighted_backward_shift(weights: WeightRow,
                            domain: Domain = Domain.UNILATERAL
                            ) -> ColumnFiniteOperator:
    """B_w: e_n -> w_n e_{n-1} (e_{-1} = 0), i.e. row i = w_{i+1} at column i+1."""
    _validate_weights_nonzero(weights, domain, lo_index=1)

    def make_row(i: int) -> FiniteSeq:
        return FiniteSeq({i + 1: _weight_at(weights, i + 1)}, domain)

    return ColumnFiniteOperator(
        domain,
        rule=RowRule(make_row, BandEnvelope(1, 1, 1, 1)),
        support_profile=(1, 2),
        translation=_weights_translation(weights, 1, domain),
        name="backward_shift")


def weighted_forward_shift(weights: WeightRow,
                           domain: Domain = Domain.UNILATERAL
                           ) -> ColumnFiniteOperator:
    """S_w: e_n -> w_n e_{n+1}, i.e. row i = w_{i-1} at column i-1 (row 0 empty
    on the unilateral domain)."""
    _validate_weights_nonzero(weights, domain)

    def make_row(i: int) -> FiniteSeq:
        if domain is Domain.UNILATERAL and i == 0:
            return FiniteSeq.zero(domain)
        return FiniteSeq({i - 1: _weight_at(weights, i - 1)}, domain)

    return ColumnFiniteOperator(
        domain,
        rule=RowRule(make_row, BandEnvelope(1, -1, 1, -1) if domain is Domain.BILATERAL
                     else BandEnvelope(1, -1, 1, 0)),
        translation=_weights_translation(weights, -1, domain),
        name="forward_shift")


def identity_operator(domain: Domain = Domain.UNILATERAL,
                      scale=Fraction(1)) -> ColumnFiniteOperator:
    scale = Fraction(scale)

    def make_row(i: int) -> FiniteSeq:
        return FiniteSeq({i: scale}, domain)

    profile = (1, 1) if scale != 0 else (0, 0)
    return ColumnFiniteOperator(
        domain, rule=RowRule(make_row, BandEnvelope(1, 0, 1, 0)),
        support_profile=profile,
        translation=TranslationCert(1, 0, 0 if domain is Domain.BILATERAL else None),
        name="identity" if scale == 1 else f"{scale}*identity")


def zero_operator(domain: Domain = Domain.UNILATERAL) -> ColumnFiniteOperator:
    def make_row(i: int) -> FiniteSeq:
        return FiniteSeq.zero(domain)

    return ColumnFiniteOperator(
        domain, rule=RowRule(make_row, BandEnvelope(1, 0, 1, 0)),
        support_profile=(0, 0),
        translation=TranslationCert(1, 0, 0 if domain is Domain.BILATERAL else None),
        name="zero")


def polynomial_shift_mix(poly: Sequence, alpha: Sequence = (),
                         weights: WeightRow = None,
                         domain: Domain = Domain.UNILATERAL
                         ) -> ColumnFiniteOperator:
    """P(B_w) + sum_k alpha_k S_w^k with the forward series truncated to the
    finite list alpha.

    ``poly`` lists P's coefficients from degree 0 upward.  Every row keeps
    finite support; the affine support profile c_i = i + deg(P) + 1 is
    recorded when P is non-constant (the leading entry is a product of
    nonzero weights times P's leading coefficient).
    """
    if weights is None:
        weights = constant_weights(1, domain)
    poly = [Fraction(c) for c in poly]
    while poly and poly[-1] == 0:
        poly.pop()
    alpha = [Fraction(a) for a in alpha]
    # the backward part reads w_{i+1}.., the forward part w_{i-k}.. (>= 0)
    _validate_weights_nonzero(weights, domain,
                              lo_index=0 if any(a != 0 for a in alpha) else 1)
    deg = len(poly) - 1
    if deg < 0 and not any(a != 0 for a in alpha):
        return zero_operator(domain)

    def make_row(i: int) -> FiniteSeq:
        acc: Dict[int, Fraction] = {}
        for d, coeff in enumerate(poly):
            if coeff == 0:
                continue
            # (B_w^d x)_i = w_{i+1} ... w_{i+d} x_{i+d}
            w = Fraction(1)
            for t in range(1, d + 1):
                w *= _weight_at(weights, i + t)
            acc[i + d] = acc.get(i + d, Fraction(0)) + coeff * w
        for k, a_k in enumerate(alpha, start=1):
            if a_k == 0:
                continue
            j = i - k
            if domain is Domain.UNILATERAL and j < 0:
                continue
            # (S_w^k x)_i = w_j w_{j+1} ... w_{j+k-1} x_j with j = i-k
            w = Fraction(1)
            for t in range(k):
                w *= _weight_at(weights, j + t)
            acc[j] = acc.get(j, Fraction(0)) + a_k * w
        return FiniteSeq({k: v for k, v in acc.items() if v != 0}, domain)

    lo_int = -len(alpha)
    hi_int = max(deg, 0)
    if domain is Domain.UNILATERAL:
        lo_int = min(lo_int, 0)
    profile = (1, deg + 1) if deg >= 1 else None
    translation = _weights_translation(weights, -len(alpha), domain)
    if translation is not None:
        # the row also reads weights up to i + deg
        shift = len(alpha) + hi_int
        translation = TranslationCert(
            translation.period, translation.from_row + shift,
            None if translation.below_row is None else translation.below_row - shift)
    return ColumnFiniteOperator(
        domain,
        rule=RowRule(make_row, BandEnvelope(1, lo_int, 1, hi_int)),
        support_profile=profile,
        translation=translation,
        name="poly_shift_mix")


def affine_support_operator(c0: int, r: int,
                            domain: Domain = Domain.UNILATERAL
                            ) -> ColumnFiniteOperator:
    """Synthetic operator with support index exactly c_i = c0 + r*i: row i has
    a single entry 1 at column c0 + r*i - 1."""
    if r < 1 or c0 < 1:
        raise SchemaMismatchError("affine support preset needs r >= 1 and c0 >= 1")

    def make_row(i: int) -> FiniteSeq:
        col = c0 + r * i - 1
        if domain is Domain.UNILATERAL and col < 0:
            return FiniteSeq.zero(domain)
        return FiniteSeq({col: Fraction(1)}, domain)

    return ColumnFiniteOperator(
        domain,
        rule=RowRule(make_row, BandEnvelope(r, c0 - 1, r, c0 - 1)),
        support_profile=(r, c0),
        translation=TranslationCert(1, 0, 0) if r == 1 and domain is Domain.BILATERAL
        else (TranslationCert(1, 0) if r == 1 else None),
        name=f"affine_support(c0={c0},r={r})")
