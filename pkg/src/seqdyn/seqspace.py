"""Finite-support rational sequences and graded seminorm families.

Vectors live over a unilateral (Z+) or bilateral (Z) index set and carry
exact rational entries.  Seminorm families are presented by weight rows:
an explicit finite block plus a tail rule, so every evaluation is a finite
exact computation and every kernel/gap question is either decided from the
presentation or reported as verified only up to a horizon.

Weight rows are also reused as shift-weight sequences for operators; the
nonnegativity constraint applies only when a row is installed in a
seminorm family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Tuple

from .errors import (
    BilateralUnsupportedError,
    DomainMismatchError,
    RowUnavailableError,
    SchemaMismatchError,
    UnknownTailError,
)
from .scalars import format_rational
from .verdicts import GapWitness, Status, Verdict


class Domain(enum.Enum):
    UNILATERAL = "unilateral"
    BILATERAL = "bilateral"


class FiniteSeq:
    """Immutable finitely supported sequence of exact rationals.

    Zero entries are never stored; unilateral indices are >= 0.
    """

    __slots__ = ("domain", "_entries", "_items")

    def __init__(self, entries=(), domain: Domain = Domain.UNILATERAL):
        if isinstance(entries, Mapping):
            pairs = entries.items()
        else:
            pairs = entries
        clean = {}
        for k, v in pairs:
            k = int(k)
            v = Fraction(v)
            if v == 0:
                continue
            if domain is Domain.UNILATERAL and k < 0:
                raise SchemaMismatchError(
                    f"unilateral sequence cannot have index {k} < 0")
            clean[k] = v
        self.domain = domain
        self._items = tuple(sorted(clean.items()))
        self._entries = dict(self._items)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, domain: Domain = Domain.UNILATERAL) -> "FiniteSeq":
        return cls((), domain)

    @classmethod
    def basis(cls, k: int, domain: Domain = Domain.UNILATERAL,
              value=Fraction(1)) -> "FiniteSeq":
        return cls({k: value}, domain)

    @classmethod
    def from_list(cls, values, domain: Domain = Domain.UNILATERAL) -> "FiniteSeq":
        return cls({i: v for i, v in enumerate(values)}, domain)

    # -- access ------------------------------------------------------------

    def __getitem__(self, k: int) -> Fraction:
        return self._entries.get(k, Fraction(0))

    def items(self) -> Tuple[Tuple[int, Fraction], ...]:
        return self._items

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self._items)

    def is_zero(self) -> bool:
        return not self._items

    def min_support(self) -> Optional[int]:
        return self._items[0][0] if self._items else None

    def max_support(self) -> Optional[int]:
        return self._items[-1][0] if self._items else None

    def window(self, length: int) -> Tuple[Fraction, ...]:
        """First ``length`` coordinates (indices 0..length-1)."""
        return tuple(self[k] for k in range(length))

    # -- arithmetic ---------------------------------------------------------

    def _check_domain(self, other: "FiniteSeq") -> None:
        if self.domain is not other.domain:
            raise DomainMismatchError(
                f"cannot combine {self.domain.value} and {other.domain.value} sequences")

    def __add__(self, other: "FiniteSeq") -> "FiniteSeq":
        self._check_domain(other)
        out = dict(self._entries)
        for k, v in other._items:
            out[k] = out.get(k, Fraction(0)) + v
        return FiniteSeq(out, self.domain)

    def __sub__(self, other: "FiniteSeq") -> "FiniteSeq":
        return self + other.scale(Fraction(-1))

    def __neg__(self) -> "FiniteSeq":
        return self.scale(Fraction(-1))

    def scale(self, c) -> "FiniteSeq":
        c = Fraction(c)
        if c == 0:
            return FiniteSeq.zero(self.domain)
        return FiniteSeq({k: c * v for k, v in self._items}, self.domain)

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteSeq)
                and self.domain is other.domain
                and self._items == other._items)

    def __hash__(self) -> int:
        return hash((self.domain, self._items))

    def __repr__(self) -> str:
        body = " ".join(f"{k}:{format_rational(v)}" for k, v in self._items)
        return f"<seq {self.domain.value} {body or '0'}>"


class TailKind(enum.Enum):
    ZERO = "zero"
    CONSTANT = "const"
    AFFINE = "affine"
    PERIODIC = "periodic"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TailRule:
    """Value rule on a half line, as a function of the offset from the tail start.

    AFFINE evaluates slope*offset + intercept at offset = distance from the
    tail start (so validation only needs slope and intercept).  PERIODIC
    cycles through ``pattern`` by offset.  UNKNOWN promises nothing: any
    query into its region raises, so downstream verdicts degrade honestly
    instead of silently truncating.
    """

    kind: TailKind
    value: Fraction = Fraction(0)
    slope: Fraction = Fraction(0)
    intercept: Fraction = Fraction(0)
    pattern: Tuple[Fraction, ...] = ()

    @staticmethod
    def zero() -> "TailRule":
        return TailRule(TailKind.ZERO)

    @staticmethod
    def constant(c) -> "TailRule":
        c = Fraction(c)
        if c == 0:
            return TailRule.zero()
        return TailRule(TailKind.CONSTANT, value=c)

    @staticmethod
    def affine(slope, intercept) -> "TailRule":
        slope = Fraction(slope)
        intercept = Fraction(intercept)
        if slope == 0:
            return TailRule.constant(intercept)
        return TailRule(TailKind.AFFINE, slope=slope, intercept=intercept)

    @staticmethod
    def periodic(pattern) -> "TailRule":
        pattern = tuple(Fraction(v) for v in pattern)
        if not pattern:
            raise SchemaMismatchError("periodic tail needs a nonempty pattern")
        if all(v == 0 for v in pattern):
            return TailRule.zero()
        return TailRule(TailKind.PERIODIC, pattern=pattern)

    @staticmethod
    def unknown() -> "TailRule":
        return TailRule(TailKind.UNKNOWN)

    def value_at(self, offset: int):
        """Value at nonnegative offset from the tail start; None for UNKNOWN."""
        if self.kind is TailKind.ZERO:
            return Fraction(0)
        if self.kind is TailKind.CONSTANT:
            return self.value
        if self.kind is TailKind.AFFINE:
            return self.slope * offset + self.intercept
        if self.kind is TailKind.PERIODIC:
            return self.pattern[offset % len(self.pattern)]
        return None

    def is_total(self) -> bool:
        return self.kind is not TailKind.UNKNOWN

    def eventually_zero(self) -> bool:
        return self.kind is TailKind.ZERO

    def nonneg_on_halfline(self) -> bool:
        if self.kind is TailKind.ZERO:
            return True
        if self.kind is TailKind.CONSTANT:
            return self.value >= 0
        if self.kind is TailKind.AFFINE:
            return self.slope >= 0 and self.intercept >= 0
        if self.kind is TailKind.PERIODIC:
            return all(v >= 0 for v in self.pattern)
        return True  # unknown region carries no stored values

    def nowhere_zero(self) -> Optional[bool]:
        """True/False when decidable from the rule, None for UNKNOWN."""
        if self.kind is TailKind.ZERO:
            return False
        if self.kind is TailKind.CONSTANT:
            return self.value != 0
        if self.kind is TailKind.AFFINE:
            # slope != 0 here; zero occurs only at offset -intercept/slope
            off = -self.intercept / self.slope
            return not (off.denominator == 1 and off >= 0)
        if self.kind is TailKind.PERIODIC:
            return all(v != 0 for v in self.pattern)
        return None

    def describe(self) -> str:
        if self.kind is TailKind.CONSTANT:
            return f"const {format_rational(self.value)}"
        if self.kind is TailKind.AFFINE:
            return f"affine {format_rational(self.slope)} {format_rational(self.intercept)}"
        if self.kind is TailKind.PERIODIC:
            return "periodic " + ",".join(format_rational(v) for v in self.pattern)
        return self.kind.value


class WeightRow:
    """One weight row: explicit finite block plus tail rule(s).

    Unilateral rows are defined on k >= 0 with ``tail`` applying for
    k >= tail_start.  Bilateral rows additionally carry ``neg_tail`` for
    k <= neg_tail_start.  Indices between the tail regions default to 0
    unless listed explicitly.
    """

    __slots__ = ("domain", "explicit", "tail", "tail_start",
                 "neg_tail", "neg_tail_start", "_items")

    def __init__(self, explicit=(), tail: TailRule = None, tail_start: int = 0,
                 neg_tail: TailRule = None, neg_tail_start: int = None,
                 domain: Domain = Domain.UNILATERAL):
        tail = tail if tail is not None else TailRule.zero()
        if isinstance(explicit, Mapping):
            pairs = explicit.items()
        else:
            pairs = explicit
        entries = {}
        for k, v in pairs:
            entries[int(k)] = Fraction(v)
        self.domain = domain
        self.explicit = entries
        self._items = tuple(sorted(entries.items()))
        self.tail = tail
        self.tail_start = int(tail_start)
        if domain is Domain.BILATERAL:
            if neg_tail is None:
                raise SchemaMismatchError("bilateral row needs a neg tail rule")
            self.neg_tail = neg_tail
            self.neg_tail_start = int(
                neg_tail_start if neg_tail_start is not None else self.tail_start - 1)
            if self.neg_tail_start >= self.tail_start:
                raise SchemaMismatchError("neg tail must end before the tail starts")
            for k in entries:
                if not (self.neg_tail_start < k < self.tail_start):
                    raise SchemaMismatchError(
                        f"explicit weight at {k} overlaps a tail region")
        else:
            if neg_tail is not None:
                raise SchemaMismatchError("unilateral row cannot have a neg tail")
            self.neg_tail = None
            self.neg_tail_start = None
            for k in entries:
                if k < 0:
                    raise SchemaMismatchError("unilateral row has index < 0")
                if k >= self.tail_start:
                    raise SchemaMismatchError(
                        f"explicit weight at {k} overlaps the tail region")

    def weight(self, k: int) -> Fraction:
        """Exact weight at index k; raises UnknownTailError in UNKNOWN regions."""
        if k in self.explicit:
            return self.explicit[k]
        if self.domain is Domain.UNILATERAL and k < 0:
            raise SchemaMismatchError("negative index on a unilateral row")
        if k >= self.tail_start:
            v = self.tail.value_at(k - self.tail_start)
            if v is None:
                raise UnknownTailError(
                    f"weight at index {k} is beyond the presented block")
            return v
        if self.domain is Domain.BILATERAL and k <= self.neg_tail_start:
            v = self.neg_tail.value_at(self.neg_tail_start - k)
            if v is None:
                raise UnknownTailError(
                    f"weight at index {k} is beyond the presented block")
            return v
        return Fraction(0)

    def is_total(self) -> bool:
        if not self.tail.is_total():
            return False
        if self.domain is Domain.BILATERAL and not self.neg_tail.is_total():
            return False
        return True

    def validate_nonnegative(self) -> None:
        for k, v in self._items:
            if v < 0:
                raise SchemaMismatchError(f"negative weight {v} at index {k}")
        if not self.tail.nonneg_on_halfline():
            raise SchemaMismatchError("tail rule takes negative values")
        if self.domain is Domain.BILATERAL and not self.neg_tail.nonneg_on_halfline():
            raise SchemaMismatchError("neg tail rule takes negative values")

    def nonzero_weight_count(self) -> Optional[int]:
        """Cardinality of {k : weight(k) != 0} when finite, else None.

        Raises UnknownTailError when an UNKNOWN tail makes it undecidable.
        """
        if not self.is_total():
            raise UnknownTailError("cannot count nonzero weights past an "
                                   "unpresented tail")
        count = sum(1 for _, v in self._items if v != 0)
        for rule in self._tails():
            if rule.kind is TailKind.ZERO:
                continue
            if rule.kind is TailKind.CONSTANT:
                return None  # cofinitely many nonzero weights
            if rule.kind is TailKind.AFFINE:
                return None
            if rule.kind is TailKind.PERIODIC:
                if any(v != 0 for v in rule.pattern):
                    return None
        return count

    def all_weights_nonzero(self, probe_to: int = 0) -> Optional[bool]:
        """Decide whether every index in the domain carries a nonzero weight.

        Returns None when an UNKNOWN tail prevents a decision.
        """
        for k, v in self._items:
            if v == 0:
                return False
        lo = self.neg_tail_start + 1 if self.domain is Domain.BILATERAL else 0
        for k in range(lo, self.tail_start):
            if k not in self.explicit:
                return False  # implicit zero between the tails
        for rule in self._tails():
            nz = rule.nowhere_zero()
            if nz is None:
                return None
            if not nz:
                return False
        return True

    def _tails(self):
        yield self.tail
        if self.domain is Domain.BILATERAL:
            yield self.neg_tail

    def describe(self) -> str:
        body = " ".join(f"{k}:{format_rational(v)}" for k, v in self._items)
        parts = [body] if body else []
        parts.append(f"tail {self.tail.describe()} @ {self.tail_start}")
        if self.domain is Domain.BILATERAL:
            parts.append(f"neg {self.neg_tail.describe()} @ {self.neg_tail_start}")
        return "; ".join(parts)


@dataclass(frozen=True)
class RowGenerator:
    """Rule producing weight row j for every j beyond the explicit list.

    ``uniform_tail`` is a proof token: when set, every generated row is
    promised to carry a tail of that kind, which lets the gap criterion
    decide all rows at once instead of sampling.
    """

    name: str
    fn: Callable[[int], WeightRow]
    uniform_tail: Optional[TailKind] = None

    def row(self, j: int) -> WeightRow:
        return self.fn(j)


class SeminormKind(enum.Enum):
    WEIGHTED_SUP = "weighted_sup"
    WEIGHTED_L1 = "weighted_l1"


class GradedSeminormFamily:
    """Increasing family of weighted seminorms p_j given by weight rows.

    Both kinds are monotone-absolute: |x_k| <= |y_k| for all k implies
    p_j(x) <= p_j(y), which several constructions rely on.
    """

    def __init__(self, kind: SeminormKind, rows: Iterable[WeightRow],
                 generator: RowGenerator = None,
                 domain: Domain = Domain.UNILATERAL,
                 finite_dense: bool = True,
                 validate: bool = True,
                 name: str = ""):
        self.kind = kind
        self.rows = list(rows)
        self.generator = generator
        self.domain = domain
        self.finite_dense = bool(finite_dense)
        self.name = name
        for row in self.rows:
            if row.domain is not domain:
                raise SchemaMismatchError("row domain differs from family domain")
            row.validate_nonnegative()
        if validate:
            self._validate_monotone()

    def _validate_monotone(self, extra_rows: int = 2, probe: int = 64) -> None:
        """Check a_{j,k} <= a_{j+1,k} pointwise on a finite probe window.

        Tail regions with total rules are compared on the probe as well;
        UNKNOWN regions are skipped (nothing is stored there).
        """
        seq = list(self.rows)
        if self.generator is not None:
            base = len(seq)
            seq += [self.generator.row(base + t) for t in range(extra_rows)]
        for lower, upper in zip(seq, seq[1:]):
            hi = max(lower.tail_start, upper.tail_start,
                     max((k for k in lower.explicit), default=0),
                     max((k for k in upper.explicit), default=0)) + probe
            lo = 0
            if self.domain is Domain.BILATERAL:
                lo = min(lower.neg_tail_start, upper.neg_tail_start,
                         min((k for k in lower.explicit), default=0),
                         min((k for k in upper.explicit), default=0)) - probe
            for k in range(lo, hi + 1):
                try:
                    a, b = lower.weight(k), upper.weight(k)
                except UnknownTailError:
                    continue
                if a > b:
                    raise SchemaMismatchError(
                        f"rows not nondecreasing at index {k}: "
                        f"{format_rational(a)} > {format_rational(b)}")

    # -- row access ----------------------------------------------------------

    def row(self, j: int) -> WeightRow:
        if j < 0:
            raise RowUnavailableError(j)
        if j < len(self.rows):
            return self.rows[j]
        if self.generator is not None:
            return self.generator.row(j)
        raise RowUnavailableError(j)

    def explicit_row_count(self) -> int:
        return len(self.rows)

    # -- evaluation ----------------------------------------------------------

    def seminorm(self, j: int, x: FiniteSeq) -> Fraction:
        """Exact p_j(x): weighted sup or weighted l1 over the support of x."""
        if x.domain is not self.domain:
            raise DomainMismatchError("vector domain differs from family domain")
        row = self.row(j)
        if self.kind is SeminormKind.WEIGHTED_SUP:
            best = Fraction(0)
            for k, v in x.items():
                w = row.weight(k)
                term = abs(v) * w
                if term > best:
                    best = term
            return best
        total = Fraction(0)
        for k, v in x.items():
            total += abs(v) * row.weight(k)
        return total

    def in_kernel(self, j: int, x: FiniteSeq) -> bool:
        """Exact kernel membership: p_j(x) == 0, no tolerance.

        When the row has an UNKNOWN tail this still answers False if some
        presented weight already contributes, and raises only when the
        answer genuinely depends on unpresented weights.
        """
        if x.domain is not self.domain:
            raise DomainMismatchError("vector domain differs from family domain")
        row = self.row(j)
        pending = False
        for k, v in x.items():
            try:
                if row.weight(k) != 0:
                    return False
            except UnknownTailError:
                pending = True
        if pending:
            raise UnknownTailError(
                "kernel membership depends on weights beyond the presented block")
        return True

    def kernel_finite_codim(self, j: int) -> Tuple[bool, Optional[int]]:
        """Whether ker p_j has finite codimension, with the codimension.

        The codimension equals the number of indices with nonzero weight,
        decided from the tail rule.
        """
        count = self.row(j).nonzero_weight_count()
        if count is None:
            return False, None
        return True, count

    # -- gap structure ---------------------------------------------------------

    def gap_structure(self, j: int, min_len: int, horizon: int) -> Verdict:
        """Does {k >= 0 : a_{j,k} = 0} contain an interval of length >= min_len?

        Decided exactly when the row is fully presented (HOLDS / REFUTED,
        with an exhaustive witness when the tail itself supplies the gap);
        degrades to VERIFIED_UP_TO(horizon) when the tail is UNKNOWN.
        Defined only on the unilateral domain.
        """
        if self.domain is not Domain.UNILATERAL:
            raise BilateralUnsupportedError(
                "gap structure is defined for unilateral rows only")
        if min_len < 1:
            raise PreconditionFailure("min_len must be >= 1")
        if horizon < min_len:
            raise PreconditionFailure("horizon must be >= min_len")
        row = self.row(j)
        profile = zero_set_profile(row, horizon)

        if profile.infinite_from is not None:
            v = Verdict(Status.HOLDS)
            v.add_witness("gap", GapWitness(j, profile.infinite_from, None,
                                            exhaustive=True))
            return v

        if profile.cyclic_run is not None:
            run_len, start = profile.cyclic_run
            if run_len >= min_len:
                v = Verdict(Status.HOLDS)
                v.add_witness("gap", GapWitness(j, start, run_len, exhaustive=True))
                v.notes.append(
                    f"periodic tail repeats a zero-run of length {run_len}")
                return v

        best = profile.longest_run()
        if row.is_total():
            # zero set fully determined: finite, or bounded-run periodic
            if best is not None and best[1] >= min_len:
                v = Verdict(Status.HOLDS)
                v.add_witness("gap", GapWitness(j, best[0], best[1]))
                return v
            have = 0 if best is None else best[1]
            return Verdict(Status.REFUTED,
                           refutation_detail=(
                               f"row {j}: longest zero-interval has length "
                               f"{have} < {min_len}, and the tail rule adds no "
                               f"longer one"))

        v = Verdict(Status.VERIFIED_UP_TO, horizon=horizon)
        if best is not None and best[1] >= min_len:
            v.satisfied = True
            v.add_witness("gap", GapWitness(j, best[0], best[1]))
        else:
            v.satisfied = False
            if best is not None:
                v.add_witness("longest_gap", GapWitness(j, best[0], best[1]))
        v.notes.append(f"row {j} presented explicitly up to "
                       f"{row.tail_start - 1}; tail unknown")
        return v


class PreconditionFailure(SchemaMismatchError):
    pass


@dataclass
class ZeroSetProfile:
    """Zero runs of one unilateral weight row.

    runs: maximal zero-intervals found on [0, scanned_to];
    infinite_from: start of a proved infinite zero tail (or None);
    cyclic_run: (length, concrete start) of the longest zero-run the
    periodic tail repeats forever (or None);
    bounded: True when the full zero set is provably contained in
    [0, scanned_to] plus the recorded cyclic structure.
    """

    runs: list
    scanned_to: int
    infinite_from: Optional[int]
    cyclic_run: Optional[Tuple[int, int]]
    bounded: bool

    def longest_run(self) -> Optional[Tuple[int, int]]:
        best = None
        for start, length in self.runs:
            if best is None or length > best[1]:
                best = (start, length)
        return best


def zero_set_profile(row: WeightRow, horizon: int) -> ZeroSetProfile:
    """Analyze the unilateral zero set of a weight row up to ``horizon``.

    The scan is pointwise on a window that covers the explicit block plus
    enough of the tail to account for runs crossing into it; tail behavior
    beyond the window is summarized structurally.
    """
    if row.domain is not Domain.UNILATERAL:
        raise BilateralUnsupportedError("zero-set profiles are unilateral")
    tail = row.tail
    period = len(tail.pattern) if tail.kind is TailKind.PERIODIC else 1
    if tail.is_total():
        # the explicit block is finite and presented: scan all of it (plus
        # two tail periods for runs crossing the boundary) so that exact
        # verdicts never depend on the horizon
        scan_end = max(row.tail_start + 2 * period + 2, 2)
    else:
        scan_end = min(horizon, row.tail_start - 1)

    runs = []
    infinite_from = None
    start = None
    k = 0
    while k <= scan_end:
        w = row.weight(k)
        if w == 0:
            if start is None:
                start = k
        else:
            if start is not None:
                runs.append((start, k - start))
                start = None
        k += 1

    cyclic_run = None
    bounded = True
    if tail.kind is TailKind.ZERO:
        t = row.tail_start
        while t - 1 >= 0 and row.weight(t - 1) == 0:
            t -= 1
        infinite_from = t
        runs = [r for r in runs if r[0] < infinite_from]
        start = None
    elif tail.kind is TailKind.PERIODIC:
        pat = tail.pattern
        doubled = pat + pat
        best_len, best_off = 0, None
        cur = None
        for off, v in enumerate(doubled):
            if v == 0:
                if cur is None:
                    cur = off
                length = min(off - cur + 1, len(pat))
                if length > best_len:
                    best_len, best_off = length, cur % len(pat)
            else:
                cur = None
        if best_len > 0:
            cyclic_run = (best_len, row.tail_start + best_off)
    elif tail.kind is TailKind.UNKNOWN:
        bounded = False

    if start is not None and infinite_from is None:
        # run still open at the scan end
        if bounded and scan_end >= horizon:
            bounded = False  # truncated by the horizon, not by structure
        runs.append((start, scan_end - start + 1))

    return ZeroSetProfile(runs=runs, scanned_to=scan_end,
                          infinite_from=infinite_from,
                          cyclic_run=cyclic_run, bounded=bounded)


# -- preset families ----------------------------------------------------------


def omega_family() -> GradedSeminormFamily:
    """The product-topology grading: p_j(x) = max{|x_k| : 0 <= k <= j}."""

    def make_row(j: int) -> WeightRow:
        return WeightRow({k: 1 for k in range(j + 1)},
                         tail=TailRule.zero(), tail_start=j + 1)

    gen = RowGenerator("window", make_row, uniform_tail=TailKind.ZERO)
    return GradedSeminormFamily(SeminormKind.WEIGHTED_SUP, [make_row(0)],
                                generator=gen, name="omega")


def constant_norm_family(value=1, kind: SeminormKind = SeminormKind.WEIGHTED_L1,
                         rows: int = 1) -> GradedSeminormFamily:
    """All rows constant ``value`` from index 0: the family carries a norm."""

    def make_row(j: int) -> WeightRow:
        return WeightRow({}, tail=TailRule.constant(value), tail_start=0)

    gen = RowGenerator("ones", make_row, uniform_tail=TailKind.CONSTANT)
    return GradedSeminormFamily(kind, [make_row(j) for j in range(rows)],
                                generator=gen, name="constant_norm")


def factorial_gap_zero_set(j: int, horizon: int) -> list:
    """Indices k <= horizon with m! <= k <= m! + m for some m >= j."""
    zeros = []
    m = max(j, 0)
    f = math.factorial(m) if m > 0 else 1
    while True:
        f = math.factorial(m)
        if f > horizon:
            break
        for k in range(f, min(f + m, horizon) + 1):
            zeros.append(k)
        m += 1
    return sorted(set(zeros))


def factorial_gap_family(explicit_rows: int = 6, horizon: int = 10_000,
                         kind: SeminormKind = SeminormKind.WEIGHTED_SUP
                         ) -> GradedSeminormFamily:
    """Rows vanishing exactly on factorial blocks [m!, m!+m], m >= j.

    Each row is presented explicitly up to ``horizon`` with an unknown
    tail, so gap verdicts on this family are VERIFIED_UP_TO by design.
    """

    def make_row(j: int) -> WeightRow:
        zeros = set(factorial_gap_zero_set(j, horizon))
        weights = {k: 1 for k in range(horizon + 1) if k not in zeros}
        return WeightRow(weights, tail=TailRule.unknown(), tail_start=horizon + 1)

    gen = RowGenerator("factorial_gaps", make_row, uniform_tail=TailKind.UNKNOWN)
    return GradedSeminormFamily(kind, [make_row(j) for j in range(explicit_rows)],
                                generator=gen, name="factorial_gaps")


def bilateral_summable_family(value=1) -> GradedSeminormFamily:
    """Bilateral grading p_n(x) = sum_{k >= -n} |x_k| (weight ``value``)."""

    def make_row(n: int) -> WeightRow:
        return WeightRow({}, tail=TailRule.constant(value), tail_start=-n,
                         neg_tail=TailRule.zero(), neg_tail_start=-n - 1,
                         domain=Domain.BILATERAL)

    gen = RowGenerator("halfline", make_row, uniform_tail=TailKind.CONSTANT)
    return GradedSeminormFamily(SeminormKind.WEIGHTED_L1, [make_row(0)],
                                generator=gen, domain=Domain.BILATERAL,
                                name="bilateral_summable")
