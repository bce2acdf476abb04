"""Constructive builders: vector prefixes, schedules, basic sequences.

Each builder executes a block-by-block construction at finite scale and
emits a Certificate whose assertions an independent checker re-evaluates
exactly (see certificates.py).  Blocks are solved by exact elimination
with leftmost pivots and zero free variables, so certificates are
deterministic and minimal-support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .certificates import Certificate, VerifyReport, verify_certificate
from .criteria import frequent_schedule_criterion
from .density import DensitySetFamily
from .errors import (
    MembershipFailError,
    NoWitnessError,
    PreconditionError,
    ScheduleViolationError,
    SupportExhaustedError,
    UnknownTailError,
)
from .operators import ColumnFiniteOperator, OperatorSequence, iterate_support
from .sampling import make_rng, sample_coefficients
from .seqspace import FiniteSeq, GradedSeminormFamily, omega_family
from .verdicts import Status


def _solve_block(rows: Sequence[FiniteSeq], cols: Sequence[int],
                 rhs: Sequence[Fraction]) -> Optional[Dict[int, Fraction]]:
    if not cols:
        return {} if all(v == 0 for v in rhs) else None
    matrix = [[row[c] for c in cols] for row in rows]
    sol = linalg.solve_min_support(matrix, rhs)
    if sol is None:
        return None
    return {c: v for c, v in zip(cols, sol) if v != 0}


def _block_spans(rows: Sequence[FiniteSeq], cols: Sequence[int]) -> bool:
    """Whether the columns span the full window space (so every target is
    realizable, not just the one at hand)."""
    if len(cols) < len(rows):
        return False
    matrix = [[row[c] for c in cols] for row in rows]
    return linalg.rank(matrix) == len(rows)


def _window_list(op: ColumnFiniteOperator, x: FiniteSeq, l: int) -> List[Fraction]:
    return list(op.apply_window(x, l))


# -- single-vector prefix ---------------------------------------------------------


def hc_prefix_certificate(ops: OperatorSequence, L: int, K: int = 1,
                          horizon: int = 400,
                          targets: Optional[Sequence[Sequence]] = None,
                          operator_text: Optional[str] = None) -> Certificate:
    """One vector x and times K <= n_1 < ... < n_L with the first l
    coordinates of T_{n_l} x exactly equal to the l-th target window.

    Targets default to the dense enumeration y_l.  Raises NoWitnessError(l)
    when no time within the horizon makes stage l solvable (e.g. the
    identity operator at stage 1, whose rows never reach fresh columns).
    """
    if L < 0 or K < 1:
        raise PreconditionError("need L >= 0 and K >= 1")
    cert = Certificate(kind="hc-prefix", operator_text=operator_text,
                       params={"L": str(L), "K": str(K),
                               "horizon": str(horizon)})
    x = FiniteSeq.zero(ops.domain)
    next_free = 1
    last_time = K - 1
    for l in range(1, L + 1):
        if targets is not None:
            want = tuple(Fraction(v) for v in targets[l - 1])
            cert.targets[l] = ("window", want)
        else:
            cert.targets[l] = ("dense", l)
        want = cert.target_window(l, l)
        placed = False
        for k in range(last_time + 1, horizon + 1):
            T = ops.member(k)
            rows = [T.row(i) for i in range(l)]
            contrib = _window_list(T, x, l)
            rhs = [w - c for w, c in zip(want, contrib)]
            cols = sorted({j for row in rows for j in row.support
                           if j >= next_free})
            if not _block_spans(rows, cols):
                continue
            sol = _solve_block(rows, cols, rhs)
            if sol is None:
                continue
            x = x + FiniteSeq(sol, ops.domain)
            reach = max((T.support_index(i) for i in range(l)), default=0)
            block_end = max(sol) + 1 if sol else next_free
            next_free = max(next_free, reach, block_end)
            cert.window_checks.append((1, l, k))
            last_time = k
            placed = True
            break
        if not placed:
            raise NoWitnessError(l, f"stage {l}: no time in "
                                    f"({last_time}, {horizon}] admits an "
                                    f"exact block")
    cert.vectors[1] = x
    return cert


# -- several vectors with increasing valuations ---------------------------------------


def subspace_prefix_certificates(ops: OperatorSequence, L: int, J: int,
                                 horizon: int = 600, base_grade: int = 0,
                                 seed: int = 0, samples: int = 50,
                                 space: Optional[GradedSeminormFamily] = None,
                                 operator_text: Optional[str] = None,
                                 space_text: Optional[str] = None
                                 ) -> Tuple[Certificate, VerifyReport]:
    """J vectors with strictly increasing valuations; vector j hits target l
    at its own time while every other vector's window vanishes there.

    The unit-leading combination property (any rational combination with
    alpha_{j0} = 1 reproduces vector j0's hits exactly) is checked on
    ``samples`` seeded coefficient vectors and re-checked by the verifier.
    """
    if J < 1 or L < 0:
        raise PreconditionError("need J >= 1 and L >= 0")
    if space is None:
        space = omega_family()
        space_text = space_text or "preset = omega\n"
    elif space_text is None:
        raise PreconditionError(
            "a custom space needs space_text so the certificate can embed "
            "it for independent re-verification")
    cert = Certificate(kind="subspace", operator_text=operator_text,
                       space_text=space_text, seed=seed, samples=samples,
                       params={"L": str(L), "J": str(J),
                               "horizon": str(horizon),
                               "base_grade": str(base_grade)})
    vectors: Dict[int, FiniteSeq] = {}
    grades: Dict[int, int] = {}
    next_free = 1
    for j in range(1, J + 1):
        grade = base_grade + j
        seed_index = grade + 1
        if space.seminorm(grade + 1, FiniteSeq.basis(seed_index)) == 0:
            raise PreconditionError(
                f"grade {grade + 1} does not see index {seed_index}; "
                f"choose another grading")
        vectors[j] = FiniteSeq.basis(seed_index)
        grades[j] = grade
        next_free = max(next_free, seed_index + 1)

    last_time = 0
    for l in range(1, L + 1):
        cert.targets[l] = ("dense", l)
        want = cert.target_window(l, l)
        for j in range(1, J + 1):
            placed = False
            for k in range(last_time + 1, horizon + 1):
                T = ops.member(k)
                rows = [T.row(i) for i in range(l)]
                cols = sorted({c for row in rows for c in row.support
                               if c >= next_free})
                if not _block_spans(rows, cols):
                    continue
                blocks: Dict[int, Dict[int, Fraction]] = {}
                ok = True
                for jj in range(1, J + 1):
                    contrib = _window_list(T, vectors[jj], l)
                    goal = want if jj == j else tuple(Fraction(0)
                                                      for _ in range(l))
                    rhs = [g - c for g, c in zip(goal, contrib)]
                    sol = _solve_block(rows, cols, rhs)
                    if sol is None:
                        ok = False
                        break
                    blocks[jj] = sol
                if not ok:
                    continue
                reach = max((T.support_index(i) for i in range(l)), default=0)
                for jj, sol in blocks.items():
                    vectors[jj] = vectors[jj] + FiniteSeq(sol, ops.domain)
                    if sol:
                        reach = max(reach, max(sol) + 1)
                next_free = max(next_free, reach)
                cert.window_checks.append((j, l, k))
                for jj in range(1, J + 1):
                    if jj != j:
                        cert.zero_checks.append((jj, l, k))
                last_time = k
                placed = True
                break
            if not placed:
                raise NoWitnessError(l, f"stage (j={j}, l={l}): no time in "
                                        f"({last_time}, {horizon}]")
    for j in range(1, J + 1):
        cert.vectors[j] = vectors[j]
        cert.valuations[j] = (grades[j], grades[j] + 1, grades[j] + 1)
    report = verify_certificate(cert)
    return cert, report


# -- frequent-hypercyclicity prefix -----------------------------------------------------


def fhc_prefix_certificate(ops: OperatorSequence, L: int, J: int,
                           horizon: int = 500,
                           operator_text: Optional[str] = None,
                           space_text: Optional[str] = None) -> Certificate:
    """Walk the scheduled visit sets within [1, horizon], appending to each
    vector the block [d_n, f_{n,l}) that realizes (or zeroes) the window.

    Visit times for target l and vector j come from the density set
    A(l, j + l); their pairwise separation guarantees that consecutive
    blocks never overlap, which is asserted (ScheduleViolationError
    otherwise) and recorded for re-checking.
    """
    if not ops.is_iterates:
        raise PreconditionError("the construction walks iterates of one operator")
    if L < 1 or J < 1:
        raise PreconditionError("need L >= 1 and J >= 1")
    schedule = frequent_schedule_criterion(ops, min(horizon, 64))
    if schedule.status is Status.REFUTED:
        raise PreconditionError(
            f"no block schedule exists: {schedule.refutation_detail}")
    op = ops.base
    fam = DensitySetFamily()
    events: List[Tuple[int, int, int]] = []
    for l in range(1, L + 1):
        for j in range(1, J + 1):
            for n in fam.elements(l, j + l, 1, horizon):
                events.append((n, l, j))
    events.sort()
    cert = Certificate(kind="fhc", operator_text=operator_text,
                       space_text=space_text or "preset = omega\n",
                       params={"L": str(L), "J": str(J),
                               "horizon": str(horizon),
                               "sets": "A(l, j+l)", "scheme": fam.scheme})
    for l in range(1, L + 1):
        cert.targets[l] = ("dense", l)
    if not events:
        cert.warnings.append(
            f"no visit times within [1, {horizon}]: empty certificate")
        return cert

    vectors: Dict[int, FiniteSeq] = {j: FiniteSeq.zero(ops.domain)
                                     for j in range(1, J + 1)}
    started: List[int] = []
    prev: Optional[Tuple[int, int]] = None
    for n, l, j in events:
        d_n = iterate_support(op, n, 0) - 1
        f_nl = max(iterate_support(op, n, i) for i in range(l))
        if prev is not None:
            prev_n, prev_l = prev
            prev_f = max(iterate_support(op, prev_n, i) for i in range(prev_l))
            if prev_f > d_n:
                raise ScheduleViolationError(
                    f"block [{d_n}, {f_nl}) at time {n} overlaps the "
                    f"previous block ending at {prev_f}")
            cert.schedule_checks.append((prev_n, prev_l, n))
        T = ops.member(n)
        rows = [T.row(i) for i in range(l)]
        cols = [c for c in range(d_n, f_nl)]
        if not _block_spans(rows, cols):
            raise NoWitnessError(
                l, f"time {n}: columns [{d_n}, {f_nl}) do not span the "
                   f"window space")
        want = cert.target_window(l, l)
        group = sorted(set(started) | {j})
        for jj in group:
            contrib = _window_list(T, vectors[jj], l)
            goal = want if jj == j else tuple(Fraction(0) for _ in range(l))
            rhs = [g - c for g, c in zip(goal, contrib)]
            sol = _solve_block(rows, cols, rhs)
            if sol is None:
                raise NoWitnessError(
                    l, f"time {n}: block columns [{d_n}, {f_nl}) cannot "
                       f"realize the window for vector {jj}")
            vectors[jj] = vectors[jj] + FiniteSeq(sol, ops.domain)
        if j not in started:
            started.append(j)
        cert.window_checks.append((j, l, n))
        for jj in range(1, J + 1):
            if jj != j:
                cert.zero_checks.append((jj, l, n))
        prev = (n, l)

    for j in range(1, J + 1):
        cert.vectors[j] = vectors[j]
        first = vectors[j].min_support()
        if first is not None and first >= 1:
            cert.valuations[j] = (first - 1, first, first)
    missing = [j for j in range(1, J + 1) if j not in started]
    if missing:
        cert.warnings.append(
            f"vectors {missing} received no visit time within the horizon")
    return cert


# -- basic sequences ----------------------------------------------------------------


@dataclass
class BasicSeqBundle:
    """Disjointly supported normalized vectors plus optional perturbation.

    With disjoint supports, the nesting bound holds with factor 1 for any
    monotone-absolute seminorm family, so any eps schedule (in particular
    eps = 0, K = 1) is valid; the bundle keeps the schedule it was built
    with because the coefficient bound 2K depends on it.
    """

    space: GradedSeminormFamily
    base_row: int
    vectors: List[FiniteSeq]
    eps: List[Fraction]
    kappa: Fraction
    perturbed: Optional[List[FiniteSeq]] = None
    delta: Optional[Fraction] = None
    space_text: Optional[str] = None

    def certificate(self, seed: int, samples: int) -> Certificate:
        cert = Certificate(kind="basic-seq", space_text=self.space_text,
                           seed=seed, samples=samples,
                           base_row=self.base_row, eps=list(self.eps),
                           kappa=self.kappa, delta=self.delta,
                           params={"n": str(len(self.vectors))})
        for j, vec in enumerate(self.vectors, start=1):
            cert.vectors[j] = vec
        if self.perturbed is not None:
            for j, vec in enumerate(self.perturbed, start=1):
                cert.perturbed[j] = vec
        return cert


def basic_seq_build(space: GradedSeminormFamily, n: int,
                    eps_schedule: Optional[Sequence] = None,
                    base_row: int = 0,
                    space_text: Optional[str] = None) -> BasicSeqBundle:
    """n vectors with pairwise disjoint supports, each of base seminorm
    exactly 1, supported on successive indices the base row weights.

    Raises SupportExhaustedError when the base row has only finitely many
    nonzero weights (then no such sequence exists beyond their count).
    """
    if n < 1:
        raise PreconditionError("need n >= 1")
    row = space.row(base_row)
    try:
        count = row.nonzero_weight_count()
    except UnknownTailError:
        raise SupportExhaustedError(
            "the base row is not presented beyond its explicit block, so "
            "an unbounded supply of nonzero weights cannot be proved") from None
    if count is not None:
        raise SupportExhaustedError(
            f"the base seminorm has only {count} nonzero weights (kernel of "
            f"finite codimension): no disjointly supported normalized "
            f"sequence of length {n} exists beyond them")
    eps = [Fraction(e) for e in eps_schedule] if eps_schedule else \
        [Fraction(0)] * n
    if len(eps) < n:
        eps = eps + [Fraction(0)] * (n - len(eps))
    kappa = Fraction(1)
    for e in eps:
        kappa *= (1 + e)
    vectors = []
    k = 0
    for _ in range(n):
        while row.weight(k) == 0:
            k += 1
        vectors.append(FiniteSeq.basis(k, space.domain,
                                       Fraction(1) / row.weight(k)))
        k += 1
    return BasicSeqBundle(space=space, base_row=base_row, vectors=vectors,
                          eps=eps, kappa=kappa, space_text=space_text)


def with_perturbation(bundle: BasicSeqBundle, delta) -> BasicSeqBundle:
    """Attach a perturbed family f_k = u_k + c_k e_{t_k} with the exact
    perturbation sum sum_k 2K p_k(u_k - f_k) equal to ``delta`` < 1.

    The perturbation budget is split dyadically over the vectors (the last
    vector absorbs the remainder so the sum is exact)."""
    delta = Fraction(delta)
    if not (0 < delta < 1):
        raise PreconditionError("need 0 < delta < 1")
    n = len(bundle.vectors)
    space = bundle.space
    top = max(vec.max_support() for vec in bundle.vectors) + 1
    shares = [delta / (1 << k) for k in range(1, n)]
    shares.append(delta - sum(shares))
    perturbed = []
    t = top
    for j, (vec, share) in enumerate(zip(bundle.vectors, shares), start=1):
        grade = bundle.base_row + j - 1
        grade_row = space.row(grade)
        while grade_row.weight(t) == 0:
            t += 1
        c = share / (2 * bundle.kappa * grade_row.weight(t))
        perturbed.append(vec + FiniteSeq.basis(t, space.domain, c))
        t += 1
    out = BasicSeqBundle(space=space, base_row=bundle.base_row,
                         vectors=list(bundle.vectors), eps=list(bundle.eps),
                         kappa=bundle.kappa, perturbed=perturbed, delta=delta,
                         space_text=bundle.space_text)
    return out


def basic_seq_verify(bundle: BasicSeqBundle, sample_count: int,
                     seed: int) -> VerifyReport:
    """Exact sampled verification of the nesting bound, the coefficient
    bound |a_k| <= 2K p_1(x), and (when perturbed) the lower bound
    p_j(sum_{k>=j} a_k f_k) >= (1 - delta) p_j(sum_{k>=j} a_k u_k)."""
    cert = bundle.certificate(seed=seed, samples=sample_count)
    if cert.space_text is None:
        # fall back to re-verifying against the in-memory space
        from .certificates import _verify_basic_seq
        passed, failures = _verify_basic_seq(cert, bundle.space)
        return VerifyReport(ok=not failures, checks_passed=passed,
                            failures=failures)
    return verify_certificate(cert)


def basker_verify(vectors: Sequence[FiniteSeq], space: GradedSeminormFamily,
                  base_row: int = 0, samples: int = 20,
                  seed: int = 0) -> VerifyReport:
    """Graded-kernel memberships u_k in ker p_k \\ ker p_{k+1}, plus the
    tail-vanishing mechanism p_k(sum_{n >= N} a_n u_n) = 0 for N > k.

    Raises MembershipFailError at the first vector violating its grade.
    """
    failures: List[str] = []
    passed = 0
    for idx, vec in enumerate(vectors, start=1):
        g_in = base_row + idx - 1
        g_out = base_row + idx
        if not space.in_kernel(g_in, vec):
            raise MembershipFailError(idx, f"vector {idx} is not in "
                                           f"ker p_{g_in}")
        if space.in_kernel(g_out, vec):
            raise MembershipFailError(idx, f"vector {idx} lies in "
                                           f"ker p_{g_out} as well")
        passed += 2
    rng = make_rng(seed)
    n = len(vectors)
    for _ in range(samples if n else 0):
        coeffs = sample_coefficients(rng, n)
        for k in range(1, n + 1):
            for start in range(k + 1, n + 2):
                tail = FiniteSeq.zero(space.domain)
                for j in range(start, n + 1):
                    tail = tail + vectors[j - 1].scale(coeffs[j - 1])
                if space.seminorm(base_row + k - 1, tail) != 0:
                    failures.append(
                        f"tail sum from {start} is not killed by grade {k}")
                else:
                    passed += 1
    return VerifyReport(ok=not failures, checks_passed=passed,
                        failures=failures)
