"""Finite, independently re-checkable certificates.

A certificate packages everything a verifier needs: the operator and/or
space definition (embedded as text), the constructed vectors, hit times,
target identifiers, and the list of exact assertions.  Verification
recomputes every assertion from scratch through the public evaluation
primitives (windows, seminorms, support indices) and never trusts the
construction; all residuals must come out exactly zero.

The text format is line oriented and deterministic, so identical inputs
always serialize byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .enumeration import ENUMERATION_VERSION, enumerate_dense
from .errors import ParseError
from .operators import iterate_support
from .sampling import make_rng, sample_coefficients
from .scalars import format_rational, parse_rational
from .seqspace import Domain, FiniteSeq

CERTIFICATE_FORMAT = 1


@dataclass
class Certificate:
    kind: str
    operator_text: Optional[str] = None
    space_text: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    samples: Optional[int] = None
    base_row: Optional[int] = None
    eps: List[Fraction] = field(default_factory=list)
    kappa: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    vectors: Dict[int, FiniteSeq] = field(default_factory=dict)
    perturbed: Dict[int, FiniteSeq] = field(default_factory=dict)
    valuations: Dict[int, Tuple[int, int, int]] = field(default_factory=dict)
    targets: Dict[int, Tuple] = field(default_factory=dict)
    window_checks: List[Tuple[int, int, int]] = field(default_factory=list)
    zero_checks: List[Tuple[int, int, int]] = field(default_factory=list)
    schedule_checks: List[Tuple[int, int, int]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = ["# seqdyn certificate",
                 f"format = {CERTIFICATE_FORMAT}",
                 f"kind = {self.kind}",
                 f"enumeration_version = {ENUMERATION_VERSION}"]
        for key in sorted(self.params):
            lines.append(f"param {key} = {self.params[key]}")
        if self.seed is not None:
            lines.append(f"seed = {self.seed}")
        if self.samples is not None:
            lines.append(f"samples = {self.samples}")
        if self.base_row is not None:
            lines.append(f"base_row = {self.base_row}")
        if self.eps:
            lines.append("eps = " + ",".join(format_rational(e) for e in self.eps))
        if self.kappa is not None:
            lines.append(f"kappa = {format_rational(self.kappa)}")
        if self.delta is not None:
            lines.append(f"delta = {format_rational(self.delta)}")
        for tag, text in (("operator", self.operator_text),
                          ("space", self.space_text)):
            if text is not None:
                lines.append(f"{tag} <<<")
                lines.extend(text.rstrip("\n").splitlines())
                lines.append(">>>")
        for j in sorted(self.vectors):
            lines.append(f"vector {j} = {_fmt_seq(self.vectors[j])}")
        for j in sorted(self.perturbed):
            lines.append(f"perturbed {j} = {_fmt_seq(self.perturbed[j])}")
        for j in sorted(self.valuations):
            g_in, g_out, first = self.valuations[j]
            lines.append(f"valuation {j} = in={g_in} notin={g_out} first={first}")
        for l in sorted(self.targets):
            spec = self.targets[l]
            if spec[0] == "dense":
                lines.append(f"target {l} = dense {spec[1]}")
            else:
                vals = ",".join(format_rational(v) for v in spec[1])
                lines.append(f"target {l} = window {vals}")
        for j, l, n in self.window_checks:
            lines.append(f"check window = j={j} l={l} n={n}")
        for j, l, n in self.zero_checks:
            lines.append(f"check zero = j={j} l={l} n={n}")
        for k, l, nxt in self.schedule_checks:
            lines.append(f"check schedule = k={k} l={l} next={nxt}")
        for w in self.warnings:
            lines.append(f"warning = {w}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        cert = cls(kind="?")
        lines = text.splitlines()
        i = 0
        fmt_seen = False
        while i < len(lines):
            raw = lines[i]
            i += 1
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.endswith("<<<"):
                tag = line[:-3].strip()
                body = []
                while i < len(lines) and lines[i].strip() != ">>>":
                    body.append(lines[i])
                    i += 1
                if i >= len(lines):
                    raise ParseError(f"unterminated {tag} block")
                i += 1
                if tag == "operator":
                    cert.operator_text = "\n".join(body) + "\n"
                elif tag == "space":
                    cert.space_text = "\n".join(body) + "\n"
                else:
                    raise ParseError(f"unknown block {tag!r}")
                continue
            if "=" not in line:
                raise ParseError(f"bad certificate line {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            cert._parse_statement(key, value)
            if key == "format":
                fmt_seen = True
        if not fmt_seen:
            raise ParseError("not a certificate file (missing format line)")
        return cert

    def _parse_statement(self, key: str, value: str) -> None:
        if key == "format":
            if int(value) != CERTIFICATE_FORMAT:
                raise ParseError(f"unsupported certificate format {value}")
        elif key == "kind":
            self.kind = value
        elif key == "enumeration_version":
            if int(value) != ENUMERATION_VERSION:
                raise ParseError(f"certificate uses enumeration v{value}, "
                                 f"this tool implements v{ENUMERATION_VERSION}")
        elif key.startswith("param "):
            self.params[key[6:].strip()] = value
        elif key == "seed":
            self.seed = int(value)
        elif key == "samples":
            self.samples = int(value)
        elif key == "base_row":
            self.base_row = int(value)
        elif key == "eps":
            self.eps = [parse_rational(v) for v in value.split(",") if v]
        elif key == "kappa":
            self.kappa = parse_rational(value)
        elif key == "delta":
            self.delta = parse_rational(value)
        elif key.startswith("vector "):
            self.vectors[int(key[7:])] = _parse_seq(value, self._domain())
        elif key.startswith("perturbed "):
            self.perturbed[int(key[10:])] = _parse_seq(value, self._domain())
        elif key.startswith("valuation "):
            fields = _kv(value)
            self.valuations[int(key[10:])] = (int(fields["in"]),
                                              int(fields["notin"]),
                                              int(fields["first"]))
        elif key.startswith("target "):
            l = int(key[7:])
            parts = value.split(None, 1)
            if parts[0] == "dense":
                self.targets[l] = ("dense", int(parts[1]))
            elif parts[0] == "window":
                vals = tuple(parse_rational(v) for v in parts[1].split(","))
                self.targets[l] = ("window", vals)
            else:
                raise ParseError(f"unknown target spec {value!r}")
        elif key == "check window":
            f = _kv(value)
            self.window_checks.append((int(f["j"]), int(f["l"]), int(f["n"])))
        elif key == "check zero":
            f = _kv(value)
            self.zero_checks.append((int(f["j"]), int(f["l"]), int(f["n"])))
        elif key == "check schedule":
            f = _kv(value)
            self.schedule_checks.append((int(f["k"]), int(f["l"]),
                                         int(f["next"])))
        elif key == "warning":
            self.warnings.append(value)
        else:
            raise ParseError(f"unknown certificate key {key!r}")

    def _domain(self) -> Domain:
        return Domain.BILATERAL if self.params.get("domain") == "bilateral" \
            else Domain.UNILATERAL

    # -- target windows ------------------------------------------------------

    def target_window(self, l: int, length: int) -> Tuple[Fraction, ...]:
        spec = self.targets[l]
        if spec[0] == "dense":
            return enumerate_dense(spec[1]).window(length)
        vals = spec[1]
        if len(vals) < length:
            vals = vals + tuple(Fraction(0) for _ in range(length - len(vals)))
        return vals[:length]


def _fmt_seq(x: FiniteSeq) -> str:
    if x.is_zero():
        return "-"
    return " ".join(f"{k}:{format_rational(v)}" for k, v in x.items())


def _parse_seq(text: str, domain: Domain) -> FiniteSeq:
    if text.strip() == "-":
        return FiniteSeq.zero(domain)
    entries = {}
    for chunk in text.split():
        k, v = chunk.split(":", 1)
        entries[int(k)] = parse_rational(v)
    return FiniteSeq(entries, domain)


def _kv(text: str) -> Dict[str, str]:
    out = {}
    for chunk in text.split():
        if "=" not in chunk:
            raise ParseError(f"expected key=value, got {chunk!r}")
        k, v = chunk.split("=", 1)
        out[k] = v
    return out


# -- verification -----------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    checks_passed: int
    failures: List[str]

    def lines(self) -> List[str]:
        out = [f"verified = {'yes' if self.ok else 'NO'}",
               f"checks_passed = {self.checks_passed}"]
        for f in self.failures:
            out.append(f"failure = {f}")
        return out


def verify_certificate(cert: Certificate) -> VerifyReport:
    """Re-check every assertion of a certificate with exact arithmetic.

    Uses only the embedded definitions plus the public evaluation
    primitives; all residuals must be exactly zero.
    """
    from .configio import parse_operator, parse_space  # local: avoid cycle

    failures: List[str] = []
    passed = 0
    op = parse_operator(cert.operator_text) if cert.operator_text else None
    space = parse_space(cert.space_text) if cert.space_text else None

    powers: Dict[int, object] = {}

    def power(n: int):
        if n not in powers:
            from .operators import iterate
            powers[n] = iterate(op, n)
        return powers[n]

    for j, l, n in cert.window_checks:
        got = power(n).apply_window(cert.vectors[j], l)
        want = cert.target_window(l, l)
        if got == want:
            passed += 1
        else:
            failures.append(f"window j={j} l={l} n={n}: got {got}, want {want}")
    for j, l, n in cert.zero_checks:
        got = power(n).apply_window(cert.vectors[j], l)
        if all(v == 0 for v in got):
            passed += 1
        else:
            failures.append(f"zero-window j={j} l={l} n={n}: got {got}")

    # hit times strictly increasing per vector (order of appearance)
    per_vector: Dict[int, List[int]] = {}
    for j, l, n in cert.window_checks:
        per_vector.setdefault(j, []).append(n)
    for j, times in per_vector.items():
        if all(a < b for a, b in zip(times, times[1:])):
            passed += 1
        else:
            failures.append(f"hit times for vector {j} are not increasing: {times}")

    for j, (g_in, g_out, first) in sorted(cert.valuations.items()):
        vec = cert.vectors[j]
        if space is None:
            failures.append("valuation checks need an embedded space")
            break
        if space.in_kernel(g_in, vec) and not space.in_kernel(g_out, vec) \
                and vec.min_support() == first:
            passed += 1
        else:
            failures.append(f"valuation of vector {j} violates "
                            f"ker p_{g_in} \\ ker p_{g_out} at {first}")

    for k, l, nxt in cert.schedule_checks:
        f_kl = max(iterate_support(op, k, i) for i in range(l))
        d_next = iterate_support(op, nxt, 0) - 1
        if f_kl <= d_next:
            passed += 1
        else:
            failures.append(f"schedule: f_({k},{l}) = {f_kl} > d_{nxt} = {d_next}")

    if cert.kind == "subspace" and cert.samples:
        passed_combo, combo_failures = _verify_combinations(cert, power)
        passed += passed_combo
        failures.extend(combo_failures)

    if cert.kind == "basic-seq":
        p, f = _verify_basic_seq(cert, space)
        passed += p
        failures.extend(f)

    return VerifyReport(ok=not failures, checks_passed=passed,
                        failures=failures)


def _verify_combinations(cert: Certificate, power) -> Tuple[int, List[str]]:
    """Unit-leading combination property: with alpha_{j0} = 1, the combined
    vector hits vector j0's targets at j0's times, exactly."""
    js = sorted(cert.vectors)
    hits: Dict[int, List[Tuple[int, int]]] = {j: [] for j in js}
    for j, l, n in cert.window_checks:
        hits[j].append((l, n))
    rng = make_rng(cert.seed)
    passed = 0
    failures: List[str] = []
    for s in range(cert.samples):
        j0 = js[s % len(js)]
        coeffs = sample_coefficients(rng, len(js), unit_index=js.index(j0))
        combined = FiniteSeq.zero(cert.vectors[j0].domain)
        for coeff, j in zip(coeffs, js):
            combined = combined + cert.vectors[j].scale(coeff)
        for l, n in hits[j0]:
            got = power(n).apply_window(combined, l)
            want = cert.target_window(l, l)
            if got == want:
                passed += 1
            else:
                failures.append(
                    f"combination sample {s} (unit at {j0}): window at "
                    f"time {n} is {got}, want {want}")
                return passed, failures
    return passed, failures


def _verify_basic_seq(cert: Certificate, space) -> Tuple[int, List[str]]:
    if space is None:
        return 0, ["basic-seq certificate needs an embedded space"]
    base = cert.base_row or 0
    js = sorted(cert.vectors)
    n = len(js)
    passed = 0
    failures: List[str] = []

    def row(idx: int) -> int:
        # 1-based grades sit at rows base, base+1, ...
        return base + idx - 1

    for j in js:
        if space.seminorm(row(1), cert.vectors[j]) == 1:
            passed += 1
        else:
            failures.append(f"p_1(u_{j}) != 1")
    supports = [set(cert.vectors[j].support) for j in js]
    for a in range(n):
        for b in range(a + 1, n):
            if supports[a] & supports[b]:
                failures.append(f"vectors {js[a]} and {js[b]} share support")
    if not any("share support" in f for f in failures):
        passed += 1

    kappa = cert.kappa if cert.kappa is not None else Fraction(1)
    eps = list(cert.eps) + [Fraction(0)] * (n - len(cert.eps))

    if cert.perturbed:
        if sorted(cert.perturbed) != js:
            failures.append("perturbed family does not match the vectors")
            return passed, failures
        delta = Fraction(0)
        for j in js:
            diff = cert.vectors[j] - cert.perturbed[j]
            delta += 2 * kappa * space.seminorm(row(j), diff)
        if cert.delta is not None and delta == cert.delta and delta < 1:
            passed += 1
        else:
            failures.append(f"perturbation sum is {delta}, declared {cert.delta}")

    rng = make_rng(cert.seed or 0)
    for _ in range(cert.samples or 0):
        coeffs = sample_coefficients(rng, n)
        partial = FiniteSeq.zero(space.domain)
        partials = []
        for j, c in zip(js, coeffs):
            partial = partial + cert.vectors[j].scale(c)
            partials.append(partial)
        full = partials[-1]
        ok = True
        for i in range(1, n):  # nesting bound at stage i
            for grade in range(1, i + 1):
                lhs = space.seminorm(row(grade), partials[i - 1])
                rhs = (1 + eps[i - 1]) * space.seminorm(row(grade), partials[i])
                if lhs > rhs:
                    failures.append(
                        f"nesting bound fails at stage {i}, grade {grade}")
                    ok = False
                    break
            if not ok:
                break
        base_norm = space.seminorm(row(1), full)
        for c in coeffs:
            if abs(c) > 2 * kappa * base_norm:
                failures.append("coefficient bound |a| <= 2K p_1(x) fails")
                ok = False
                break
        if ok and cert.perturbed and cert.delta is not None:
            for grade in range(1, n + 1):
                tail_u = FiniteSeq.zero(space.domain)
                tail_f = FiniteSeq.zero(space.domain)
                for j, c in zip(js, coeffs):
                    if j >= grade:
                        tail_u = tail_u + cert.vectors[j].scale(c)
                        tail_f = tail_f + cert.perturbed[j].scale(c)
                lhs = space.seminorm(row(grade), tail_f)
                rhs = (1 - cert.delta) * space.seminorm(row(grade), tail_u)
                if lhs < rhs:
                    failures.append(
                        f"perturbed lower bound fails at grade {grade}")
                    ok = False
                    break
        if ok:
            passed += 1
        else:
            break
    return passed, failures
