"""Parsing and echoing of definition files.

All files are UTF-8 text, one `key = value` statement per line, with `#`
comments and blank lines ignored.  Rationals are written `p/q` (or a bare
integer).  The exact grammars are documented in the README; parsers raise
ParseError for malformed text and SchemaMismatchError for structurally
invalid definitions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .criteria import NoSubspaceEntry, NoSubspaceWitness, TargetFamily
from .errors import ParseError, SchemaMismatchError
from .operators import (
    ColumnFiniteOperator,
    affine_support_operator,
    constant_weights,
    identity_operator,
    polynomial_shift_mix,
    weighted_backward_shift,
    weighted_forward_shift,
    zero_operator,
)
from .scalars import format_rational, parse_rational
from .seqspace import (
    Domain,
    FiniteSeq,
    GradedSeminormFamily,
    RowGenerator,
    SeminormKind,
    TailKind,
    TailRule,
    WeightRow,
    bilateral_summable_family,
    constant_norm_family,
    factorial_gap_family,
    omega_family,
)


def _statements(text: str) -> List[Tuple[str, str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        out.append((key.strip(), value.strip()))
    return out


def parse_vector(text: str, domain: Domain = Domain.UNILATERAL) -> FiniteSeq:
    """Sparse vector literal: `k:p/q k:p/q ...` (separators space or comma);
    `-` or empty denotes the zero vector."""
    text = text.strip()
    if text in ("-", ""):
        return FiniteSeq.zero(domain)
    entries = {}
    for chunk in text.replace(",", " ").split():
        if ":" not in chunk:
            raise ParseError(f"vector entry {chunk!r} is not index:value")
        k, v = chunk.split(":", 1)
        try:
            idx = int(k)
        except ValueError:
            raise ParseError(f"bad index in vector entry {chunk!r}") from None
        entries[idx] = parse_rational(v)
    return FiniteSeq(entries, domain)


def format_vector(x: FiniteSeq) -> str:
    if x.is_zero():
        return "-"
    return " ".join(f"{k}:{format_rational(v)}" for k, v in x.items())


# -- tail rules and weight rows ---------------------------------------------------


def _parse_tail(text: str) -> Tuple[TailRule, Optional[int]]:
    """`<rule> [@ start]`, rule one of zero / const v / affine s i /
    periodic v,v,... / unknown."""
    start = None
    if "@" in text:
        text, at = text.rsplit("@", 1)
        try:
            start = int(at.strip())
        except ValueError:
            raise ParseError(f"bad tail start {at.strip()!r}") from None
    parts = text.split()
    if not parts:
        raise ParseError("empty tail rule")
    name = parts[0]
    args = parts[1:]
    if name == "zero":
        return TailRule.zero(), start
    if name == "const":
        if len(args) != 1:
            raise ParseError("const tail takes one value")
        return TailRule.constant(parse_rational(args[0])), start
    if name == "affine":
        if len(args) != 2:
            raise ParseError("affine tail takes slope and intercept")
        return TailRule.affine(parse_rational(args[0]),
                               parse_rational(args[1])), start
    if name == "periodic":
        if len(args) != 1:
            raise ParseError("periodic tail takes a comma list")
        vals = [parse_rational(v) for v in args[0].split(",") if v]
        return TailRule.periodic(vals), start
    if name == "unknown":
        return TailRule.unknown(), start
    raise ParseError(f"unknown tail rule {name!r}")


def parse_weight_row(text: str, domain: Domain = Domain.UNILATERAL) -> WeightRow:
    """`[k:p/q ...] [; tail <rule> @ k] [; neg <rule> @ k]`."""
    segments = [seg.strip() for seg in text.split(";")]
    entries = {}
    if segments and segments[0] and not segments[0].startswith(("tail", "neg")):
        head = segments.pop(0)
        if head != "-":
            for chunk in head.replace(",", " ").split():
                if ":" not in chunk:
                    raise ParseError(f"weight entry {chunk!r} is not index:value")
                k, v = chunk.split(":", 1)
                entries[int(k)] = parse_rational(v)
    tail, tail_start = TailRule.zero(), None
    neg, neg_start = None, None
    for seg in segments:
        if not seg:
            continue
        if seg.startswith("tail"):
            tail, tail_start = _parse_tail(seg[4:].strip())
        elif seg.startswith("neg"):
            neg, neg_start = _parse_tail(seg[3:].strip())
        else:
            raise ParseError(f"unexpected row segment {seg!r}")
    if tail_start is None:
        tail_start = max(entries, default=-1) + 1
    if domain is Domain.BILATERAL and neg is None:
        neg = TailRule.zero()
    return WeightRow(entries, tail=tail, tail_start=tail_start,
                     neg_tail=neg, neg_tail_start=neg_start, domain=domain)


def format_weight_row(row: WeightRow) -> str:
    return row.describe()


# -- spaces --------------------------------------------------------------------------


_SPACE_PRESETS = {
    "omega": omega_family,
    "constant_norm": constant_norm_family,
    "factorial_gaps": factorial_gap_family,
    "bilateral_summable": bilateral_summable_family,
}


def parse_space(text: str) -> GradedSeminormFamily:
    kind = None
    domain = Domain.UNILATERAL
    finite_dense = True
    generator_spec = None
    preset = None
    rows: Dict[int, str] = {}
    for key, value in _statements(text):
        if key == "preset":
            preset = value
        elif key == "kind":
            try:
                kind = SeminormKind(value)
            except ValueError:
                raise ParseError(f"unknown seminorm kind {value!r}") from None
        elif key == "domain":
            try:
                domain = Domain(value)
            except ValueError:
                raise ParseError(f"unknown domain {value!r}") from None
        elif key == "finite_dense":
            if value not in ("true", "false"):
                raise ParseError("finite_dense must be true or false")
            finite_dense = value == "true"
        elif key == "generator":
            generator_spec = value
        elif key.startswith("row"):
            try:
                j = int(key[3:].strip())
            except ValueError:
                raise ParseError(f"bad row index in {key!r}") from None
            rows[j] = value
        else:
            raise ParseError(f"unknown space key {key!r}")

    if preset is not None:
        name, *args = preset.split()
        if name not in _SPACE_PRESETS:
            raise ParseError(f"unknown space preset {name!r}")
        fam = _SPACE_PRESETS[name](*[int(a) for a in args])
        fam.finite_dense = finite_dense
        return fam

    if kind is None:
        raise ParseError("space needs a kind (or a preset)")
    if sorted(rows) != list(range(len(rows))):
        raise SchemaMismatchError("space rows must be numbered 0, 1, ...")
    row_objs = [parse_weight_row(rows[j], domain) for j in sorted(rows)]
    generator = _build_generator(generator_spec, domain) if generator_spec else None
    return GradedSeminormFamily(kind, row_objs, generator=generator,
                                domain=domain, finite_dense=finite_dense)


def _build_generator(spec: str, domain: Domain) -> RowGenerator:
    parts = spec.split()
    name, args = parts[0], parts[1:]
    if name == "window":
        def fn(j):
            return WeightRow({k: 1 for k in range(j + 1)},
                             tail=TailRule.zero(), tail_start=j + 1)
        return RowGenerator("window", fn, uniform_tail=TailKind.ZERO)
    if name == "ones":
        value = parse_rational(args[0]) if args else Fraction(1)

        def fn(j):
            return WeightRow({}, tail=TailRule.constant(value), tail_start=0)
        return RowGenerator("ones", fn, uniform_tail=TailKind.CONSTANT)
    if name == "halfline":
        value = parse_rational(args[0]) if args else Fraction(1)

        def fn(j):
            return WeightRow({}, tail=TailRule.constant(value), tail_start=-j,
                             neg_tail=TailRule.zero(), neg_tail_start=-j - 1,
                             domain=Domain.BILATERAL)
        return RowGenerator("halfline", fn, uniform_tail=TailKind.CONSTANT)
    raise ParseError(f"unknown generator {name!r}")


# -- operators -------------------------------------------------------------------------


def parse_operator(text: str) -> ColumnFiniteOperator:
    preset = None
    domain = Domain.UNILATERAL
    weights_text = None
    poly = None
    alpha: List[Fraction] = []
    scale = Fraction(1)
    c0 = r = None
    rows: Dict[int, str] = {}
    for key, value in _statements(text):
        if key == "preset":
            preset = value
        elif key == "domain":
            try:
                domain = Domain(value)
            except ValueError:
                raise ParseError(f"unknown domain {value!r}") from None
        elif key == "weights":
            weights_text = value
        elif key == "poly":
            poly = [parse_rational(v) for v in value.split(",") if v.strip()]
        elif key == "alpha":
            alpha = [parse_rational(v) for v in value.split(",") if v.strip()]
        elif key == "scale":
            scale = parse_rational(value)
        elif key == "c0":
            c0 = int(value)
        elif key == "r":
            r = int(value)
        elif key.startswith("row"):
            rows[int(key[3:].strip())] = value
        else:
            raise ParseError(f"unknown operator key {key!r}")

    if preset is None and rows:
        explicit = {i: parse_vector(v, domain) for i, v in rows.items()}
        return ColumnFiniteOperator(domain, explicit_rows=explicit,
                                    name="explicit")
    if preset is None:
        raise ParseError("operator needs a preset or explicit rows")

    weights = _parse_weights(weights_text, domain)
    if preset == "backward_shift":
        return weighted_backward_shift(weights, domain)
    if preset == "forward_shift":
        return weighted_forward_shift(weights, domain)
    if preset == "poly_shift_mix":
        if poly is None:
            raise ParseError("poly_shift_mix needs poly = c0,c1,...")
        return polynomial_shift_mix(poly, alpha, weights, domain)
    if preset == "identity":
        return identity_operator(domain, scale)
    if preset == "zero":
        return zero_operator(domain)
    if preset == "affine_support":
        if c0 is None or r is None:
            raise ParseError("affine_support needs c0 and r")
        return affine_support_operator(c0, r, domain)
    raise ParseError(f"unknown operator preset {preset!r}")


def _parse_weights(text: Optional[str], domain: Domain) -> WeightRow:
    if text is None:
        return constant_weights(1, domain)
    text = text.strip()
    if ";" not in text and ":" not in text:
        # shorthand: a bare rational, or `const <p/q>`
        parts = text.split()
        if parts[0] == "const":
            parts = parts[1:]
        if len(parts) != 1:
            raise ParseError(f"bad weights shorthand {text!r}")
        return constant_weights(parse_rational(parts[0]), domain)
    return parse_weight_row(text, domain)


# -- target families -----------------------------------------------------------------


def parse_targets(text: str) -> TargetFamily:
    dimension = None
    vectors: Dict[int, Tuple[Fraction, ...]] = {}
    tail = None
    for key, value in _statements(text):
        if key == "dimension":
            dimension = int(value)
        elif key.startswith("x"):
            n = int(key[1:].strip())
            vectors[n] = tuple(parse_rational(v) for v in value.split(","))
        elif key == "tail":
            parts = value.split()
            if parts[0] == "zero":
                tail = ("zero",)
            elif parts[0] == "cycle":
                tail = ("cycle", int(parts[1]))
            else:
                raise ParseError(f"unknown target tail {value!r}")
        else:
            raise ParseError(f"unknown targets key {key!r}")
    if dimension is None:
        raise ParseError("targets need a dimension")
    if sorted(vectors) != list(range(len(vectors))):
        raise SchemaMismatchError("target vectors must be numbered 0, 1, ...")
    return TargetFamily(dimension,
                        tuple(vectors[n] for n in sorted(vectors)), tail)


# -- no-subspace witnesses --------------------------------------------------------------


def parse_witness(text: str) -> NoSubspaceWitness:
    q_row = None
    entries = []
    for key, value in _statements(text):
        if key == "q_row":
            q_row = int(value)
        elif key == "entry":
            fields = {}
            for chunk in value.split():
                if "=" not in chunk:
                    raise ParseError(f"bad witness field {chunk!r}")
                k, v = chunk.split("=", 1)
                fields[k] = v
            try:
                annihilated = frozenset(
                    int(v) for v in fields.get("annihilated", "").split(",") if v)
                entries.append(NoSubspaceEntry(
                    grade=int(fields["grade"]),
                    iterate=int(fields["iterate"]),
                    constant=parse_rational(fields["constant"]),
                    annihilated=annihilated))
            except KeyError as exc:
                raise ParseError(f"witness entry missing field {exc}") from None
        else:
            raise ParseError(f"unknown witness key {key!r}")
    if q_row is None:
        raise ParseError("witness needs q_row")
    return NoSubspaceWitness(q_row=q_row, entries=tuple(entries))
