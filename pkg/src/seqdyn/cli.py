"""Batch command-line front door.

Subcommands mirror the library operations: validate definitions, run
criteria (exit 0 = HOLDS, 2 = REFUTED, 3 = VERIFIED_UP_TO), build
certificates, re-verify certificate files bit-exactly, and trace orbits.
Reports are deterministic text: identical inputs and seeds always produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import __version__
from .certificates import Certificate, verify_certificate
from .configio import (
    parse_operator,
    parse_space,
    parse_targets,
    parse_vector,
    parse_witness,
)
from .construct import (
    basic_seq_build,
    fhc_prefix_certificate,
    hc_prefix_certificate,
    subspace_prefix_certificates,
    with_perturbation,
)
from .criteria import (
    frequent_schedule_criterion,
    no_subspace_witness_verify,
    rank_criterion,
    support_divergence_criterion,
    support_growth_criterion,
    universal_span_criterion,
    ws_gap_criterion,
)
from .errors import (
    ParseError,
    SchemaMismatchError,
    SeqdynError,
)
from .operators import OperatorSequence
from .scalars import format_rational, parse_rational
from .seqspace import Domain

EXIT_VERIFY_FAILED = 5
EXIT_PARSE = 10
EXIT_SCHEMA = 11
EXIT_OPERATION = 12
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # uniform usage exit code, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(lines: List[str], out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_header(argv: List[str]) -> List[str]:
    # the output path is not part of the run configuration: drop it from the
    # echo so identical (config, seed) runs yield byte-identical reports
    echoed = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--out":
            skip = True
            continue
        echoed.append(token)
    return ["# seqdyn report",
            f"tool = seqdyn {__version__}",
            "command = " + " ".join(echoed)]


def build_parser() -> _Parser:
    parser = _Parser(prog="seqdyn",
                     description="exact hypercyclicity criteria and "
                                 "certificates on sequence spaces")
    parser.add_argument("--version", action="version",
                        version=f"seqdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="space definition utilities")
    sp_sub = sp.add_subparsers(dest="space_command", required=True)
    v = sp_sub.add_parser("validate", help="parse and validate a space file")
    v.add_argument("file")

    op = sub.add_parser("op", help="operator definition utilities")
    op_sub = op.add_subparsers(dest="op_command", required=True)
    v = op_sub.add_parser("validate", help="parse and validate an operator file")
    v.add_argument("file")

    chk = sub.add_parser("check", help="run a criterion")
    chk_sub = chk.add_subparsers(dest="criterion", required=True)

    c = chk_sub.add_parser("rank", help="full-rank column window search")
    c.add_argument("--op", required=True)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--K", type=int, default=1)
    c.add_argument("--horizon", type=int, default=100)
    c.add_argument("--out")

    c = chk_sub.add_parser("cor-bes",
                           help="support growth: c_i > i+1, all distinct")
    c.add_argument("--op", required=True)
    c.add_argument("--horizon", type=int, default=100)
    c.add_argument("--out")

    c = chk_sub.add_parser("cor-c",
                           help="support divergence along a subsequence")
    c.add_argument("--op", required=True)
    c.add_argument("--horizon", type=int, default=100)
    c.add_argument("--explicit", action="store_true",
                   help="treat the file as one member of an explicit sequence")
    c.add_argument("--out")

    c = chk_sub.add_parser("fhc-schedule",
                           help="frequent-visit block schedule")
    c.add_argument("--op", required=True)
    c.add_argument("--horizon", type=int, default=100)
    c.add_argument("--out")

    c = chk_sub.add_parser("ws-gap",
                           help="arbitrarily long zero intervals per row")
    c.add_argument("--space", required=True)
    c.add_argument("--op", required=True,
                   help="weighted shift whose weights must be nonzero")
    c.add_argument("--horizon", type=int, default=10_000)
    c.add_argument("--max-rows", type=int, default=None)
    c.add_argument("--out")

    c = chk_sub.add_parser("no-subspace",
                           help="verify a lower-bound witness family")
    c.add_argument("--space", required=True)
    c.add_argument("--op", required=True)
    c.add_argument("--witness", required=True)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int)
    c.add_argument("--out")

    c = chk_sub.add_parser("universal-span",
                           help="windowed span intersections are dense")
    c.add_argument("--targets", required=True)
    c.add_argument("--nmax", type=int, default=5)
    c.add_argument("--horizon", type=int, default=200)
    c.add_argument("--kernel", help="comma list of seminorm weights on K^d "
                                    "for the negative variant")
    c.add_argument("--out")

    con = sub.add_parser("construct", help="build a certificate")
    con_sub = con.add_subparsers(dest="construction", required=True)

    c = con_sub.add_parser("hc-prefix")
    c.add_argument("--op", required=True)
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--K", type=int, default=1)
    c.add_argument("--horizon", type=int, default=400)
    c.add_argument("--out")

    c = con_sub.add_parser("subspace")
    c.add_argument("--op", required=True)
    c.add_argument("--space")
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--J", type=int, required=True)
    c.add_argument("--horizon", type=int, default=600)
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--seed", type=int)
    c.add_argument("--out")

    c = con_sub.add_parser("fhc")
    c.add_argument("--op", required=True)
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--J", type=int, required=True)
    c.add_argument("--horizon", type=int, default=500)
    c.add_argument("--out")

    c = con_sub.add_parser("basic-seq")
    c.add_argument("--space", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--eps", help="comma list of rationals (default all 0)")
    c.add_argument("--delta", help="attach a perturbed family with this "
                                   "exact perturbation sum (rational < 1)")
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int)
    c.add_argument("--base-row", type=int, default=0)
    c.add_argument("--out")

    v = sub.add_parser("verify", help="re-check a certificate file")
    v.add_argument("certificate")
    v.add_argument("--out")

    t = sub.add_parser("trace", help="table of orbit windows")
    t.add_argument("--op", required=True)
    t.add_argument("--x", required=True, help="sparse vector, e.g. 3:1/2,5:2")
    t.add_argument("--steps", type=int, required=True)
    t.add_argument("--window", type=int, required=True)
    t.add_argument("--row-lo", type=int, default=None,
                   help="first row of the window (default 0; bilateral "
                        "defaults to -steps)")
    t.add_argument("--out")
    return parser


def _require_seed(args) -> int:
    if getattr(args, "samples", 0) and args.seed is None:
        raise SchemaMismatchError(
            "sampling requires an explicit --seed for reproducibility")
    return args.seed if args.seed is not None else 0


def _run_check(args, argv) -> int:
    lines = _report_header(argv)
    if args.criterion == "rank":
        ops = OperatorSequence.iterates(parse_operator(_read(args.op)))
        verdict = rank_criterion(ops, args.N, args.l, args.K, args.horizon)
    elif args.criterion == "cor-bes":
        verdict = support_growth_criterion(parse_operator(_read(args.op)),
                                           args.horizon)
    elif args.criterion == "cor-c":
        op = parse_operator(_read(args.op))
        ops = OperatorSequence.explicit([op]) if args.explicit \
            else OperatorSequence.iterates(op)
        verdict = support_divergence_criterion(ops, args.horizon)
    elif args.criterion == "fhc-schedule":
        ops = OperatorSequence.iterates(parse_operator(_read(args.op)))
        verdict = frequent_schedule_criterion(ops, args.horizon)
    elif args.criterion == "ws-gap":
        space = parse_space(_read(args.space))
        op_text = _read(args.op)
        operator = parse_operator(op_text)  # validates the shift definition
        from .configio import _parse_weights, _statements
        weights = None
        for key, value in _statements(op_text):
            if key == "weights":
                weights = value
        w_row = _parse_weights(weights, space.domain)
        verdict = ws_gap_criterion(space, w_row, args.horizon, args.max_rows)
    elif args.criterion == "no-subspace":
        seed = _require_seed(args)
        space = parse_space(_read(args.space))
        op = parse_operator(_read(args.op))
        witness = parse_witness(_read(args.witness))
        verdict = no_subspace_witness_verify(op, space, witness,
                                             sample_count=args.samples,
                                             seed=seed)
        lines.append(f"seed = {seed}")
    elif args.criterion == "universal-span":
        targets = parse_targets(_read(args.targets))
        kernel = None
        if args.kernel:
            kernel = [parse_rational(v) for v in args.kernel.split(",")]
        verdict = universal_span_criterion(targets, args.nmax, args.horizon,
                                           kernel_weights=kernel)
    else:  # pragma: no cover - argparse guards
        raise SchemaMismatchError(f"unknown criterion {args.criterion}")
    lines.extend(verdict.report_lines())
    _emit(lines, args.out)
    return verdict.exit_code()


def _run_construct(args, argv) -> int:
    if args.construction == "hc-prefix":
        op_text = _read(args.op)
        ops = OperatorSequence.iterates(parse_operator(op_text))
        cert = hc_prefix_certificate(ops, args.L, K=args.K,
                                     horizon=args.horizon,
                                     operator_text=op_text)
    elif args.construction == "subspace":
        op_text = _read(args.op)
        ops = OperatorSequence.iterates(parse_operator(op_text))
        seed = _require_seed(args)
        space = parse_space(_read(args.space)) if args.space else None
        space_text = _read(args.space) if args.space else None
        cert, report = subspace_prefix_certificates(
            ops, args.L, args.J, horizon=args.horizon, seed=seed,
            samples=args.samples, space=space,
            operator_text=op_text, space_text=space_text)
        if not report.ok:
            sys.stderr.write("\n".join(report.lines()) + "\n")
            return EXIT_VERIFY_FAILED
    elif args.construction == "fhc":
        op_text = _read(args.op)
        ops = OperatorSequence.iterates(parse_operator(op_text))
        cert = fhc_prefix_certificate(ops, args.L, args.J,
                                      horizon=args.horizon,
                                      operator_text=op_text)
    elif args.construction == "basic-seq":
        space_text = _read(args.space)
        space = parse_space(space_text)
        seed = _require_seed(args)
        eps = [parse_rational(v) for v in args.eps.split(",")] \
            if args.eps else None
        bundle = basic_seq_build(space, args.n, eps_schedule=eps,
                                 base_row=args.base_row,
                                 space_text=space_text)
        if args.delta:
            bundle = with_perturbation(bundle, parse_rational(args.delta))
        cert = bundle.certificate(seed=seed, samples=args.samples)
    else:  # pragma: no cover
        raise SchemaMismatchError(f"unknown construction {args.construction}")
    text = cert.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_verify(args, argv) -> int:
    cert = Certificate.from_text(_read(args.certificate))
    report = verify_certificate(cert)
    lines = _report_header(argv)
    lines.append(f"certificate = {args.certificate}")
    lines.append(f"kind = {cert.kind}")
    lines.extend(report.lines())
    _emit(lines, args.out)
    return 0 if report.ok else EXIT_VERIFY_FAILED


def _run_trace(args, argv) -> int:
    op = parse_operator(_read(args.op))
    x = parse_vector(args.x, op.domain)
    row_lo = args.row_lo
    if row_lo is None:
        row_lo = -args.steps if op.domain is Domain.BILATERAL else 0
    rows = list(range(row_lo, row_lo + args.window))
    lines = _report_header(argv)
    lines.append("columns = k\t" + "\t".join(str(i) for i in rows))
    current = x
    for k in range(0, args.steps + 1):
        if k > 0:
            current = op.apply(current)
        vals = "\t".join(format_rational(current[i]) for i in rows)
        lines.append(f"{k}\t{vals}")
    _emit(lines, args.out)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "space":
            space = parse_space(_read(args.file))
            rows = space.explicit_row_count()
            print(f"ok: {space.kind.value} on {space.domain.value}, "
                  f"{rows} explicit row(s)"
                  + (f", generator {space.generator.name}"
                     if space.generator else ""))
            return 0
        if args.command == "op":
            op = parse_operator(_read(args.file))
            print(f"ok: {op.name} on {op.domain.value}")
            return 0
        if args.command == "check":
            return _run_check(args, argv)
        if args.command == "construct":
            return _run_construct(args, argv)
        if args.command == "verify":
            return _run_verify(args, argv)
        if args.command == "trace":
            return _run_trace(args, argv)
        raise SchemaMismatchError(f"unknown command {args.command}")
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except SchemaMismatchError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return EXIT_SCHEMA
    except SeqdynError as exc:
        sys.stderr.write(f"error: {exc.__class__.__name__}: {exc}\n")
        return EXIT_OPERATION


if __name__ == "__main__":
    sys.exit(main())
