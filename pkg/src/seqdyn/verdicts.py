"""Verdicts for semi-decidable criteria.

A criterion either decides exactly from tail/band rules (HOLDS / REFUTED)
or reports what a bounded search established (VERIFIED_UP_TO a horizon).
Verdicts always carry their witnesses so that an independent checker can
re-verify them without re-running the search.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .scalars import format_rational


class Status(enum.Enum):
    HOLDS = "HOLDS"
    REFUTED = "REFUTED"
    VERIFIED_UP_TO = "VERIFIED_UP_TO"


@dataclass(frozen=True)
class GapWitness:
    """A zero-interval of a weight row: a_{j,k} = 0 for start <= k < start+length.

    ``length is None`` means the interval is infinite ([start, oo)); the
    exhaustive flag marks witnesses proved from a tail rule rather than
    found by scanning.
    """

    row_index: int
    start: int
    length: Optional[int]
    exhaustive: bool = False

    def describe(self) -> str:
        end = "oo" if self.length is None else str(self.start + self.length - 1)
        tag = " exhaustive" if self.exhaustive else ""
        return f"row {self.row_index}: zeros on [{self.start}, {end}]{tag}"


@dataclass
class Verdict:
    """Outcome of one criterion run.

    witnesses is a list of (kind, payload) pairs with printable payloads;
    ``satisfied`` refines VERIFIED_UP_TO (was the searched-for structure
    found within the horizon, or not).
    """

    status: Status
    horizon: Optional[int] = None
    satisfied: Optional[bool] = None
    witnesses: list = field(default_factory=list)
    refutation_detail: Optional[str] = None
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def exit_code(self) -> int:
        if self.status is Status.HOLDS:
            return 0
        if self.status is Status.REFUTED:
            return 2
        return 3

    def add_witness(self, kind: str, payload) -> None:
        self.witnesses.append((kind, payload))

    def status_line(self) -> str:
        if self.status is Status.VERIFIED_UP_TO:
            found = "" if self.satisfied is None else (
                " (witnessed)" if self.satisfied else " (not witnessed)")
            return f"VERIFIED_UP_TO({self.horizon}){found}"
        return self.status.value

    def report_lines(self) -> list[str]:
        """Deterministic text rendering used by CLI reports."""
        lines = [f"verdict = {self.status_line()}"]
        if self.refutation_detail:
            lines.append(f"refutation = {self.refutation_detail}")
        for key in sorted(self.flags):
            lines.append(f"flag.{key} = {_fmt(self.flags[key])}")
        for i, (kind, payload) in enumerate(self.witnesses):
            lines.append(f"witness.{i} = {kind}: {_fmt(payload)}")
        for note in self.notes:
            lines.append(f"note = {note}")
        return lines


def _fmt(value) -> str:
    from fractions import Fraction

    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, GapWitness):
        return value.describe()
    if isinstance(value, dict):
        inner = ", ".join(f"{k}={_fmt(value[k])}" for k in sorted(value, key=str))
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)
