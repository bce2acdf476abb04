"""Exception hierarchy.

Every failure mode an operation can signal gets its own class so callers
(and the CLI exit-code mapping) can dispatch on type rather than message.
"""


class SeqdynError(Exception):
    """Base class for all library errors."""


class ParseError(SeqdynError):
    """A definition file, rational literal or vector literal is malformed."""


class SchemaMismatchError(SeqdynError):
    """A parsed definition violates a structural invariant."""


class DomainMismatchError(SeqdynError):
    """Unilateral and bilateral objects were mixed in one operation."""


class RowUnavailableError(SeqdynError):
    """A row index is outside the explicit block and no generator/rule exists."""

    def __init__(self, index, what="row"):
        super().__init__(f"{what} {index} is not presented and no rule covers it")
        self.index = index


class UnknownTailError(SeqdynError):
    """A query touches the region where an UNKNOWN tail gives no values."""


class BilateralUnsupportedError(SeqdynError):
    """The operation is defined only for the unilateral index domain."""


class UnboundedResultError(SeqdynError):
    """A full operator application would not have finite support.

    Callers should request a coordinate window instead.
    """


class NonbandedComposeError(SeqdynError):
    """Symbolic row rules cannot be composed; an explicit block is required."""


class ZeroWeightError(SeqdynError):
    """A shift weight is zero (or not provably nonzero) where one is required."""


class RecursionEscapeError(SeqdynError):
    """The support-index recursion requested a row with support index 0."""

    def __init__(self, k, i):
        super().__init__(
            f"support-index recursion undefined at iterate {k}, row {i}: "
            f"the row has empty support"
        )
        self.k = k
        self.i = i


class MalformedWitnessError(SeqdynError):
    """A no-subspace witness violates its structural invariants."""


class TailRuleRequiredError(SeqdynError):
    """A target family has no tail rule, so spans beyond the explicit block
    are undetermined."""


class NoWitnessError(SeqdynError):
    """A constructive search found no witness within the horizon."""

    def __init__(self, level, message=None):
        super().__init__(message or f"no witness found at stage {level}")
        self.level = level


class ScheduleViolationError(SeqdynError):
    """Consecutive construction blocks would overlap, contradicting the
    declared schedule."""


class SupportExhaustedError(SeqdynError):
    """The base seminorm row has only finitely many nonzero weights, so no
    disjoint-support sequence of the requested length exists."""


class MembershipFailError(SeqdynError):
    """A vector fails its required kernel membership."""

    def __init__(self, index, message=None):
        super().__init__(message or f"kernel membership fails at index {index}")
        self.index = index


class PreconditionError(SeqdynError):
    """An operation's precondition is not satisfied by the inputs."""
