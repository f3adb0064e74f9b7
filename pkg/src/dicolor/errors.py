"""Exception types shared across the package."""


class DicolorError(Exception):
    """Base class for all library errors."""


class OutOfRange(DicolorError):
    """A vertex or arc refers to an id outside the digraph."""


class SelfLoop(DicolorError):
    """A (u, u) arc was supplied; digraphs here are loopless."""


class DuplicateArc(DicolorError):
    """The same ordered pair was supplied twice."""


class CyclicInput(DicolorError):
    """An operation requiring a DAG received a digraph with a directed cycle."""


class ArityMismatch(DicolorError):
    """A coloring does not assign exactly one color to every vertex."""


class BudgetExceeded(DicolorError):
    """An enumeration exceeded its configured node budget."""


class NotAFeedbackSet(DicolorError):
    """A declared feedback vertex/arc set does not make the digraph acyclic."""


class PreconditionViolated(DicolorError):
    """A solver was invoked outside its stated preconditions."""


class TooLarge(PreconditionViolated):
    """Feedback vertex set too large for the distinct-colors shortcut."""


class WrongFvsSize(PreconditionViolated):
    """The bounded-degree FVS solver needs a feedback vertex set of size exactly k."""


class DegreeTooHigh(PreconditionViolated):
    """Maximum degree exceeds the solver's admissible bound."""


class TooManyArcs(PreconditionViolated):
    """The feedback-arc-set solver needs at most k^2 - 1 arcs."""


class NotRestricted(DicolorError):
    """A formula violates the restricted-CNF invariants."""


class ClauseTooLarge(DicolorError):
    """A clause exceeds the width supported by a reduction."""


class EmptyClause(DicolorError):
    """A CNF clause with no literals was supplied."""


class GroupSizeInfeasible(DicolorError):
    """The requested variable grouping cannot be realized."""


class ImproperColoring(DicolorError):
    """Assignment extraction was given a coloring that is not proper."""


class InvalidDecomposition(DicolorError):
    """A tree decomposition fails one of its structural invariants."""


class ParseError(DicolorError):
    """Malformed input text; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InternalInvariantError(DicolorError):
    """An invariant the algorithms guarantee was violated; indicates a bug."""
