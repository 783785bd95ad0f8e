"""Exception hierarchy shared by every beliefcore module."""


class BeliefcoreError(Exception):
    """Base class for all library errors."""


class DiagramError(BeliefcoreError, ValueError):
    """The diagram is structurally or numerically inconsistent."""


class CycleDetected(DiagramError):
    pass


class RowSumViolation(DiagramError):
    pass


class UnknownParent(DiagramError):
    pass


class DuplicateId(DiagramError):
    pass


class ShapeMismatch(DiagramError):
    pass


class Inconsistent(DiagramError):
    pass


class UnknownNode(BeliefcoreError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown node"


class EditError(DiagramError):
    pass


class HasChildren(EditError):
    pass


class ArcExists(EditError):
    pass


class NoSuchArc(EditError):
    pass


class DuplicateState(EditError):
    pass


class LastState(EditError):
    pass


class UnknownState(EditError):
    pass


class TransformError(DiagramError):
    pass


class WouldCreateCycle(TransformError):
    pass


class NotChance(TransformError):
    pass


class NotBarren(TransformError):
    pass


class NotDeterministic(TransformError):
    pass


class BadParams(BeliefcoreError, ValueError):
    pass


class BadEpsilon(BadParams):
    pass


class UnknownFixture(BeliefcoreError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown fixture"


class EvidenceError(BeliefcoreError, ValueError):
    """Evidence refers to a missing node, a non-chance node or a bad state."""


class ImpossibleEvidence(BeliefcoreError):
    """The declared evidence has probability zero under the network."""

    def __init__(self, message="impossible evidence", log=None):
        super().__init__(message)
        self.log = log


class TooLarge(BeliefcoreError):
    """A computation would exceed a configured size guard."""


class NotBeliefNet(BeliefcoreError, ValueError):
    pass


class NotPolytree(BeliefcoreError, ValueError):
    pass


class NotStrictlyPositive(BeliefcoreError, ValueError):
    pass


class SolveError(BeliefcoreError, ValueError):
    """Influence diagram cannot be evaluated as given."""


class NoValueNode(SolveError):
    pass


class MultipleValueNodes(SolveError):
    pass


class NotNoForgetting(SolveError):
    pass


class DecisionsUnordered(SolveError):
    pass


class ParseError(BeliefcoreError, ValueError):
    def __init__(self, line, column, reason):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class VersionUnsupported(ParseError):
    pass
