"""Named domain errors shared by all modules.

Every error that can reach the command line carries a stable ``name`` used
verbatim in reports, so that each CLI failure maps to exactly one module
error.
"""


class DomainError(Exception):
    """Base class for all recoverable, named domain errors."""

    name = "domain-error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.name)


class MalformedSyntax(DomainError):
    name = "malformed-syntax"


class DimensionMismatch(DomainError):
    name = "dimension-mismatch"


class ZeroObjective(DomainError):
    name = "zero-objective-vector"


class ZeroDirection(DomainError):
    name = "zero-direction"


class NotSolvable(DomainError):
    name = "not-solvable"


class InfeasiblePoint(DomainError):
    name = "infeasible-point"


class NotInDomS(DomainError):
    name = "not-in-domS"


class InfeasibleProblem(DomainError):
    name = "infeasible"


class UnboundedScalarization(DomainError):
    name = "unbounded-scalarization"


class NonpositiveWeight(DomainError):
    name = "nonpositive-weight"


class AnchorNotInGraph(DomainError):
    name = "anchor-not-in-graph"


class AnchorNotOnFront(DomainError):
    name = "anchor-not-on-front"


class AnchorNotOptimal(DomainError):
    name = "anchor-not-optimal"


class LipPUnsupported(DomainError):
    name = "q-ge-2-lipP-unsupported"


class NotDualConsistent(DomainError):
    name = "not-dual-consistent"


class SingleObjectiveRequired(DomainError):
    name = "single-objective-required"


class OnDomainBoundary(DomainError):
    name = "on-domain-boundary"


class EmptySet(DomainError):
    name = "empty-set"


class InternalError(Exception):
    """An invariant the implementation guarantees was violated: a bug."""
