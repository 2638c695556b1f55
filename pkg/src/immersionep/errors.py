"""Exception types shared across the package."""


class ImmersionEPError(Exception):
    """Base class for all package errors."""


class NotIncident(ImmersionEPError):
    """Two edge instances do not share an endpoint (or are the same instance)."""


class MissingEdge(ImmersionEPError):
    """An edge reference points at a pair/index that is not in the graph."""


class BadDegree(ImmersionEPError):
    """Vertex does not have the multidegree required by the operation."""


class BadSize(ImmersionEPError):
    """Generator parameter outside its admissible range."""


class Infeasible(ImmersionEPError):
    """Requested random instance exceeds capacity."""


class MalformedModel(ImmersionEPError):
    """Model maps mention vertices or edges absent from the graphs."""


class BudgetExhausted(ImmersionEPError):
    """Search ran out of nodes before reaching a definitive answer."""


class InvalidDecomposition(ImmersionEPError):
    """Decomposition violates one of its defining clauses."""


class InvalidNode(ImmersionEPError):
    """Tree node index out of range."""


class TooLarge(ImmersionEPError):
    """Instance exceeds the cap of an exact solver."""


class IterationBudgetExceeded(ImmersionEPError):
    """Defensive guard: a rewriting loop did not settle within its budget."""


class Disconnected(ImmersionEPError):
    """Operation requires a connected graph."""


class UnknownEdge(ImmersionEPError):
    """Edge outside the recorded mapping."""


class ParseError(ImmersionEPError):
    """Malformed graph file; message carries the line number."""
