"""Exception hierarchy. Everything raised by this package derives from SeqFppError."""


class SeqFppError(Exception):
    """Base class for all package errors."""


class InvalidVector(SeqFppError):
    """A coefficient vector contains NaN or infinite entries."""


class InvalidParameter(SeqFppError):
    """A space or operation parameter is out of its admissible range."""


class NotPolyhedral(SeqFppError):
    """An exact polyhedral computation was requested on a non-polyhedral ball."""


class DimensionCap(SeqFppError):
    """Exact enumeration would exceed the configured dimension cap."""


class NotInSpan(SeqFppError):
    """An ambient vector does not lie in the span of the basic sequence."""


class NotInSimplex(SeqFppError):
    """A coefficient vector violates the simplex constraints."""


class InvalidScaling(SeqFppError):
    """Scaling weights must be non-decreasing with values in (0, 1]."""


class InvalidSchedule(SeqFppError):
    """A decreasing weight schedule violates one of its three conditions."""


class DimensionMismatch(SeqFppError):
    """Two vectors that must share a length do not."""


class IdenticalSequences(SeqFppError):
    """The two index sequences of a separation bound coincide."""


class TruncationOverflow(SeqFppError):
    """A map application pushed support past the configured truncation cap."""


class EmptyInput(SeqFppError):
    """An enumeration received no candidate points."""


class LPError(SeqFppError):
    """Base class for linear-programming failures."""


class Infeasible(LPError):
    """The feasible region of a linear program is empty."""


class Unbounded(LPError):
    """The linear program objective is unbounded over the feasible region."""


class CycleSuspected(LPError):
    """The simplex iteration cap was hit (should not happen under Bland's rule)."""
