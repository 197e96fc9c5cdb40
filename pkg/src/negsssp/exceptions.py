"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph input (bad vertex id, non-finite length, ...)."""


class NegativeCycleError(Exception):
    """Raised when a computation certifies a negative cycle.

    The certificate is available as ``cycle`` (a :class:`~negsssp.graph.Walk`
    that is closed and has negative total length).
    """

    def __init__(self, cycle, message=None):
        self.cycle = cycle
        super().__init__(message or f"negative cycle of length {cycle.length}")


class RetryableFailure(RuntimeError):
    """A randomized step missed its high-probability guarantee.

    Callers resample with fresh randomness; correctness never depends on
    the step succeeding.
    """


class EnvelopeTooLarge(RetryableFailure):
    pass


class VerificationError(AssertionError):
    """An internal certificate failed re-verification (implementation bug)."""
