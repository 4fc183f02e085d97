"""Shared exception types."""


class NumericalCheckError(RuntimeError):
    """A computed quantity violated one of the package's numerical guarantees.

    Raised when a result that should be real, convergent, or within a
    documented tolerance fails its internal check; distinct from
    ValueError, which flags bad arguments before any computation runs.
    """
