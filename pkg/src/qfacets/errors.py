"""Exception types raised by the library."""


class QFacetsError(Exception):
    """Base class for all library errors."""


class DomainError(QFacetsError, ValueError):
    """A parameter lies outside the domain where the quantity is defined."""


class ValidityError(QFacetsError, ValueError):
    """A matrix or vector does not describe a physical qubit state."""


class UnsupportedDimensionError(QFacetsError, ValueError):
    """Only qubits (d = 2) are supported."""


class CompletenessError(QFacetsError, ValueError):
    """Kraus operators do not sum to the identity.

    Attributes:
        deviation: max-entry norm of ``sum(K^dag K) - I``.
    """

    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"Kraus set is not complete (deviation {self.deviation:.3e})")


class SingularityError(QFacetsError, ArithmeticError):
    """A decoherence rate diverges at (or next to) the requested point.

    Attributes:
        location: abscissa of the nearest singularity (time t or parameter p).
    """

    def __init__(self, location: float, message: str | None = None):
        self.location = float(location)
        super().__init__(message or f"decoherence rate is singular near {self.location:.12g}")


class InputError(QFacetsError, ValueError):
    """Malformed input: unsorted series, invalid ensemble, bad configuration."""
