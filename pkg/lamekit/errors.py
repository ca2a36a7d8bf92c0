"""Exception hierarchy shared by every lamekit module.

All library errors derive from `LameError`. Precondition violations are also
`ValueError` instances and convergence failures are also `RuntimeError`
instances, so callers that only know the builtin exceptions still catch them.
"""


class LameError(Exception):
    """Base class for all lamekit errors."""


class DomainError(LameError, ValueError):
    """An argument lies outside the domain of the requested operation.

    Examples:
        >>> modulus_from_k(1.5)  # raises DomainError
    """


class ConvergenceError(LameError, RuntimeError):
    """An iterative method failed to reach its tolerance."""


class TerminatingSequenceError(LameError):
    """A coefficient sequence has finite support, so it has no recessive ratio.

    Raised for Lamé polynomials and algebraic Lamé functions, whose expansion
    coefficients vanish identically beyond some index.

    Attributes:
        last_nonzero: Index of the last nonzero coefficient.
    """

    def __init__(self, last_nonzero: int) -> None:
        """Record where the sequence terminates."""
        self.last_nonzero = last_nonzero
        super().__init__(f"terminating sequence: coefficients vanish beyond index {last_nonzero}")


class WindingRefusedError(LameError):
    """The series nearly vanishes on the unit circle, so its winding number is not trustworthy.

    Attributes:
        min_modulus: Smallest modulus of the series seen on the circle.
        threshold: Refusal threshold that was applied.
    """

    def __init__(self, min_modulus: float, threshold: float) -> None:
        """Record the offending modulus."""
        self.min_modulus = min_modulus
        self.threshold = threshold
        super().__init__(f"refusing winding count: min |v| on |eta|=1 is {min_modulus:.3e} < {threshold:.3e}")
