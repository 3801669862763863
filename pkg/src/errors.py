"""
Exception hierarchy for joinmat.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Optional, Tuple


class LatticeMatrixError(Exception):
    """Base class for all joinmat errors."""
    exit_code = 1


# Input errors (exit 1)

class InputError(LatticeMatrixError):
    """Malformed or inconsistent user input."""


class CycleError(InputError):
    """The declared relations violate antisymmetry."""


class UnknownElementError(InputError):
    """An element id is not part of the carrier."""


class DuplicateElementError(InputError):
    """An element occurs twice where distinct elements are required."""


class EmptySetError(InputError):
    """An operation needs a nonempty set."""


class MissingValueError(InputError, KeyError):
    """A function has no value at an element the computation needs."""

    def __init__(self, element: Any, name: str = "f"):
        self.element = element
        self.function_name = name
        super().__init__(f"{name} is not defined at {element!r}")

    def __str__(self) -> str:
        return self.args[0]


class DimensionError(InputError):
    """Matrix shapes are not conformable."""


class NotSquareError(DimensionError):
    """A square matrix was required."""


class ConsistencyError(LatticeMatrixError):
    """An internal self-check failed."""


# Singularity (exit 2)

class SingularMatrixError(LatticeMatrixError):
    """The matrix has determinant zero."""
    exit_code = 2


class ZeroPsiError(SingularMatrixError):
    """A Möbius-quotient inverse form would divide by a vanishing Psi value."""

    def __init__(self, element: Any):
        self.element = element
        super().__init__(f"Psi vanishes at {element!r}; the matrix is singular")


# Hypothesis violations (exit 3)

class HypothesisError(LatticeMatrixError):
    """A closure or function hypothesis of the chosen formula fails."""
    exit_code = 3


class NoBoundError(HypothesisError):
    """A required meet or join does not exist in the host poset."""


class SemimultiplicativityError(HypothesisError):
    """f(x)f(y) = f(x meet y)f(x join y) fails for some pair."""

    def __init__(self, witness: Tuple[Any, Any], message: Optional[str] = None):
        self.witness = witness
        super().__init__(message or f"f is not semimultiplicative at {witness!r}")


class ZeroValueError(HypothesisError):
    """f vanishes where 1/f is needed."""

    def __init__(self, element: Any):
        self.element = element
        super().__init__(f"f vanishes at {element!r}")


# Work cap (exit 4)

class CombinatorialBlowupError(LatticeMatrixError):
    """The Cauchy-Binet enumeration exceeds the configured cap."""
    exit_code = 4

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"Cauchy-Binet sum has {count} terms, above the cap of {cap}; "
            f"use --force or raise --cap"
        )
