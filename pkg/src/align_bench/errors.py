"""Exception taxonomy for the workbench.

The CLI maps these onto its exit codes: parameter/format/dimension problems
are usage errors (exit 2), numerical breakdowns during construction or
simulation are exit 3, and verification failures are reported results rather
than exceptions (exit 4 is decided from the report).
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(WorkbenchError, ValueError):
    """A parameter is outside its documented domain (K < 3, negative budget, ...)."""


class DimensionError(WorkbenchError, ValueError):
    """Array shapes or file dimensions are inconsistent with each other."""


class FormatError(WorkbenchError, ValueError):
    """A channel/design file is malformed or violates a stored invariant."""


class SingularDiagonalError(WorkbenchError, ArithmeticError):
    """A diagonal operator has an entry too close to zero to invert."""

    def __init__(self, index: int, magnitude: float, eps: float):
        self.index = index
        self.magnitude = magnitude
        super().__init__(
            f"diagonal entry {index} has magnitude {magnitude:.3e} <= {eps:.3e}; "
            "operator is not invertible at this tolerance"
        )


class SingularMatrixError(WorkbenchError, ArithmeticError):
    """A square system is numerically singular at the working tolerance."""

    def __init__(self, message: str, condition: float):
        self.condition = condition
        super().__init__(f"{message} (condition indicator {condition:.3e})")


class DegenerateDesignError(WorkbenchError, RuntimeError):
    """The beamformer construction collapsed (rank-deficient columns)."""
