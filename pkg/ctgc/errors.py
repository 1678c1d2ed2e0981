# ---
# File: ctgc/errors.py
# Purpose: Domain exception hierarchy shared by every stage of the pipeline.
#          The CLI maps CTGCError subclasses to a non-zero exit code.
# ---

from typing import Any, Optional


class CTGCError(Exception):
    """
    Base error for the condensation toolkit.

    Args:
        message: Human readable description
        details: Optional structured context (shapes, residuals, indices)
                 echoed by the CLI error handler
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if not self.details:
            return self.message
        extras = ", ".join(f"{key}={value}" for key, value in self.details.items())
        return f"{self.message} ({extras})"


# Graph input
class IndexOutOfRange(CTGCError):
    pass


class ShapeMismatch(CTGCError):
    pass


class InvalidValue(CTGCError):
    pass


class InvalidConfig(CTGCError):
    pass


class InsufficientEdges(CTGCError):
    pass


class FormatError(CTGCError):
    pass


# Linear algebra
class NotSymmetric(CTGCError):
    pass


class SolverDiverged(CTGCError):
    pass


# Differentiation and training
class NumericalOverflow(CTGCError):
    pass


class InvalidRoot(CTGCError):
    pass


class DegenerateLoss(CTGCError):
    pass


class InversionDiverged(CTGCError):
    pass


# Evaluation
class InsufficientLabels(CTGCError):
    pass
