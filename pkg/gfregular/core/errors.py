"""
Exception hierarchy for gfregular.

Every error derives from :class:`GFRegularError` and from the builtin that
matches its meaning, so ``except ValueError`` style callers keep working.
"""

from __future__ import annotations

from typing import Optional


class GFRegularError(Exception):
    """Base class for all gfregular errors."""


class FieldError(GFRegularError, ValueError):
    """Invalid field parameters or element codes."""


class FieldMismatchError(FieldError):
    """Operands live over different fields, or outside a required subfield."""


class DimensionError(GFRegularError, ValueError):
    """Shape or ambient-dimension mismatch."""


class SingularMatrixError(GFRegularError, ValueError):
    """A matrix that must be invertible is singular."""


class LabelError(GFRegularError, KeyError):
    """Unknown, duplicated or overlapping ground-set labels."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep messages readable.
        return str(self.args[0]) if self.args else ""


class PreconditionError(GFRegularError, ValueError):
    """A documented precondition of an operation does not hold."""


class SizeBoundError(GFRegularError, ValueError):
    """A configured size bound would be exceeded."""


class InternalCheckError(GFRegularError, RuntimeError):
    """A construction failed the recheck of its own postcondition."""


class MatrixFormatError(GFRegularError, ValueError):
    """Malformed matrix file."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
