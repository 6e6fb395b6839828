"""
Size bounds for the exponential searches.

The active :class:`Limits` instance is module state.  The CLI installs one
built from the environment; tests use :func:`override`.
"""

from __future__ import annotations

import dataclasses
import os
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from gfregular.core.errors import PreconditionError, SizeBoundError


# Environment variable -> Limits field
_ENV_FIELDS: dict[str, str] = {
    "GFREGULAR_MAX_CLASSES": "max_classes",
    "GFREGULAR_MAX_FIELD_ORDER": "max_field_order",
    "GFREGULAR_MAX_SEARCH_FIELD": "max_search_field",
    "GFREGULAR_MAX_EXHAUSTIVE_GROUND": "max_exhaustive_ground",
}


@dataclass(frozen=True)
class Limits:
    """Hard bounds that keep desk-scale runs in seconds."""

    max_field_order: int = 1 << 16
    max_classes: int = 24
    max_exhaustive_ground: int = 16
    max_search_field: int = 16
    max_search_ground: int = 12
    max_search_rank: int = 4
    max_equivalence_rows: int = 6
    max_columns: int = 4096
    max_hyperplane_subsets: int = 250_000

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Limits":
        """Build limits from ``GFREGULAR_*`` environment variables."""
        environ = os.environ if environ is None else environ
        changes: dict[str, int] = {}
        for var, field_name in _ENV_FIELDS.items():
            raw = environ.get(var)
            if raw is None or raw.strip() == "":
                continue
            try:
                value = int(raw)
            except ValueError:
                raise PreconditionError(f"{var} must be an integer, got {raw!r}") from None
            if value <= 0:
                raise PreconditionError(f"{var} must be positive, got {value}")
            changes[field_name] = value
        return dataclasses.replace(cls(), **changes)


_active: Limits = Limits()


def active() -> Limits:
    """Return the limits currently in force."""
    return _active


def configure(limits: Limits) -> None:
    """Install *limits* as the active bounds."""
    global _active
    _active = limits


@contextmanager
def override(**changes: int) -> Iterator[Limits]:
    """Temporarily replace selected bounds."""
    global _active
    previous = _active
    _active = dataclasses.replace(previous, **changes)
    try:
        yield _active
    finally:
        _active = previous


def require(value: int, bound: int, what: str) -> None:
    """Raise :class:`SizeBoundError` when ``value > bound``."""
    if value > bound:
        raise SizeBoundError(f"{what} is {value}, above the configured bound {bound}")
