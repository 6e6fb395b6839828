"""
Family creation factory for the ``gen`` command and the acceptance suite.

Typical usage::

    family = FamilyFactory.create(FamilyKind.PG, [3, 2])
    family = FamilyFactory.create("hat", [3, 2], apex=True)
"""

from __future__ import annotations

import logging
from typing import Sequence, Union

from gfregular.core.errors import PreconditionError
from gfregular.core.geometry import (
    FamilyMatrix,
    ag_matrix,
    bar_matrix,
    hat_matrix,
    obstruction_member,
    pg_matrix,
)
from gfregular.core.types import FamilyKind, ObstructionMode

logger = logging.getLogger(__name__)

# Positional parameters per kind, as shown in usage messages.
_PARAMETERS: dict[FamilyKind, tuple[str, ...]] = {
    FamilyKind.PG: ("n", "q"),
    FamilyKind.AG: ("h", "q"),
    FamilyKind.HAT: ("n", "q"),
    FamilyKind.BAR: ("n", "q"),
    FamilyKind.OBSTRUCTION: ("q",),
}


class FamilyFactory:
    """Static factory mapping a kind name and integer parameters to a verified family."""

    @staticmethod
    def kind_from_name(name: Union[str, FamilyKind]) -> FamilyKind:
        if isinstance(name, FamilyKind):
            return name
        try:
            return FamilyKind[name.upper()]
        except KeyError:
            choices = ", ".join(k.name.lower() for k in FamilyKind)
            raise PreconditionError(f"unknown family {name!r}; expected one of {choices}") from None

    @staticmethod
    def parameters(kind: FamilyKind) -> tuple[str, ...]:
        return _PARAMETERS[kind]

    @staticmethod
    def create(
        kind: Union[str, FamilyKind],
        params: Sequence[int],
        apex: bool = False,
        index: int = 0,
    ) -> FamilyMatrix:
        """Build and verify one family member.

        Parameters:
            kind: Family name (``pg``, ``ag``, ``hat``, ``bar``, ``obstruction``).
            params: The integers listed by :meth:`parameters`.
            apex: For ``hat``, also emit the apex column ``h0``.
            index: For ``obstruction``, ``0`` is the canonical member;
                ``i > 0`` picks the i-th enumerated triple (q in {2, 3}).

        Raises:
            PreconditionError: Wrong parameter count or an out-of-range index.
            InternalCheckError: The generated matrix fails its own verifier.
        """
        kind = FamilyFactory.kind_from_name(kind)
        names = _PARAMETERS[kind]
        if len(params) != len(names):
            raise PreconditionError(
                f"{kind.name.lower()} takes {len(names)} parameters ({' '.join(names)}), got {len(params)}"
            )
        if kind == FamilyKind.PG:
            family = pg_matrix(params[0], params[1])
        elif kind == FamilyKind.AG:
            family = ag_matrix(params[0], params[1])
        elif kind == FamilyKind.HAT:
            family = hat_matrix(params[0], params[1], with_apex=apex)
        elif kind == FamilyKind.BAR:
            family = bar_matrix(params[0], params[1])
        elif index == 0:
            family = obstruction_member(params[0])
        else:
            members = obstruction_member(params[0], ObstructionMode.Enumerate)
            if not 1 <= index <= len(members):
                raise PreconditionError(f"obstruction index must lie in 1..{len(members)}, got {index}")
            family = members[index - 1]
        family.verify()
        logger.info("generated %r", family)
        return family
