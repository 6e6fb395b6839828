"""
Tangles of small order on small matroids.

A :class:`Tangle` stores its small sets as a predicate on bitmasks of the
host's ground set.  Exhaustive work (axiom checks, the rank function of the
tangle matroid) enumerates every subset and is bounded by
``max_exhaustive_ground``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np

from gfregular.core import limits
from gfregular.core.errors import PreconditionError
from gfregular.core.matroid import Labels, MinorRecipe, RepMatroid, bits, popcount, same_rank_function
from gfregular.core.types import TangleAxiom

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TangleCheck:
    valid: bool
    axiom: Optional[TangleAxiom] = None
    witness: tuple[frozenset[str], ...] = ()


@dataclass(frozen=True, eq=False)
class Tangle:
    """Small sets of order ``order`` on ``host``, given by ``small(mask)``."""

    host: RepMatroid
    order: int
    small: Callable[[int], bool]
    description: str = ""

    @classmethod
    def from_sets(cls, host: RepMatroid, order: int, sets: Iterable[Labels],
                  description: str = "explicit") -> "Tangle":
        masks = frozenset(host.mask(s) for s in sets)
        return cls(host, order, masks.__contains__, description)

    def is_small(self, labels: Labels) -> bool:
        return self.small(self.host.mask(labels))

    # ------------------------------------------------------------------
    # Exhaustive tables
    # ------------------------------------------------------------------

    @cached_property
    def small_table(self) -> np.ndarray:
        """``small_table[mask]`` for every subset of the ground set."""
        limits.require(self.host.size, limits.active().max_exhaustive_ground, "ground set size")
        return np.fromiter((self.small(mask) for mask in range(1 << self.host.size)),
                           dtype=bool, count=1 << self.host.size)

    @cached_property
    def kappa_table(self) -> np.ndarray:
        """kappa_T for every subset, by a superset-minimum sweep."""
        n = self.host.size
        cap = self.order - 1
        best = np.full(1 << n, np.iinfo(np.int64).max, dtype=np.int64)
        small = np.flatnonzero(self.small_table)
        best[small] = [self.host.lam_mask(int(mask)) for mask in small]
        masks = np.arange(1 << n)
        for i in range(n):
            lower = masks[(masks >> i & 1) == 0]
            best[lower] = np.minimum(best[lower], best[lower | 1 << i])
        return np.minimum(best, cap)

    def maximal_small_masks(self) -> list[int]:
        small = [int(m) for m in np.flatnonzero(self.small_table)]
        small_set = set(small)
        n = self.host.size
        return [m for m in small
                if not any(m | 1 << i in small_set for i in range(n) if not m >> i & 1)]


# ---------------------------------------------------------------------------
# T_k(M)
# ---------------------------------------------------------------------------

def _t_k_predicate(m: RepMatroid, k: int) -> Callable[[int], bool]:
    """(k-1)-separating, not spanning, and E - X dependent."""
    r, full = m.rank(), m.full_mask

    def small(mask: int) -> bool:
        rest = full ^ mask
        return (
            m.lam_mask(mask) < k - 1
            and m.rank_mask(mask) < r
            and m.rank_mask(rest) < popcount(rest)
        )
    return small


def t_k_tangle(m: RepMatroid, k: int) -> Tangle:
    return Tangle(m, k, _t_k_predicate(m, k), f"T_{k}")


def t_k_sets(m: RepMatroid, k: int) -> list[frozenset[str]]:
    """Members of T_k(M) that are unions of parallel classes (loops left out)."""
    if k <= 1:
        return []
    classes, _ = m.class_masks()
    limits.require(len(classes), limits.active().max_classes, "number of parallel classes")
    small = _t_k_predicate(m, k)
    out = []
    for sel in range(1 << len(classes)):
        mask = 0
        for i in bits(sel):
            mask |= classes[i]
        if small(mask):
            out.append(m.labels_of(mask))
    logger.debug("T_%d: %d class unions", k, len(out))
    return out


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

def is_tangle(t: Tangle) -> TangleCheck:
    """Check the three tangle axioms exhaustively, in order.

    T1: every small set has lambda < order - 1, and every set X with
    lambda(X) < order - 1 has X or E - X small.
    T2: no three small sets (repetition allowed) cover E.
    T3: E - {e} is never small.
    """
    m = t.host
    full = m.full_mask
    table = t.small_table
    for mask in range(1 << m.size):
        separating = m.lam_mask(mask) < t.order - 1
        if table[mask] and not separating:
            return TangleCheck(False, TangleAxiom.T1, (m.labels_of(mask),))
        if separating and not table[mask] and not table[full ^ mask]:
            return TangleCheck(False, TangleAxiom.T1, (m.labels_of(mask),))
    maximal = t.maximal_small_masks()
    for a, b, c in itertools.combinations_with_replacement(maximal, 3):
        if a | b | c == full:
            return TangleCheck(False, TangleAxiom.T2, tuple(m.labels_of(x) for x in (a, b, c)))
    for i in range(m.size):
        if table[full ^ 1 << i]:
            return TangleCheck(False, TangleAxiom.T3, (m.labels_of(full ^ 1 << i),))
    return TangleCheck(True)


def induced_tangle(m: RepMatroid, recipe: MinorRecipe, t_n: Tangle) -> Tangle:
    """``{X : lambda_M(X) < order - 1 and X meet E(N) is small in T_N}`` for N = recipe(M).

    Raises:
        PreconditionError: the recipe does not produce the host of *t_n*.
    """
    n = recipe.apply(m)
    if not same_rank_function(n, t_n.host):
        raise PreconditionError("minor recipe does not yield the tangle's host")
    order = t_n.order
    position = {i: t_n.host.index_of(label) for i, label in enumerate(m.labels)
                if label in n.ground}

    def small(mask: int) -> bool:
        if m.lam_mask(mask) >= order - 1:
            return False
        inner = 0
        for i in bits(mask):
            j = position.get(i)
            if j is not None:
                inner |= 1 << j
        return t_n.small(inner)

    return Tangle(m, order, small, f"induced from {t_n.description}")


# ---------------------------------------------------------------------------
# The tangle matroid
# ---------------------------------------------------------------------------

def tangle_rank(t: Tangle, labels: Labels) -> int:
    return int(t.kappa_table[t.host.mask(labels)])


def tangle_matroid_check(t: Tangle) -> bool:
    """kappa_T is the rank function of a matroid of rank order - 1."""
    kappa = t.kappa_table
    n = t.host.size
    masks = np.arange(1 << n)
    if kappa[0] != 0 or kappa[-1] != t.order - 1:
        return False
    for i in range(n):
        lower = masks[(masks >> i & 1) == 0]
        step = kappa[lower | 1 << i] - kappa[lower]
        if np.any((step < 0) | (step > 1)):
            return False
        for j in range(i + 1, n):
            both = lower[(lower >> j & 1) == 0]
            lhs = kappa[both | 1 << i] + kappa[both | 1 << j]
            rhs = kappa[both | 1 << i | 1 << j] + kappa[both]
            if np.any(lhs < rhs):
                return False
    return True
