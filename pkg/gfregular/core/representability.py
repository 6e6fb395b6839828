"""
Brute-force representability of tiny matroids over small fields.

The matroid is seen only through a :class:`RankOracle`.  The search places
one projective point per element and backtracks as soon as a closure
relation disagrees with the oracle.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from gfregular.core import limits
from gfregular.core.errors import InternalCheckError
from gfregular.core.field import Field
from gfregular.core.linalg import Mat
from gfregular.core.matroid import RepMatroid, bits, popcount

logger = logging.getLogger(__name__)

_AXIOM_GROUND = 10


class RankOracle:
    """A rank function on labelled elements, answered on bitmasks and cached."""

    def __init__(self, labels: Sequence[str], rank_fn: Callable[[int], int]) -> None:
        self.labels: tuple[str, ...] = tuple(labels)
        self._rank_fn = rank_fn
        self._cache: dict[int, int] = {}

    @classmethod
    def from_matroid(cls, m: RepMatroid) -> "RankOracle":
        return cls(m.labels, m.rank_mask)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def rank_mask(self, mask: int) -> int:
        value = self._cache.get(mask)
        if value is None:
            value = self._rank_fn(mask)
            self._cache[mask] = value
        return value

    def rank(self) -> int:
        return self.rank_mask(self.full_mask)

    def check_axioms(self) -> bool:
        """Bounds, monotonicity and submodularity over every subset (at most 10 elements)."""
        limits.require(self.size, _AXIOM_GROUND, "ground set size for axiom checks")
        for mask in range(1 << self.size):
            r = self.rank_mask(mask)
            if not 0 <= r <= popcount(mask):
                return False
            outside = [i for i in range(self.size) if not mask >> i & 1]
            for i in outside:
                ri = self.rank_mask(mask | 1 << i)
                if ri < r or ri > r + 1:
                    return False
                for j in outside:
                    if j > i and ri + self.rank_mask(mask | 1 << j) < r + self.rank_mask(mask | 1 << i | 1 << j):
                        return False
        return True


@dataclass(frozen=True)
class ProfileEntry:
    field: Field
    witness: Optional[Mat]

    @property
    def representable(self) -> bool:
        return self.witness is not None


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

class _Arithmetic:
    """Pure-Python scalar tables; the search touches single vectors only."""

    def __init__(self, field: Field) -> None:
        self.add, self.mul, self.inv = field.scalar_tables
        self.neg = [int(field.neg(x)) for x in range(field.order)]

    def rank(self, vectors: Iterable[Sequence[int]]) -> int:
        rows = [list(v) for v in vectors]
        add, mul, inv, neg = self.add, self.mul, self.inv, self.neg
        rank = 0
        width = len(rows[0]) if rows else 0
        for c in range(width):
            pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            lead = inv[rows[rank][c]]
            top = [mul[lead][x] for x in rows[rank]]
            rows[rank] = top
            for i in range(rank + 1, len(rows)):
                f = rows[i][c]
                if f:
                    rows[i] = [add[x][neg[mul[f][y]]] for x, y in zip(rows[i], top)]
            rank += 1
        return rank


def _circuit_counts(oracle: RankOracle) -> list[int]:
    counts = [0] * oracle.size
    for mask in range(1, 1 << oracle.size):
        size = popcount(mask)
        if oracle.rank_mask(mask) != size - 1:
            continue
        if all(oracle.rank_mask(mask ^ 1 << i) == size - 1 for i in bits(mask)):
            for i in bits(mask):
                counts[i] += 1
    return counts


def _points(order: int, r: int) -> list[tuple[int, ...]]:
    out = []
    for vec in itertools.product(range(order), repeat=r):
        nonzero = [c for c in vec if c]
        if nonzero and nonzero[0] == 1:
            out.append(vec)
    return out


def find_representation(oracle: RankOracle, field: Field, prune: bool = True) -> Optional[Mat]:
    """A matrix over *field* with the oracle's rank function, or ``None`` if none exists.

    With *prune*, a basis is sent to the unit vectors and the first
    dependent element to the 0/1 vector on its fundamental circuit; every
    other element then only tries points with the support its fundamental
    circuit dictates.
    """
    bounds = limits.active()
    limits.require(oracle.size, bounds.max_search_ground, "ground set size")
    limits.require(field.order, bounds.max_search_field, "field order")
    r = oracle.rank()
    limits.require(r, bounds.max_search_rank, "rank")
    n = oracle.size
    arith = _Arithmetic(field)

    loops = [i for i in range(n) if oracle.rank_mask(1 << i) == 0]
    counts = _circuit_counts(oracle)
    order = sorted((i for i in range(n) if i not in loops),
                   key=lambda i: (-counts[i], oracle.labels[i]))
    basis: list[int] = []
    for i in order:
        if oracle.rank_mask(_mask(basis + [i])) == len(basis) + 1:
            basis.append(i)
    if prune:
        order = basis + [i for i in order if i not in basis]

    # For each position: the independent sets among earlier elements, of
    # size below r, together with whether the element lies in their closure.
    checks: list[list[tuple[tuple[int, ...], bool]]] = []
    for k, e in enumerate(order):
        entry = []
        earlier = order[:k]
        for size in range(1, min(r - 1, k) + 1):
            for subset in itertools.combinations(earlier, size):
                mask = _mask(subset)
                if oracle.rank_mask(mask) == size:
                    entry.append((subset, oracle.rank_mask(mask | 1 << e) == size))
        checks.append(entry)

    all_points = _points(field.order, r)
    assigned: dict[int, tuple[int, ...]] = {}

    def candidates(k: int) -> list[tuple[int, ...]]:
        e = order[k]
        if not prune:
            return all_points
        if k < len(basis):
            unit = [0] * r
            unit[k] = 1
            return [tuple(unit)]
        support = [j for j, b in enumerate(basis)
                   if oracle.rank_mask(_mask(basis) ^ 1 << b | 1 << e) == r]
        if k == len(basis):
            return [tuple(1 if j in support else 0 for j in range(r))]
        return [p for p in all_points if all((p[j] != 0) == (j in support) for j in range(r))]

    def consistent(k: int, point: tuple[int, ...]) -> bool:
        for subset, in_closure in checks[k]:
            vectors = [assigned[i] for i in subset]
            spanned = arith.rank(vectors + [point]) == len(subset)
            if spanned != in_closure:
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        for point in candidates(k):
            if consistent(k, point):
                assigned[order[k]] = point
                if extend(k + 1):
                    return True
                del assigned[order[k]]
        return False

    logger.info("representability over %s: |E|=%d, r=%d, prune=%s",
                field.describe(), n, r, prune)
    if not extend(0):
        logger.info("no representation over %s", field.describe())
        return None

    columns = [assigned.get(i, (0,) * r) for i in range(n)]
    witness = Mat.from_columns(field, columns, oracle.labels, r)
    _verify_witness(oracle, witness)
    return witness


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _verify_witness(oracle: RankOracle, witness: Mat) -> None:
    m = RepMatroid(witness)
    for mask in range(1 << oracle.size):
        if m.rank_mask(mask) != oracle.rank_mask(mask):
            raise InternalCheckError(
                f"witness disagrees on {sorted(m.labels_of(mask))}: "
                f"{m.rank_mask(mask)} != {oracle.rank_mask(mask)}"
            )


def representability_profile(oracle: RankOracle, fields: Sequence[Field]) -> list[ProfileEntry]:
    return [ProfileEntry(field, find_representation(oracle, field)) for field in fields]


def representable_orders(profile: Sequence[ProfileEntry]) -> list[int]:
    return [entry.field.order for entry in profile if entry.representable]


__all__ = [
    "ProfileEntry",
    "RankOracle",
    "find_representation",
    "representability_profile",
    "representable_orders",
]
