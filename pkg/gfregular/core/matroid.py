"""
Represented matroids M(A).

A :class:`RepMatroid` keeps a full-row-rank representation of its matrix
and answers rank queries on bitmasks of ground-set positions, caching every
answer.  Labels are the public currency; masks are the internal one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import networkx as nx
import numpy as np

from gfregular.core import limits
from gfregular.core.errors import FieldMismatchError, LabelError
from gfregular.core.field import ExtSpec, Field, TowerField, field_of_order
from gfregular.core.linalg import (
    Mat,
    _kernel_array,
    _rank_array,
    _rref_array,
    projective_keys,
)
from gfregular.core.types import RankQuery, SimplifyQuery

logger = logging.getLogger(__name__)

Labels = Union[str, Iterable[str]]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> list[int]:
    """Positions of the set bits of *mask*, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class RepMatroid:
    """An F-represented matroid on a labelled ground set.

    Parameters
    ----------
    mat:
        The representing matrix.  Columns are the ground set, in order;
        missing labels default to ``e1..en``.
    """

    def __init__(self, mat: Mat) -> None:
        self._field = mat.field
        self._labels: tuple[str, ...] = mat.label_list()
        self._index = {label: i for i, label in enumerate(self._labels)}
        reduced, pivots = _rref_array(mat.field, mat.entries)
        if len(pivots) == mat.rows:
            basis = np.array(mat.entries, dtype=np.int64)
        else:
            basis = reduced[: len(pivots)]
        basis.setflags(write=False)
        self._basis = basis
        self._rank = len(pivots)
        self._n = len(self._labels)
        self._full = (1 << self._n) - 1
        self._rank_cache: dict[int, int] = {0: 0, self._full: self._rank}

    # ------------------------------------------------------------------
    # Basic accessors
    # ------------------------------------------------------------------

    @property
    def field(self) -> Field:
        return self._field

    @property
    def ext(self) -> Optional[ExtSpec]:
        return self._field.ext if isinstance(self._field, TowerField) else None

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def ground(self) -> frozenset[str]:
        return frozenset(self._labels)

    @property
    def size(self) -> int:
        return self._n

    @property
    def full_mask(self) -> int:
        return self._full

    @property
    def basis(self) -> np.ndarray:
        """Full-row-rank representation, columns in ground order."""
        return self._basis

    def matrix(self) -> Mat:
        return Mat(self._field, self._basis, self._labels)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LabelError(f"unknown ground-set label {label!r}") from None

    def mask(self, labels: Labels) -> int:
        if isinstance(labels, str):
            labels = (labels,)
        m = 0
        for label in labels:
            m |= 1 << self.index_of(label)
        return m

    def labels_of(self, mask: int) -> frozenset[str]:
        return frozenset(self._labels[i] for i in bits(mask))

    def sorted_labels(self, mask: int) -> tuple[str, ...]:
        """Labels of *mask* in ground order."""
        return tuple(self._labels[i] for i in bits(mask))

    def column(self, label: str) -> np.ndarray:
        return self._basis[:, self.index_of(label)]

    def __repr__(self) -> str:
        return f"RepMatroid({self._field.describe()}, |E|={self._n}, r={self._rank})"

    # ------------------------------------------------------------------
    # Rank and closure
    # ------------------------------------------------------------------

    def rank_mask(self, mask: int) -> int:
        cached = self._rank_cache.get(mask)
        if cached is None:
            cached = _rank_array(self._field, self._basis[:, bits(mask)])
            self._rank_cache[mask] = cached
        return cached

    def rank(self, labels: Optional[Labels] = None) -> int:
        if labels is None:
            return self._rank
        return self.rank_mask(self.mask(labels))

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        out = mask
        for i in range(self._n):
            bit = 1 << i
            if not mask & bit and self.rank_mask(mask | bit) == r:
                out |= bit
        return out

    def closure(self, labels: Labels) -> frozenset[str]:
        return self.labels_of(self.closure_mask(self.mask(labels)))

    def lam_mask(self, mask: int) -> int:
        """Connectivity function r(X) + r(E - X) - r(M)."""
        return self.rank_mask(mask) + self.rank_mask(self._full ^ mask) - self._rank

    def lam(self, labels: Labels) -> int:
        return self.lam_mask(self.mask(labels))

    def corank_mask(self, mask: int) -> int:
        """Dual rank r*(X) = |X| + r(E - X) - r(M)."""
        return popcount(mask) + self.rank_mask(self._full ^ mask) - self._rank

    def is_spanning_mask(self, mask: int) -> bool:
        return self.rank_mask(mask) == self._rank

    def is_cospanning_mask(self, mask: int) -> bool:
        return self.corank_mask(mask) == self._n - self._rank

    # ------------------------------------------------------------------
    # Minors
    # ------------------------------------------------------------------

    def minor(self, delete: Labels = (), contract: Labels = (), keep_loops: bool = False) -> "RepMatroid":
        """``M \\ delete / contract``; with *keep_loops* the contracted set stays as loops."""
        d = self.mask(delete)
        c = self.mask(contract)
        if d & c:
            raise LabelError(f"labels both deleted and contracted: {sorted(self.labels_of(d & c))}")
        field = self._field
        a = np.array(self._basis, dtype=np.int64)
        for j in bits(c):
            col = a[:, j]
            nz = np.flatnonzero(col)
            if nz.size == 0:
                continue
            i = int(nz[0])
            others = nz[1:]
            if others.size:
                factors = field.div(col[others], col[i])
                a[others] = field.sub(a[others], field.mul(factors[:, None], a[i][None, :]))
            a = np.delete(a, i, axis=0)
        removed = d if keep_loops else d | c
        keep = [j for j in range(self._n) if not removed >> j & 1]
        return RepMatroid(Mat(field, a[:, keep].reshape(a.shape[0], len(keep)),
                              tuple(self._labels[j] for j in keep)))

    def delete(self, labels: Labels) -> "RepMatroid":
        return self.minor(delete=labels)

    def contract(self, labels: Labels, keep_loops: bool = False) -> "RepMatroid":
        return self.minor(contract=labels, keep_loops=keep_loops)

    def restrict(self, labels: Labels) -> "RepMatroid":
        keep = self.mask(labels)
        return self.minor(delete=self.sorted_labels(self._full ^ keep))

    def dual(self) -> "RepMatroid":
        """M* represented by the annihilator of the row space."""
        if self._rank == 0:
            dual = np.eye(self._n, dtype=np.int64)
        else:
            dual = _kernel_array(self._field, self._basis)
        return RepMatroid(Mat(self._field, dual.reshape(-1, self._n), self._labels))

    # ------------------------------------------------------------------
    # Parallel classes and simplification
    # ------------------------------------------------------------------

    def parallel_classes(self) -> list[tuple[str, ...]]:
        """Nonloop parallel classes, ordered by their first element."""
        groups: dict[tuple[int, ...], list[int]] = {}
        for j, key in enumerate(projective_keys(self._field, self._basis)):
            if key is not None:
                groups.setdefault(key, []).append(j)
        return [tuple(self._labels[j] for j in idx) for idx in groups.values()]

    def class_masks(self) -> tuple[list[int], int]:
        """``(nonloop class masks, loop mask)``."""
        masks: dict[tuple[int, ...], int] = {}
        loops = 0
        for j, key in enumerate(projective_keys(self._field, self._basis)):
            if key is None:
                loops |= 1 << j
            else:
                masks[key] = masks.get(key, 0) | (1 << j)
        return list(masks.values()), loops

    def loops(self) -> frozenset[str]:
        return self.labels_of(self.class_masks()[1])

    def epsilon(self) -> int:
        return len(self.class_masks()[0])

    def simplify(self) -> "RepMatroid":
        """si(M): drop loops and keep the lexicographically least label of each class."""
        keep = {min(cls) for cls in self.parallel_classes()}
        return self.restrict([label for label in self._labels if label in keep])

    # ------------------------------------------------------------------
    # Flats
    # ------------------------------------------------------------------

    def flat_masks(self) -> list[int]:
        """All flats, by closing upward from cl(empty set)."""
        bound = limits.active().max_hyperplane_subsets
        start = self.closure_mask(0)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for flat in frontier:
                for i in range(self._n):
                    if flat >> i & 1:
                        continue
                    cover = self.closure_mask(flat | (1 << i))
                    if cover not in seen:
                        seen.add(cover)
                        nxt.append(cover)
                        limits.require(len(seen), bound, "number of flats")
            frontier = nxt
        return sorted(seen, key=lambda m: (self.rank_mask(m), bits(m)))

    def is_cyclic_mask(self, mask: int) -> bool:
        r = self.rank_mask(mask)
        return all(self.rank_mask(mask ^ (1 << i)) == r for i in bits(mask))

    def flats(self) -> list[frozenset[str]]:
        return [self.labels_of(m) for m in self.flat_masks()]

    def is_modular(self) -> bool:
        """Every pair of flats satisfies the modular rank equation."""
        flats = self.flat_masks()
        for i, f in enumerate(flats):
            for g in flats[i + 1:]:
                if self.rank_mask(f) + self.rank_mask(g) != self.rank_mask(f | g) + self.rank_mask(f & g):
                    return False
        return True


# ---------------------------------------------------------------------------
# Operation-level helpers
# ---------------------------------------------------------------------------

def rank_closure(m: RepMatroid, labels: Labels, which: RankQuery) -> Union[int, frozenset[str]]:
    if which == RankQuery.Rank:
        return m.rank(labels)
    return m.closure(labels)


def simplify_epsilon(m: RepMatroid, which: SimplifyQuery) -> Union[RepMatroid, int]:
    if which == SimplifyQuery.Simplify:
        return m.simplify()
    return m.epsilon()


def lam(m: RepMatroid, labels: Labels) -> int:
    return m.lam(labels)


def minor(m: RepMatroid, delete: Labels = (), contract: Labels = (), keep_loops: bool = False) -> RepMatroid:
    return m.minor(delete, contract, keep_loops)


@dataclass(frozen=True)
class MinorRecipe:
    """Labels to delete and to contract; applied by label, so any representation works."""

    delete: tuple[str, ...] = ()
    contract: tuple[str, ...] = ()

    def apply(self, m: RepMatroid) -> RepMatroid:
        return m.minor(self.delete, self.contract)

    def to_report(self) -> dict:
        return {"delete": list(self.delete), "contract": list(self.contract)}


def cyclic_flats(m: RepMatroid) -> list[frozenset[str]]:
    """Flats whose restriction has no coloops, ordered by rank then ground position."""
    return [m.labels_of(f) for f in m.flat_masks() if m.is_cyclic_mask(f)]


def same_rank_function(m: RepMatroid, n: RepMatroid) -> bool:
    """Exhaustive comparison of two rank functions on the same labels."""
    if m.ground != n.ground:
        return False
    limits.require(m.size, limits.active().max_exhaustive_ground, "ground set size")
    position = [n.index_of(label) for label in m.labels]
    for mask in range(1 << m.size):
        other = 0
        for i in bits(mask):
            other |= 1 << position[i]
        if m.rank_mask(mask) != n.rank_mask(other):
            return False
    return True


def is_pg(m: RepMatroid, n: int, q: int) -> bool:
    """True iff the simplification of *m* is PG(n-1, q).

    *m* must be over GF(q), or over a field with a GF(q) subfield in
    which every column is (projectively) confined.
    """
    field = m.field
    if field.order != q:
        sub = field.subfield_codes(q)
        for key in projective_keys(field, m.basis):
            if key is not None and not np.all(np.isin(key, sub)):
                raise FieldMismatchError(f"columns are not confined to GF({q})")
    return m.rank() == n and m.epsilon() == (q ** n - 1) // (q - 1)


def cycle_matroid(graph: nx.Graph, q: int = 2) -> RepMatroid:
    """M(G) from the signed incidence matrix over GF(q); edge ``u-v`` has +1 at u, -1 at v.

    Self-loops become zero columns.  Multigraph edges are labelled ``u-v-key``.
    """
    field = field_of_order(q)
    nodes = list(graph.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    if graph.is_multigraph():
        edges = [(u, v, f"{u}-{v}-{k}") for u, v, k in graph.edges(keys=True)]
    else:
        edges = [(u, v, f"{u}-{v}") for u, v in graph.edges()]
    a = np.zeros((len(nodes), len(edges)), dtype=np.int64)
    minus_one = int(field.neg(1))
    for j, (u, v, _) in enumerate(edges):
        if u != v:
            a[index[u], j] = 1
            a[index[v], j] = minus_one
    return RepMatroid(Mat(field, a, tuple(label for _, _, label in edges)))
