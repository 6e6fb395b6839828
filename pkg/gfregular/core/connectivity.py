"""
Connectivity of represented matroids: vertical connectivity, roundness,
kappa between disjoint sets and the linking minor that realises it.

Every exponential search runs over unions of parallel classes, since rank
data does not see parallel copies or loops.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

from gfregular.core import limits
from gfregular.core.errors import InternalCheckError, LabelError
from gfregular.core.linalg import _kernel_array, _matmul_array
from gfregular.core.matroid import Labels, RepMatroid, bits, same_rank_function

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerticalResult:
    """Outcome of a vertical connectivity test.

    ``order`` is the k' of the witnessed vertical k'-separation.
    """

    connected: bool
    separation: Optional[frozenset[str]] = None
    order: Optional[int] = None


@dataclass(frozen=True)
class RoundResult:
    round: bool
    hyperplanes: Optional[tuple[frozenset[str], frozenset[str]]] = None


@dataclass(frozen=True)
class LinkingResult:
    minor: RepMatroid
    deleted: tuple[str, ...]
    contracted: tuple[str, ...]
    kappa: int


# ---------------------------------------------------------------------------
# Vertical connectivity and roundness
# ---------------------------------------------------------------------------

def vertical_connectivity(m: RepMatroid, k: Optional[int] = None) -> VerticalResult:
    """Is *m* vertically *k*-connected?  ``k=None`` asks for roundness.

    A set A is a witness when ``lambda(A) < min(k, r(A), r(E - A))``.
    """
    classes, _ = m.class_masks()
    limits.require(len(classes), limits.active().max_classes, "number of parallel classes")
    if len(classes) < 2:
        return VerticalResult(True)
    rest = classes[1:]
    for sel in range(1, 1 << len(rest)):
        side = 0
        for i in bits(sel):
            side |= rest[i]
        ra = m.rank_mask(side)
        rb = m.rank_mask(m.full_mask ^ side)
        lam = ra + rb - m.rank()
        bound = min(ra, rb) if k is None else min(k, ra, rb)
        if lam < bound:
            logger.debug("vertical %d-separation found: %s", lam + 1, sorted(m.labels_of(side)))
            return VerticalResult(False, m.labels_of(side), lam + 1)
    return VerticalResult(True)


def hyperplane_masks(m: RepMatroid) -> list[int]:
    """Hyperplanes as closures of independent (r-1)-sets of class representatives."""
    r = m.rank()
    if r == 0:
        return []
    classes, loops = m.class_masks()
    if r == 1:
        return [loops]
    reps = [bits(c)[0] for c in classes]
    limits.require(math.comb(len(reps), r - 1), limits.active().max_hyperplane_subsets,
                   "number of (r-1)-subsets")
    field = m.field
    found: list[int] = []
    for combo in itertools.combinations(reps, r - 1):
        rep_mask = 0
        for j in combo:
            rep_mask |= 1 << j
        if any(rep_mask & h == rep_mask for h in found):
            continue
        normal = _kernel_array(field, m.basis[:, list(combo)].T)
        if normal.shape[0] != 1:
            continue
        values = _matmul_array(field, normal, m.basis)[0]
        hyperplane = 0
        for j, v in enumerate(values):
            if v == 0:
                hyperplane |= 1 << j
        found.append(hyperplane)
    return found


def is_round(m: RepMatroid) -> RoundResult:
    """True iff E(M) is not the union of two hyperplanes."""
    found = hyperplane_masks(m)
    for i, h1 in enumerate(found):
        for h2 in found[i + 1:]:
            if h1 | h2 == m.full_mask:
                return RoundResult(False, (m.labels_of(h1), m.labels_of(h2)))
    logger.debug("%r is round (%d hyperplanes)", m, len(found))
    return RoundResult(True)


# ---------------------------------------------------------------------------
# Kappa and Tutte linking
# ---------------------------------------------------------------------------

def _disjoint_masks(m: RepMatroid, a: Labels, b: Labels) -> tuple[int, int]:
    am, bm = m.mask(a), m.mask(b)
    if am & bm:
        raise LabelError(f"sets are not disjoint: {sorted(m.labels_of(am & bm))}")
    return am, bm


def kappa_witness(m: RepMatroid, a: Labels, b: Labels) -> tuple[int, frozenset[str]]:
    """``min lambda(Z)`` over ``A <= Z <= E - B`` with a minimising Z.

    Classes meeting A go into Z and classes meeting only B stay out; neither
    choice can raise lambda.  Loops go into Z.
    """
    am, bm = _disjoint_masks(m, a, b)
    classes, loops = m.class_masks()
    base = am | loops
    free: list[int] = []
    for cls in classes:
        if cls & am:
            base |= cls
        elif not cls & bm:
            free.append(cls)
    base &= ~bm
    limits.require(len(free), limits.active().max_classes, "number of free parallel classes")
    best, best_z = None, base
    for sel in range(1 << len(free)):
        z = base
        for i in bits(sel):
            z |= free[i]
        value = m.lam_mask(z)
        if best is None or value < best:
            best, best_z = value, z
    return best, m.labels_of(best_z)  # type: ignore[return-value]


def kappa(m: RepMatroid, a: Labels, b: Labels) -> int:
    return kappa_witness(m, a, b)[0]


def linking_minor(m: RepMatroid, a: Labels, b: Labels) -> LinkingResult:
    """A minor N on A u B with N|A = M|A, N|B = M|B and lambda_N(A) = kappa_M(A, B).

    Elements outside A u B are processed in label order; deletion is
    preferred whenever it keeps kappa.
    """
    am, bm = _disjoint_masks(m, a, b)
    a_labels, b_labels = m.labels_of(am), m.labels_of(bm)
    target = kappa(m, a_labels, b_labels)
    current = m
    deleted: list[str] = []
    contracted: list[str] = []
    for e in sorted(m.ground - a_labels - b_labels):
        candidate = current.delete(e)
        if kappa(candidate, a_labels, b_labels) == target:
            current = candidate
            deleted.append(e)
            continue
        spanned = current.closure(a_labels) | current.closure(b_labels)
        candidate = current.contract(e)
        if e in spanned or kappa(candidate, a_labels, b_labels) != target:
            raise InternalCheckError(f"neither M\\{e} nor M/{e} keeps kappa = {target}")
        current = candidate
        contracted.append(e)
        logger.debug("linking: contracted %s", e)

    if current.ground != a_labels | b_labels:
        raise InternalCheckError("linking minor has the wrong ground set")
    for side in (a_labels, b_labels):
        if not same_rank_function(current.restrict(sorted(side)), m.restrict(sorted(side))):
            raise InternalCheckError("linking minor changed a restriction")
    if current.lam(a_labels) != target:
        raise InternalCheckError("linking minor does not realise kappa")
    logger.info("linking minor: kappa=%d, %d deleted, %d contracted",
                target, len(deleted), len(contracted))
    return LinkingResult(current, tuple(deleted), tuple(contracted), target)
