"""
Constructive algebra relating GF(q)- and GF(q^2)-matrices.

Each construction rechecks its own conclusion before returning and raises
:class:`~gfregular.core.errors.InternalCheckError` if the recheck fails.
Violated inputs raise :class:`~gfregular.core.errors.PreconditionError`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gfregular.core.errors import (
    DimensionError,
    FieldMismatchError,
    InternalCheckError,
    PreconditionError,
)
from gfregular.core.field import ExtSpec, FieldSpec, TowerField, quadratic_extension
from gfregular.core.linalg import (
    Mat,
    Subspace,
    _inverse_array,
    _kernel_array,
    _matmul_array,
    _rank_array,
    _rref_array,
)
from gfregular.core.matroid import RepMatroid, is_pg

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# L-subspaces
# ---------------------------------------------------------------------------

def l_subspace(x: Sequence[int], ext: ExtSpec) -> Subspace:
    """L(x) = span over GF(q) of ``u`` and ``v``, where ``x = u + w*v`` entrywise."""
    x = np.asarray(x, dtype=np.int64)
    ext.field.check_codes(x)
    u, v = ext.field.split(x)
    return Subspace.span(ext.base, [u, v], x.shape[0])


# ---------------------------------------------------------------------------
# Confining a projective geometry to GF(q)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Confinement:
    """``transform . A . diag(scalars) == confined``, with *confined* over GF(q)."""

    transform: Mat
    scalars: tuple[int, ...]
    confined: Mat


def confine_pg(a: Mat, n: int, q: int) -> Confinement:
    """Bring a representation of PG(n-1, q) into the GF(q) subfield.

    The first basis of the columns (leftmost pivots) is sent to the standard
    basis and the first column with full support in that basis to the
    all-ones vector; every column is then scaled to a leading 1.
    """
    field = a.field
    if n < 3:
        raise PreconditionError(f"confinement needs n >= 3, got {n}")
    if a.rows != n:
        raise PreconditionError(f"expected {n} rows, got {a.rows}")
    sub = a.field.subfield_codes(q)
    if np.all(np.isin(a.entries, sub)) and is_pg(RepMatroid(a), n, q):
        return Confinement(Mat.identity(field, n), (1,) * a.cols, a)

    _, pivots = _rref_array(field, a.entries)
    if len(pivots) != n:
        raise PreconditionError("columns do not span: not a PG(n-1,q) representation")
    basis_inv = _inverse_array(field, a.entries[:, pivots])
    coords = _matmul_array(field, basis_inv, a.entries)
    full = [j for j in range(a.cols) if np.all(coords[:, j] != 0)]
    if not full:
        raise PreconditionError("no frame column: not a PG(n-1,q) representation")
    frame = coords[:, full[0]]
    transform = field.mul(field.inv(frame)[:, None], basis_inv)
    image = _matmul_array(field, transform, a.entries)

    nonzero = image != 0
    if not np.all(nonzero.any(axis=0)):
        raise PreconditionError("representation has loops: not a PG(n-1,q) representation")
    lead = image[nonzero.argmax(axis=0), np.arange(a.cols)]
    scalars = field.inv(lead)
    confined = field.mul(image, scalars[None, :])
    if not np.all(np.isin(confined, sub)):
        raise PreconditionError(f"frame normalisation does not land in GF({q})")
    result = Mat(field, confined, a.labels)
    if not is_pg(RepMatroid(result), n, q):
        raise PreconditionError(f"columns do not form PG({n - 1},{q})")
    logger.debug("confined PG(%d,%d) with frame column %d", n - 1, q, full[0])
    return Confinement(Mat(field, transform), tuple(int(s) for s in scalars), result)


# ---------------------------------------------------------------------------
# A GF(q)-vector inside an F-subspace
# ---------------------------------------------------------------------------

def _tower_of(field) -> ExtSpec:
    if not isinstance(field, TowerField):
        raise FieldMismatchError(f"{field.describe()} is not a quadratic tower")
    return field.ext


def subfield_vector_in_span(v: Subspace, u: Subspace) -> np.ndarray:
    """A nonzero GF(q)-vector of V lying in the GF(q^2)-subspace U.

    Needs ``2 dim U > dim V`` and ``U`` inside the F-span of ``V``.  Writing
    elements of span_F(V) as ``sum (l_i + w m_i) b_i`` identifies them with
    GF(q)^(2h); U becomes a 2j-dimensional space there and V the
    h-dimensional space ``m = 0``, so the two meet nontrivially.
    """
    ext = _tower_of(u.field)
    base, field = ext.base, ext.field
    if v.field != base:
        raise FieldMismatchError("V must be a subspace over the base field")
    if v.ambient != u.ambient:
        raise DimensionError(f"ambient dimensions {v.ambient} and {u.ambient} differ")
    h, j = v.dim, u.dim
    if 2 * j <= h:
        raise PreconditionError(f"need 2*dim U > dim V, got dim U = {j}, dim V = {h}")
    if not v.embed_into(field).contains_subspace(u):
        raise PreconditionError("U is not contained in the F-span of V")

    pivots = list(v.pivots)
    rows = []
    for vec in u.basis:
        for scaled in (vec, field.mul(field.omega, vec)):
            lam, mu = field.split(scaled[pivots])
            rows.append(np.concatenate([lam, mu]))
    phi_u = Subspace(base, 2 * h, np.array(rows, dtype=np.int64))
    phi_v = Subspace(base, 2 * h, np.hstack([np.eye(h, dtype=np.int64),
                                             np.zeros((h, h), dtype=np.int64)]))
    meet = phi_u.intersect(phi_v)
    if meet.dim == 0:
        raise InternalCheckError("coordinate spaces meet trivially")
    result = _matmul_array(base, meet.basis[:1, :h], v.basis)[0]
    if not result.any() or not v.contains(result) or not u.contains(result):
        raise InternalCheckError("subfield vector failed its membership recheck")
    return result


# ---------------------------------------------------------------------------
# Rows that become GF(q)-rows
# ---------------------------------------------------------------------------

def _base_pair(a: Mat, b: Mat) -> tuple[FieldSpec, ExtSpec]:
    if not isinstance(a.field, FieldSpec) or b.field != a.field:
        raise FieldMismatchError("A and B must be matrices over the same base field")
    if a.shape != b.shape:
        raise DimensionError(f"A has shape {a.shape} but B has shape {b.shape}")
    return a.field, quadratic_extension(a.field)


def realify_rows(a: Mat, b: Mat, h: int) -> Mat:
    """A rank-h matrix Q over GF(q^2) with ``Q (A + w B)`` over GF(q).

    ``(Q1 | Q2)`` is the canonical basis of the left kernel of ``(A ; B)``
    and ``Q = (w - t) Q1 + Q2``.
    """
    base, ext = _base_pair(a, b)
    field = ext.field
    d = a.rows
    if not 0 <= h <= d:
        raise PreconditionError(f"h must lie in [0, {d}], got {h}")
    combined = field.join(a.entries, b.entries)
    if _rank_array(field, combined) != d:
        raise PreconditionError("A + wB must have full row rank")
    stacked = np.vstack([a.entries, b.entries])
    if _rank_array(base, stacked) != 2 * d - h:
        raise PreconditionError(f"rank of (A; B) must be {2 * d - h}")
    if h == 0:
        return Mat.zeros(field, 0, d)

    left = Subspace(base, 2 * d, _kernel_array(base, stacked.T)).basis
    q1, q2 = left[:, :d], left[:, d:]
    coef = field.sub(field.omega, ext.t)
    q = field.add(field.mul(coef, q1), q2)
    product = _matmul_array(field, q, combined)
    if _rank_array(field, q) != h or not np.all(ext.in_subfield(product)):
        raise InternalCheckError("realified rows failed their recheck")
    return Mat(field, q)


def zero_rows_normalize(a: Mat, b: Mat, p: Mat, h: int) -> tuple[Mat, Mat]:
    """Row-reduce ``(A + w B ; P)`` keeping P so that B' has h leading zero rows."""
    base, ext = _base_pair(a, b)
    field = ext.field
    if p.field != base or p.cols != a.cols:
        raise DimensionError("P must be a base-field matrix with the same columns as A")
    d, n = a.shape
    m = p.rows
    if not 0 <= h <= d:
        raise PreconditionError(f"h must lie in [0, {d}], got {h}")
    combined = field.join(a.entries, b.entries)
    if _rank_array(field, np.vstack([combined, p.entries])) != m + d:
        raise PreconditionError("(A + wB ; P) must have full row rank")
    if _rank_array(base, p.entries) != m:
        raise PreconditionError("P must have full row rank")
    if _rank_array(base, np.vstack([a.entries, b.entries, p.entries])) > m + 2 * d - h:
        raise PreconditionError(f"rank of (A; B; P) exceeds {m + 2 * d - h}")

    zero_rows = [i for i in range(d) if not b.entries[i].any()]
    if zero_rows[:h] == list(range(h)):
        return a, b
    if len(zero_rows) >= h:
        order = zero_rows + [i for i in range(d) if i not in zero_rows]
        return Mat(base, a.entries[order]), Mat(base, b.entries[order])

    a_t = np.vstack([a.entries, p.entries])
    b_t = np.vstack([b.entries, np.zeros((m, n), dtype=np.int64)])
    h_t = 2 * (d + m) - _rank_array(base, np.vstack([a_t, b_t]))
    q = realify_rows(Mat(base, a_t), Mat(base, b_t), h_t).entries
    q_part = q[:, :d]

    chosen: list[int] = []
    for i in range(h_t):
        if _rank_array(field, q_part[chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == h:
            break
    if len(chosen) < h:
        raise InternalCheckError("realified rows do not reach h independent rows")
    top = _matmul_array(field, q[chosen], np.vstack([combined, p.entries]))

    identity = np.eye(d, dtype=np.int64)
    keep: list[int] = []
    for i in range(d):
        if len(keep) == d - h:
            break
        trial = np.vstack([q_part[chosen], identity[keep + [i]]])
        if _rank_array(field, trial) == h + len(keep) + 1:
            keep.append(i)

    a_new = np.vstack([top, a.entries[keep]])
    b_new = np.vstack([np.zeros((h, n), dtype=np.int64), b.entries[keep]])
    before = Subspace(field, n, np.vstack([combined, p.entries]))
    after = Subspace(field, n, np.vstack([field.join(a_new, b_new), p.entries]))
    if not np.all(ext.in_subfield(top)) or before != after or len(keep) != d - h:
        raise InternalCheckError("zero-row normalisation failed its recheck")
    return Mat(base, a_new), Mat(base, b_new)
