"""
Dense exact linear algebra over any :class:`~gfregular.core.field.Field`.

:class:`Mat` is an immutable matrix of element codes with optional column
labels; :class:`Subspace` is a row space kept as its canonical RREF basis.
The ``_*_array`` kernels work on raw code arrays and are shared with the
matroid layer, which calls them in tight loops.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from gfregular.core import limits
from gfregular.core.errors import (
    DimensionError,
    FieldMismatchError,
    InternalCheckError,
    LabelError,
    PreconditionError,
    SingularMatrixError,
)
from gfregular.core.field import Elem, Field, TowerField
from gfregular.core.types import SubspaceOp

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Array kernels
# ---------------------------------------------------------------------------

def _rref_array(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Canonical RREF of *a* (leftmost pivots) and its pivot columns."""
    a = np.array(a, dtype=np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = field.mul(field.inv(a[r, c]), a[r])
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = field.sub(a[others], field.mul(col[others, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_array(field: Field, a: np.ndarray) -> int:
    """Rank by forward elimination only."""
    a = np.array(a, dtype=np.int64)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        below = a[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = r + 1 + hit
            factors = field.div(below[hit], a[r, c])
            a[idx] = field.sub(a[idx], field.mul(factors[:, None], a[r][None, :]))
        r += 1
    return r


def _matmul_array(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.add(out, field.mul(a[:, k, None], b[None, k, :]))
    return out


def _kernel_array(field: Field, a: np.ndarray) -> np.ndarray:
    """Basis (rows) of the right null space of *a*."""
    cols = a.shape[1]
    reduced, pivots = _rref_array(field, a)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = field.neg(reduced[row, f])
    return basis


def _inverse_array(field: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"cannot invert a {a.shape} matrix")
    reduced, pivots = _rref_array(field, np.hstack([a, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return reduced[:, n:]


def projective_keys(field: Field, a: np.ndarray) -> list[Optional[tuple[int, ...]]]:
    """Per column: the column scaled so its first nonzero entry is 1 (``None`` for zero)."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[1] == 0:
        return []
    if a.shape[0] == 0:
        return [None] * a.shape[1]
    nz = a != 0
    has = nz.any(axis=0)
    first = nz.argmax(axis=0)
    lead = a[first, np.arange(a.shape[1])]
    scale = field.inv(np.where(has, lead, 1))
    normed = field.mul(a, scale[None, :])
    return [tuple(normed[:, j].tolist()) if has[j] else None for j in range(a.shape[1])]


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Mat:
    """An immutable matrix over *field* with optional distinct column labels."""

    field: Field
    entries: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionError(f"matrix entries must be 2-dimensional, got shape {a.shape}")
        self.field.check_codes(a)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != a.shape[1]:
                raise DimensionError(f"{len(labels)} labels for {a.shape[1]} columns")
            if len(set(labels)) != len(labels):
                raise LabelError("column labels must be distinct")
            object.__setattr__(self, "labels", labels)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_columns(
        cls,
        field: Field,
        columns: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        rows: Optional[int] = None,
    ) -> "Mat":
        if not columns:
            return cls(field, np.zeros((rows or 0, 0), dtype=np.int64),
                       tuple(labels) if labels is not None else None)
        return cls(field, np.array(columns, dtype=np.int64).T,
                   tuple(labels) if labels is not None else None)

    # -- shape and labels ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    def label_list(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(f"e{j + 1}" for j in range(self.cols))

    def index_of(self, label: str) -> int:
        try:
            return self.label_list().index(label)
        except ValueError:
            raise LabelError(f"unknown column label {label!r}") from None

    def column(self, j: Union[int, str]) -> np.ndarray:
        if isinstance(j, str):
            j = self.index_of(j)
        return self.entries[:, j]

    def select(self, columns: Iterable[Union[int, str]]) -> "Mat":
        idx = [self.index_of(c) if isinstance(c, str) else int(c) for c in columns]
        labels = self.label_list()
        return Mat(self.field, self.entries[:, idx].reshape(self.rows, len(idx)),
                   tuple(labels[j] for j in idx))

    def relabel(self, labels: Optional[Sequence[str]]) -> "Mat":
        return Mat(self.field, self.entries, tuple(labels) if labels is not None else None)

    def transpose(self) -> "Mat":
        return Mat(self.field, self.entries.T)

    def over(self, field: Field) -> "Mat":
        """Reinterpret the codes over *field* (a tower's base or its prime field)."""
        if field == self.field:
            return self
        if isinstance(self.field, TowerField) and field == self.field.base:
            ok = bool(np.all(self.entries < field.order))
        elif field.degree == 1 and field.p == self.field.p:
            ok = bool(np.all(self.entries < field.p))
        else:
            raise FieldMismatchError(
                f"cannot recast from {self.field.describe()} to {field.describe()}"
            )
        if not ok:
            raise FieldMismatchError(f"entries do not lie in {field.describe()}")
        return Mat(field, self.entries, self.labels)

    def embed_into(self, field: TowerField) -> "Mat":
        """The same codes viewed over a tower built on this matrix's field."""
        if field.base != self.field:
            raise FieldMismatchError(f"{field.describe()} is not built on {self.field.describe()}")
        return Mat(field, self.entries, self.labels)

    def to_lists(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries.tobytes(), self.labels))

    def __repr__(self) -> str:
        return f"Mat({self.field.describe()}, {self.rows}x{self.cols})"


def hstack(mats: Sequence[Mat]) -> Mat:
    field = mats[0].field
    if any(m.field != field for m in mats):
        raise FieldMismatchError("cannot stack matrices over different fields")
    labels: list[str] = []
    for m in mats:
        labels.extend(m.label_list())
    return Mat(field, np.hstack([m.entries for m in mats]), tuple(labels))


def vstack(mats: Sequence[Mat]) -> Mat:
    field = mats[0].field
    if any(m.field != field for m in mats):
        raise FieldMismatchError("cannot stack matrices over different fields")
    return Mat(field, np.vstack([m.entries for m in mats]))


def matmul(a: Mat, b: Mat) -> Mat:
    if a.field != b.field:
        raise FieldMismatchError("cannot multiply matrices over different fields")
    return Mat(a.field, _matmul_array(a.field, a.entries, b.entries), b.labels)


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    """Canonical reduced row-echelon form, pivot columns and rank."""
    reduced, pivots = _rref_array(m.field, m.entries)
    return Mat(m.field, reduced, m.labels), pivots, len(pivots)


def rank(m: Mat) -> int:
    return _rank_array(m.field, m.entries)


def inverse(m: Mat) -> Mat:
    return Mat(m.field, _inverse_array(m.field, m.entries))


def solve(m: Mat, rhs: Sequence[int]) -> Optional[np.ndarray]:
    """One solution of ``M x = rhs``, or ``None`` if the system is inconsistent."""
    b = np.asarray(rhs, dtype=np.int64)
    if b.shape != (m.rows,):
        raise DimensionError(f"right-hand side must have length {m.rows}")
    reduced, pivots = _rref_array(m.field, np.hstack([m.entries, b[:, None]]))
    if m.cols in pivots:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, j in enumerate(pivots):
        x[j] = reduced[i, m.cols]
    return x


def kernel(m: Mat) -> "Subspace":
    """Right null space ``{x : M x = 0}``."""
    return Subspace(m.field, m.cols, _kernel_array(m.field, m.entries))


def left_kernel(m: Mat) -> "Subspace":
    """Left null space ``{y : y M = 0}``."""
    return Subspace(m.field, m.rows, _kernel_array(m.field, m.entries.T))


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``field^ambient``, stored as its canonical RREF basis."""

    field: Field
    ambient: int
    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=np.int64)
        b = b.reshape(-1, self.ambient) if self.ambient else np.zeros((0, 0), dtype=np.int64)
        reduced, pivots = _rref_array(self.field, b)
        reduced = reduced[: len(pivots)]
        reduced.setflags(write=False)
        object.__setattr__(self, "basis", reduced)
        object.__setattr__(self, "_pivots", tuple(pivots))

    @classmethod
    def span(cls, field: Field, vectors: Iterable[Sequence[int]], ambient: int) -> "Subspace":
        rows = [np.asarray(v, dtype=np.int64) for v in vectors]
        if any(r.shape != (ambient,) for r in rows):
            raise DimensionError(f"vectors must have length {ambient}")
        data = np.array(rows, dtype=np.int64).reshape(len(rows), ambient)
        return cls(field, ambient, data)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, np.zeros((0, ambient), dtype=np.int64))

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots  # type: ignore[attr-defined]

    def basis_mat(self) -> Mat:
        return Mat(self.field, self.basis)

    def _check(self, other: "Subspace") -> None:
        if other.field != self.field:
            raise FieldMismatchError("subspaces live over different fields")
        if other.ambient != self.ambient:
            raise DimensionError(f"ambient dimensions {self.ambient} and {other.ambient} differ")

    def contains(self, vector: Sequence[int]) -> bool:
        v = np.asarray(vector, dtype=np.int64)
        if v.shape != (self.ambient,):
            raise DimensionError(f"vector must have length {self.ambient}")
        return _rank_array(self.field, np.vstack([self.basis, v[None, :]])) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return _rank_array(self.field, np.vstack([self.basis, other.basis])) == self.dim

    def annihilator(self) -> "Subspace":
        """``{y : y . x = 0 for all x in self}``."""
        return Subspace(self.field, self.ambient, _kernel_array(self.field, self.basis))

    def complement(self) -> "Subspace":
        """The orthogonal complement; same as :meth:`annihilator`."""
        return self.annihilator()

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient, np.vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        constraints = np.vstack([self.annihilator().basis, other.annihilator().basis])
        return Subspace(self.field, self.ambient, _kernel_array(self.field, constraints))

    def embed_into(self, field: TowerField) -> "Subspace":
        """The F-span of this subspace inside a tower over its field."""
        if field.base != self.field:
            raise FieldMismatchError(f"{field.describe()} is not built on {self.field.describe()}")
        return Subspace(field, self.ambient, self.basis)

    def transform(self, t: Mat) -> "Subspace":
        """Image under the linear map ``x -> T x``."""
        if t.field != self.field:
            raise FieldMismatchError("transform lives over a different field")
        image = _matmul_array(self.field, t.entries, self.basis.T).T
        return Subspace(self.field, t.rows, image)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ambient, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace({self.field.describe()}^{self.ambient}, dim={self.dim})"


def subspace_ops(u: Subspace, v: Subspace, op: SubspaceOp) -> Union[Subspace, bool]:
    """Lattice operations: intersection, sum, containment of *v* in *u*, equality."""
    u._check(v)
    if op == SubspaceOp.Intersect:
        return u.intersect(v)
    if op == SubspaceOp.Sum:
        return u.sum(v)
    if op == SubspaceOp.Contains:
        return u.contains_subspace(v)
    if op == SubspaceOp.Equals:
        return u == v
    raise ValueError(f"unknown subspace operation {op!r}")


# ---------------------------------------------------------------------------
# Subfield-restricted operations
# ---------------------------------------------------------------------------

def default_subfield_order(field: Field) -> int:
    """GF(q) for a tower GF(q^2), otherwise the prime field."""
    if isinstance(field, TowerField):
        return field.q
    return field.p


def subfield_row_transform(m: Mat, t: Mat) -> Mat:
    """``(embed T) . M`` for an invertible *t* over the base of *m*'s tower."""
    if not isinstance(m.field, TowerField):
        raise FieldMismatchError(f"{m.field.describe()} is not a quadratic tower")
    if t.field != m.field.base:
        raise FieldMismatchError(
            f"row transform must be over {m.field.base.describe()}, got {t.field.describe()}"
        )
    if t.rows != t.cols or t.cols != m.rows:
        raise DimensionError(f"row transform of shape {t.shape} for {m.rows} rows")
    if rank(t) != t.rows:
        raise SingularMatrixError("row transform is singular")
    return Mat(m.field, _matmul_array(m.field, t.entries, m.entries), m.labels)


def scale_columns(
    m: Mat,
    scalars: Sequence[Union[int, Elem]],
    subfield_only: bool = False,
) -> Mat:
    """Scale column ``j`` by ``scalars[j]``; with *subfield_only* the scalars must lie in GF(q)."""
    s = np.array([int(x) for x in scalars], dtype=np.int64)
    if s.shape != (m.cols,):
        raise DimensionError(f"{s.size} scalars for {m.cols} columns")
    m.field.check_codes(s)
    if np.any(s == 0):
        raise PreconditionError("column scalars must be nonzero")
    if subfield_only and not np.all(m.field.in_subfield(s, default_subfield_order(m.field))):
        raise FieldMismatchError("column scalars must lie in the subfield")
    return Mat(m.field, m.field.mul(m.entries, s[None, :]), m.labels)


# ---------------------------------------------------------------------------
# Projective equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveWitness:
    """``T . A . diag(scalars) == B``."""

    transform: Mat
    scalars: tuple[int, ...]


def projectively_equivalent(a: Mat, b: Mat, subfield_only: bool = False) -> Optional[ProjectiveWitness]:
    """Search for ``(T, D)`` with ``T A D = B``; ``None`` when none exists.

    A lexicographically first basis of *A* is fixed; ``T`` is then
    determined by the scalings ``x`` of the basis columns, and those are
    found by backtracking with ``x[0] = 1``.  A non-basis column ``j`` with
    coordinates ``c`` (in the basis of *A*) and ``e`` (in the matching basis
    of *B*) forces ``c_i x_i / e_i`` to be constant over its support.
    """
    field = a.field
    if b.field != field:
        raise FieldMismatchError("matrices live over different fields")
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    bounds = limits.active()
    limits.require(a.rows, bounds.max_equivalence_rows, "matrix rows")
    limits.require(field.order, bounds.max_search_field, "field order")

    r, n = a.rows, a.cols
    if r == 0:
        return ProjectiveWitness(Mat.zeros(field, 0, 0), (1,) * n)
    _, pivots = _rref_array(field, a.entries)
    if len(pivots) != r:
        raise PreconditionError("A must have full row rank")
    if _rank_array(field, b.entries) != r:
        return None
    if not np.array_equal(a.entries.any(axis=0), b.entries.any(axis=0)):
        return None
    try:
        b_basis_inv = _inverse_array(field, b.entries[:, pivots])
    except SingularMatrixError:
        return None
    a_basis_inv = _inverse_array(field, a.entries[:, pivots])
    c = _matmul_array(field, a_basis_inv, a.entries)
    e = _matmul_array(field, b_basis_inv, b.entries)
    if not np.array_equal(c != 0, e != 0):
        return None

    sub_order = default_subfield_order(field)
    if subfield_only:
        candidates = [int(x) for x in field.subfield_codes(sub_order) if x != 0]
    else:
        candidates = list(range(1, field.order))

    # For each basis position m: the non-basis columns whose support starts
    # before m and contains m, with the first support index.
    checks: list[list[tuple[int, int]]] = [[] for _ in range(r)]
    for j in range(n):
        if j in pivots or not a.entries[:, j].any():
            continue
        support = np.flatnonzero(c[:, j])
        for m in support[1:]:
            checks[int(m)].append((j, int(support[0])))

    x = [0] * r
    x[0] = 1

    def ratio(i: int, j: int) -> int:
        return int(field.div(field.mul(c[i, j], x[i]), e[i, j]))

    def extend(m: int) -> Optional[ProjectiveWitness]:
        if m == r:
            return _finish()
        for value in candidates:
            x[m] = value
            if all(ratio(m, j) == ratio(first, j) for j, first in checks[m]):
                found = extend(m + 1)
                if found is not None:
                    return found
        return None

    def _finish() -> Optional[ProjectiveWitness]:
        xs = np.array(x, dtype=np.int64)
        t = _matmul_array(field, b.entries[:, pivots], field.mul(xs[:, None], a_basis_inv))
        scalars = np.ones(n, dtype=np.int64)
        for j in range(n):
            if j in pivots:
                scalars[j] = field.inv(xs[pivots.index(j)])
            elif a.entries[:, j].any():
                first = int(np.flatnonzero(c[:, j])[0])
                scalars[j] = field.inv(ratio(first, j))
        if subfield_only and not (
            np.all(field.in_subfield(t, sub_order)) and np.all(field.in_subfield(scalars, sub_order))
        ):
            return None
        product = field.mul(_matmul_array(field, t, a.entries), scalars[None, :])
        if not np.array_equal(product, b.entries):
            raise InternalCheckError("projective equivalence witness failed verification")
        return ProjectiveWitness(Mat(field, t), tuple(int(s) for s in scalars))

    witness = extend(1)
    logger.debug("projective equivalence %s x %s: %s", a.shape, field.describe(),
                 "found" if witness else "none")
    return witness
