"""
Generators for projective and affine geometries, the two GF(q)-regular
family matrices and members of the rank-3 obstruction class.

Every generator returns a :class:`FamilyMatrix`; its :meth:`~FamilyMatrix.verify`
method rechecks the defining properties of its kind.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from gfregular.core import limits
from gfregular.core.errors import (
    FieldMismatchError,
    InternalCheckError,
    PreconditionError,
)
from gfregular.core.extension import Confinement, confine_pg, l_subspace
from gfregular.core.field import ExtSpec, Field, TowerField, field_of_order, prime_power, tower
from gfregular.core.linalg import (
    Mat,
    ProjectiveWitness,
    Subspace,
    _matmul_array,
    _rank_array,
    hstack,
    projective_keys,
    projectively_equivalent,
)
from gfregular.core.matroid import RepMatroid, cyclic_flats, is_pg
from gfregular.core.types import FamilyKind, ObstructionMode

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FamilyMatrix:
    """A generated matrix together with its kind, parameters and labelled roles.

    ``n`` is the rank parameter (``h`` for affine geometries).  ``roles``
    maps a role name such as ``"X"`` or ``"f"`` to the labels carrying it.
    """

    kind: FamilyKind
    n: int
    q: int
    mat: Mat
    roles: Mapping[str, tuple[str, ...]] = dc_field(default_factory=dict)

    @property
    def ext(self) -> Optional[ExtSpec]:
        field = self.mat.field
        return field.ext if isinstance(field, TowerField) else None

    @property
    def labels(self) -> tuple[str, ...]:
        return self.mat.label_list()

    def matroid(self) -> RepMatroid:
        return RepMatroid(self.mat)

    def role(self, name: str) -> tuple[str, ...]:
        return tuple(self.roles.get(name, ()))

    def role_map(self) -> dict[str, list[str]]:
        """label -> roles it carries, in role-insertion order."""
        out: dict[str, list[str]] = {}
        for name, labels in self.roles.items():
            for label in labels:
                out.setdefault(label, []).append(name)
        return out

    def pg_labels(self) -> tuple[str, ...]:
        """Labels of the embedded projective-geometry block."""
        if self.kind in (FamilyKind.PG, FamilyKind.AG, FamilyKind.HAT):
            return self.labels
        return tuple(label for label in self.labels if label not in self.role("X"))

    def verify(self) -> None:
        """Recheck the defining properties of this kind; raises InternalCheckError."""
        checker = _VERIFIERS[self.kind]
        problem = checker(self)
        if problem:
            raise InternalCheckError(f"{self.kind.name}({self.n},{self.q}): {problem}")
        logger.debug("verified %s(%d,%d)", self.kind.name, self.n, self.q)

    def __repr__(self) -> str:
        return f"FamilyMatrix({self.kind.name}, n={self.n}, q={self.q}, {self.mat.rows}x{self.mat.cols})"


# ---------------------------------------------------------------------------
# Point enumeration
# ---------------------------------------------------------------------------

def _pg_points(n: int, order: int) -> list[tuple[int, ...]]:
    """Normalised projective points of GF(order)^n in lexicographic order."""
    points = []
    for vec in itertools.product(range(order), repeat=n):
        nonzero = [c for c in vec if c]
        if nonzero and nonzero[0] == 1:
            points.append(vec)
    return points


def _point_count(n: int, q: int) -> int:
    return (q ** n - 1) // (q - 1)


def _check_columns(count: int) -> None:
    limits.require(count, limits.active().max_columns, "number of columns")


def _labelled(field: Field, columns: Sequence[Sequence[int]], prefix: str, rows: int,
              start: int = 1) -> Mat:
    labels = [f"{prefix}{i}" for i in range(start, start + len(columns))]
    return Mat.from_columns(field, columns, labels, rows)


# ---------------------------------------------------------------------------
# Projective and affine geometries
# ---------------------------------------------------------------------------

def pg_matrix(n: int, q: int, over: Optional[TowerField] = None, prefix: str = "p") -> FamilyMatrix:
    """PG(n-1, q): one column per point, leading 1, lexicographic order.

    With *over*, the same codes are read in the tower GF(q^2).
    """
    if n < 1:
        raise PreconditionError(f"rank must be at least 1, got {n}")
    prime_power(q)
    _check_columns(_point_count(n, q))
    field: Field = field_of_order(q)
    mat = _labelled(field, _pg_points(n, q), prefix, n)
    if over is not None:
        mat = mat.embed_into(over)
    return FamilyMatrix(FamilyKind.PG, n, q, mat)


def ag_matrix(h: int, q: int) -> FamilyMatrix:
    """AG(h, q): the q^h points of PG(h, q) with first coordinate 1."""
    if h < 1:
        raise PreconditionError(f"dimension must be at least 1, got {h}")
    prime_power(q)
    _check_columns(q ** h)
    columns = [(1,) + rest for rest in itertools.product(range(q), repeat=h)]
    return FamilyMatrix(FamilyKind.AG, h, q, _labelled(field_of_order(q), columns, "a", h + 1))


# ---------------------------------------------------------------------------
# The two regular families
# ---------------------------------------------------------------------------

def hat_matrix(n: int, q: int, with_apex: bool = False) -> FamilyMatrix:
    """Columns ``(s + t*w, a)`` for ``(s, t)`` in GF(q)^2 and ``a`` in PG(n-2, q).

    With *with_apex* the column ``e1`` is prepended as ``h0``; it is the point
    the collapsed line becomes in the contraction construction.
    """
    if n < 2:
        raise PreconditionError(f"rank must be at least 2, got {n}")
    ext = tower(q)
    _check_columns(q * q * _point_count(n - 1, q) + int(with_apex))
    tail = _pg_points(n - 1, q)
    columns = [
        (s + q * t,) + a
        for s in range(q)
        for t in range(q)
        for a in tail
    ]
    mat = _labelled(ext.field, columns, "h", n)
    roles: dict[str, tuple[str, ...]] = {}
    if with_apex:
        apex = Mat.from_columns(ext.field, [(1,) + (0,) * (n - 1)], ["h0"], n)
        mat = hstack([apex, mat])
        roles["apex"] = ("h0",)
    return FamilyMatrix(FamilyKind.HAT, n, q, mat, roles)


def bar_matrix(n: int, q: int) -> FamilyMatrix:
    """The q^2-point line through ``e1 + w e2`` and ``f = e3``, then PG(n-1, q).

    X consists of ``x0 = e1 + w e2`` and ``a x0 + e3`` for every nonzero
    ``a`` in GF(q^2).
    """
    if n < 3:
        raise PreconditionError(f"rank must be at least 3, got {n}")
    ext = tower(q)
    field = ext.field
    _check_columns(q * q + _point_count(n, q))
    x0 = np.zeros(n, dtype=np.int64)
    x0[0], x0[1] = 1, field.omega
    e3 = np.zeros(n, dtype=np.int64)
    e3[2] = 1
    x_cols = [x0]
    for alpha in range(1, q * q):
        x_cols.append(field.add(field.mul(alpha, x0), e3))
    x_mat = Mat.from_columns(field, x_cols, [f"x{i}" for i in range(q * q)], n)
    pg = pg_matrix(n, q, over=field)
    f_label = pg.labels[_pg_points(n, q).index(tuple(int(c) for c in e3))]
    roles = {"x_L0": ("x0",), "f": (f_label,), "X": x_mat.label_list()}
    return FamilyMatrix(FamilyKind.BAR, n, q, hstack([x_mat, pg.mat]), roles)


def bar_cyclic_flat_classes(fm: FamilyMatrix) -> list[list[frozenset[str]]]:
    """The five predicted classes of cyclic flats of a bar matrix, built from the PG block.

    With N the PG block, P the plane spanned by L0 and f, and x_L the
    element of X on the F-span of a line L of P missing f:

    1. cyclic flats F of N with |F meet P| <= 1;
    2. F + X for F in the cyclic flats of N or F = {f}, with F meet P = {f};
    3. F + {x_L} where F meet P = L;
    4. F where F meet P is a line through f;
    5. F + X where F contains P.
    """
    if fm.kind != FamilyKind.BAR:
        raise PreconditionError(f"expected a bar matrix, got {fm.kind.name}")
    m = fm.matroid()
    x = frozenset(fm.role("X"))
    (x_l0,), (f,) = fm.role("x_L0"), fm.role("f")
    n_labels = fm.pg_labels()
    block = m.restrict(n_labels)

    l0 = frozenset(p for p in n_labels if len(m.closure([x_l0, p]) - x) >= 2)
    plane = block.closure(l0 | {f})
    lines = [flat for flat in block.flats() if block.rank(flat) == 2]
    plane_lines = [line for line in lines if line <= plane and f not in line]
    on_line = {}
    for line in plane_lines:
        hits = [e for e in sorted(x) if m.rank(line | {e}) == 2]
        if len(hits) != 1:
            raise InternalCheckError(f"line {sorted(line)} meets X in {len(hits)} points")
        on_line[line] = hits[0]

    classes: list[list[frozenset[str]]] = [[], [], [], [], []]
    candidates = cyclic_flats(block) + [frozenset({f})]
    for flat in cyclic_flats(block):
        meet = flat & plane
        if len(meet) <= 1:
            classes[0].append(flat)
        elif meet in on_line:
            classes[2].append(flat | {on_line[meet]})
        elif meet != plane and block.rank(meet) == 2:
            classes[3].append(flat)
        if plane <= flat:
            classes[4].append(flat | x)
    for flat in candidates:
        if flat & plane == {f}:
            classes[1].append(flat | x)
    return classes


def bar_cyclic_flat_check(fm: FamilyMatrix) -> bool:
    """The five classes are disjoint and together give every cyclic flat."""
    predicted = [flat for cls in bar_cyclic_flat_classes(fm) for flat in cls]
    actual = cyclic_flats(fm.matroid())
    return len(predicted) == len(set(predicted)) and set(predicted) == set(actual)


# ---------------------------------------------------------------------------
# Rank-3 obstructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    """What :func:`verify_obstruction` established about a rank-3 obstruction."""

    x_labels: tuple[str, ...]
    confinement: Confinement
    subspaces: tuple[Subspace, ...]


def verify_obstruction(m: RepMatroid, x_labels: Sequence[str]) -> ObstructionReport:
    """Check that *m* with the triple *x_labels* is a member of the obstruction class.

    The other elements must form a PG(2, q) that confines to GF(q); after
    confinement the three X-columns must have 2-dimensional L-subspaces
    with trivial common intersection and be independent.

    Raises:
        FieldMismatchError: *m* is not represented over a quadratic tower.
        PreconditionError: any of the conditions fails.
    """
    ext = m.ext
    if ext is None:
        raise FieldMismatchError(f"{m.field.describe()} is not a quadratic tower")
    q, field = ext.q, ext.field
    x = tuple(x_labels)
    if len(set(x)) != 3:
        raise PreconditionError(f"X must be three distinct labels, got {list(x)}")
    m.mask(x)
    if m.rank() != 3:
        raise PreconditionError(f"obstructions have rank 3, got {m.rank()}")
    rest = [label for label in m.labels if label not in x]
    if len(rest) != _point_count(3, q):
        raise PreconditionError(f"expected {_point_count(3, q)} plane points, got {len(rest)}")

    mat = m.matrix()
    confinement = confine_pg(mat.select(rest), 3, q)
    image = _matmul_array(field, confinement.transform.entries, mat.select(x).entries)
    subspaces = tuple(l_subspace(image[:, j], ext) for j in range(3))
    dims = [s.dim for s in subspaces]
    if dims != [2, 2, 2]:
        raise PreconditionError(f"L-subspaces must have dimension 2, got {dims}")
    if subspaces[0].intersect(subspaces[1]).intersect(subspaces[2]).dim:
        raise PreconditionError("L-subspaces have a common nonzero vector")
    if _rank_array(field, image) != 3:
        raise PreconditionError("X is not independent")
    return ObstructionReport(x, confinement, subspaces)


def _obstruction(q: int, x_columns: Sequence[Sequence[int]]) -> FamilyMatrix:
    ext = tower(q)
    x_mat = Mat.from_columns(ext.field, x_columns, ["x1", "x2", "x3"], 3)
    pg = pg_matrix(3, q, over=ext.field)
    return FamilyMatrix(FamilyKind.OBSTRUCTION, 3, q, hstack([x_mat, pg.mat]),
                        {"X": ("x1", "x2", "x3")})


def obstruction_from_columns(a: Mat) -> FamilyMatrix:
    """``M(A | G3)`` for a supplied 3x3 matrix A over a tower; raises if A fails."""
    if not isinstance(a.field, TowerField):
        raise FieldMismatchError(f"{a.field.describe()} is not a quadratic tower")
    if a.shape != (3, 3):
        raise PreconditionError(f"A must be 3x3, got {a.shape}")
    family = _obstruction(a.field.q, [a.entries[:, j] for j in range(3)])
    verify_obstruction(family.matroid(), family.role("X"))
    return family


def _enumerate_obstructions(q: int) -> list[FamilyMatrix]:
    """All X up to column scaling and order, as sets of normalised PG(2, q^2) points."""
    if q not in (2, 3):
        raise PreconditionError(f"enumeration is limited to q in {{2, 3}}, got {q}")
    ext = tower(q)
    base, field = ext.base, ext.field
    b_add, b_mul, _ = base.scalar_tables
    f_add, f_mul, _ = field.scalar_tables
    b_neg = [int(base.neg(x)) for x in range(q)]
    f_neg = [int(field.neg(x)) for x in range(q * q)]

    def det(cols, add, mul, neg) -> int:
        (a, b, c), (d, e, f), (g, h, i) = cols
        # cofactor expansion along the first column vector
        t1 = mul[a][add[mul[e][i]][neg[mul[f][h]]]]
        t2 = mul[d][add[mul[b][i]][neg[mul[c][h]]]]
        t3 = mul[g][add[mul[b][f]][neg[mul[c][e]]]]
        return add[add[t1][neg[t2]]][t3]

    def cross(u, v) -> tuple[int, int, int]:
        def minor(i, j):
            return b_add[b_mul[u[i]][v[j]]][b_neg[b_mul[u[j]][v[i]]]]
        return minor(1, 2), minor(2, 0), minor(0, 1)

    candidates = []
    for point in _pg_points(3, q * q):
        u = tuple(c % q for c in point)
        v = tuple(c // q for c in point)
        normal = cross(u, v)
        if any(normal):
            candidates.append((point, normal))

    found = []
    for (p1, n1), (p2, n2), (p3, n3) in itertools.combinations(candidates, 3):
        if det((n1, n2, n3), b_add, b_mul, b_neg) == 0:
            continue
        if det((p1, p2, p3), f_add, f_mul, f_neg) == 0:
            continue
        found.append(_obstruction(q, [p1, p2, p3]))
    logger.info("enumerated %d obstruction triples over GF(%d)", len(found), q * q)
    return found


def obstruction_member(q: int, mode: ObstructionMode = ObstructionMode.Canonical
                       ) -> Union[FamilyMatrix, list[FamilyMatrix]]:
    """The canonical obstruction for GF(q), or every triple when enumerating.

    The canonical X is ``(1,w,0), (0,1,w), (1,0,w)`` for every q except 3,
    where the first enumerated triple is used.
    """
    if mode == ObstructionMode.Enumerate:
        return _enumerate_obstructions(q)
    if q == 3:
        member = _enumerate_obstructions(3)[0]
    else:
        w = tower(q).field.omega
        member = _obstruction(q, [(1, w, 0), (0, 1, w), (1, 0, w)])
    member.verify()
    return member


# ---------------------------------------------------------------------------
# The contraction route to the hat family
# ---------------------------------------------------------------------------

def hat_by_contraction(n: int, q: int) -> RepMatroid:
    """Contract ``v = b1 - w b2`` from PG(n, q) over GF(q^2), simplify, drop the apex.

    ``b1`` and ``b2`` are the first two standard basis vectors; the GF(q)
    points of their line all collapse onto the apex.
    """
    ext = tower(q)
    field = ext.field
    pg = pg_matrix(n + 1, q, over=field, prefix="b")
    v = np.zeros((n + 1, 1), dtype=np.int64)
    v[0, 0], v[1, 0] = 1, field.neg(field.omega)
    m = RepMatroid(hstack([pg.mat, Mat(field, v, ("v",))]))
    contracted = m.contract("v")
    e1 = (1,) + (0,) * n
    b1 = pg.labels[_pg_points(n + 1, q).index(e1)]
    apex = next(cls for cls in contracted.parallel_classes() if b1 in cls)
    result = contracted.delete(apex).simplify()
    logger.debug("contraction route: %d points after dropping a %d-point apex class",
                 result.size, len(apex))
    return result


def hat_cross_check(n: int, q: int) -> ProjectiveWitness:
    """Match the contraction route with :func:`hat_matrix` and return the equivalence.

    Raises:
        InternalCheckError: the two matrices are not projectively equivalent.
    """
    abstract = hat_by_contraction(n, q)
    target = hat_matrix(n, q).mat
    field = target.field
    by_key = {key: j for j, key in enumerate(projective_keys(field, target.entries))}
    if abstract.size != target.cols or abstract.rank() != n:
        raise InternalCheckError(
            f"contraction route gave |E|={abstract.size}, r={abstract.rank()}; "
            f"expected {target.cols} points of rank {n}"
        )
    order: list[Optional[int]] = [None] * target.cols
    for j, key in enumerate(projective_keys(field, abstract.basis)):
        slot = by_key.get(key)
        if slot is None or order[slot] is not None:
            raise InternalCheckError(f"{abstract.labels[j]} has no matching hat column")
        order[slot] = j
    reordered = Mat(field, abstract.basis[:, order])
    witness = projectively_equivalent(reordered, Mat(field, target.entries))
    if witness is None:
        raise InternalCheckError("contraction route is not projectively equivalent to the hat matrix")
    return witness


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------

def _simple_problem(m: RepMatroid) -> str:
    if m.loops():
        return f"loops {sorted(m.loops())}"
    if m.epsilon() != m.size:
        return f"{m.size - m.epsilon()} parallel pairs"
    return ""


def _verify_pg(fm: FamilyMatrix) -> str:
    m = fm.matroid()
    if m.size != _point_count(fm.n, fm.q):
        return f"{m.size} columns, expected {_point_count(fm.n, fm.q)}"
    if not is_pg(m, fm.n, fm.q):
        return "not a projective geometry"
    return _simple_problem(m)


def _verify_ag(fm: FamilyMatrix) -> str:
    m = fm.matroid()
    if m.size != fm.q ** fm.n or m.rank() != fm.n + 1:
        return f"|E|={m.size}, r={m.rank()}"
    if not np.all(fm.mat.entries[0] == 1):
        return "first coordinate is not 1 throughout"
    return _simple_problem(m)


def _verify_hat(fm: FamilyMatrix) -> str:
    n, q = fm.n, fm.q
    m = fm.matroid()
    apex = bool(fm.role("apex"))
    expected = q * q * _point_count(n - 1, q) + int(apex)
    if m.size != expected or m.rank() != n:
        return f"|E|={m.size}, r={m.rank()}, expected |E|={expected}, r={n}"
    problem = _simple_problem(m)
    if problem:
        return problem
    field = fm.mat.field
    keys = set(projective_keys(field, fm.mat.entries))
    tails = [t for t in itertools.product(range(q), repeat=n - 1) if apex or any(t)]
    probes = np.array([(w,) + t for w in range(q * q) for t in tails if w or any(t)],
                      dtype=np.int64).T
    missing = [k for k in projective_keys(field, probes) if k not in keys]
    if missing:
        return f"{len(missing)} vectors with GF({q}) tail are not parallel to a column"
    return ""


def _verify_bar(fm: FamilyMatrix) -> str:
    n, q = fm.n, fm.q
    m = fm.matroid()
    x = set(fm.role("X"))
    (x_l0,), (f,) = fm.role("x_L0"), fm.role("f")
    if len(x) != q * q:
        return f"|X| = {len(x)}, expected {q * q}"
    line = m.closure([x_l0, f])
    if line != x | {f} or len(line) != q * q + 1 or m.rank(line) != 2:
        return f"closure of {{{x_l0}, {f}}} has {len(line)} points"
    block = m.restrict(fm.pg_labels())
    if not is_pg(block, n, q):
        return "PG block is not a projective geometry"
    if m.rank() != n:
        return f"rank {m.rank()}, expected {n}"
    return _simple_problem(m)


def _verify_obstruction(fm: FamilyMatrix) -> str:
    try:
        verify_obstruction(fm.matroid(), fm.role("X"))
    except PreconditionError as exc:
        return str(exc)
    return ""


_VERIFIERS = {
    FamilyKind.PG: _verify_pg,
    FamilyKind.AG: _verify_ag,
    FamilyKind.HAT: _verify_hat,
    FamilyKind.BAR: _verify_bar,
    FamilyKind.OBSTRUCTION: _verify_obstruction,
}
