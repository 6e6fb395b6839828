"""
Deciding whether ``M(A | G_t)`` is GF(q)-regular.

``A`` is a t x Y matrix over GF(q^2) and ``G_t`` a GF(q)-representation of
PG(t-1, q).  Exactly one of three things holds, and each comes with a
certificate that :func:`verify_certificate` can audit:

* HAT: a GF(q) row transform and column scalings put every column onto a
  column of the hat family;
* BAR: the same onto the bar family;
* BAD: a set Z of two or three columns with 2-dimensional L-subspaces and
  trivial common intersection, plus explicit minors in the obstruction
  class.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from gfregular.core.errors import (
    FieldMismatchError,
    GFRegularError,
    InternalCheckError,
    PreconditionError,
)
from gfregular.core.extension import Confinement, confine_pg, l_subspace, subfield_vector_in_span
from gfregular.core.field import ExtSpec, TowerField
from gfregular.core.geometry import (
    FamilyMatrix,
    ObstructionReport,
    bar_matrix,
    hat_matrix,
    verify_obstruction,
)
from gfregular.core.linalg import (
    Mat,
    Subspace,
    _inverse_array,
    _matmul_array,
    _rank_array,
    hstack,
    projective_keys,
)
from gfregular.core.matroid import MinorRecipe, RepMatroid, is_pg
from gfregular.core.types import FamilyKind, Verdict

logger = logging.getLogger(__name__)

__all__ = [
    "BadnessCertificate",
    "Decision",
    "EmbeddingCertificate",
    "LDecomposition",
    "MinorRecipe",
    "ObstructionMinor",
    "decide_structure",
    "embed_certificate",
    "l_decomposition",
    "l_subspace",
    "o_minor_from_bad",
    "q_badness",
    "verify_certificate",
]

PGInput = Union[FamilyMatrix, Mat]


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LDecomposition:
    """The L-subspace of every column of A, keyed by label."""

    subspaces: dict[str, Subspace]

    def dims(self) -> dict[str, int]:
        return {label: s.dim for label, s in self.subspaces.items()}

    def full(self) -> tuple[str, ...]:
        """Labels whose L-subspace has dimension 2, in column order."""
        return tuple(label for label, s in self.subspaces.items() if s.dim == 2)


@dataclass(frozen=True)
class BadnessCertificate:
    z: tuple[str, ...]
    subspaces: tuple[Subspace, ...]

    @property
    def strong(self) -> bool:
        return len(self.z) == 2

    def to_report(self) -> dict:
        return {
            "type": "badness",
            "z": list(self.z),
            "strong": self.strong,
            "subspaces": [s.basis.tolist() for s in self.subspaces],
        }


@dataclass(frozen=True)
class EmbeddingCertificate:
    """``transform . col * scalars[label]`` equals the target column ``injection[label]``.

    Loops have ``injection[label] = None`` and no scalar.
    """

    target: FamilyKind
    transform: Mat
    scalars: dict[str, int]
    injection: dict[str, Optional[str]]

    def to_report(self) -> dict:
        return {
            "type": "embedding",
            "target": self.target.name,
            "transform": self.transform.to_lists(),
            "scalars": dict(sorted(self.scalars.items())),
            "injection": dict(sorted(self.injection.items())),
        }


@dataclass(frozen=True)
class ObstructionMinor:
    """An executed recipe whose result passed the obstruction verifier."""

    kind: str
    recipe: MinorRecipe
    minor: RepMatroid
    report: ObstructionReport

    def to_report(self) -> dict:
        return {
            "kind": self.kind,
            **self.recipe.to_report(),
            "x": list(self.report.x_labels),
            "ground": sorted(self.minor.ground),
            "verified": True,
        }


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    rank: int
    q: int
    confinement: Confinement
    certificate: Union[EmbeddingCertificate, BadnessCertificate]
    obstructions: tuple[ObstructionMinor, ...] = ()
    outside_moreover: bool = False

    def to_report(self) -> dict:
        return {
            "verdict": self.verdict.name,
            "rank": self.rank,
            "q": self.q,
            "confinement": {
                "transform": self.confinement.transform.to_lists(),
                "scalars": list(self.confinement.scalars),
            },
            "certificate": self.certificate.to_report(),
            "obstructions": [o.to_report() for o in self.obstructions],
            "outside_moreover": self.outside_moreover,
            "verified": True,
        }


# ---------------------------------------------------------------------------
# Input handling
# ---------------------------------------------------------------------------

def _tower(a: Mat) -> ExtSpec:
    if not isinstance(a.field, TowerField):
        raise FieldMismatchError(f"{a.field.describe()} is not a quadratic tower")
    return a.field.ext


def _pg_block(g: PGInput, ext: ExtSpec, t: int) -> Mat:
    """G over the tower, checked to be a GF(q)-valued PG(t-1, q)."""
    mat = g.mat if isinstance(g, FamilyMatrix) else g
    if mat.field == ext.base:
        mat = mat.embed_into(ext.field)
    elif mat.field != ext.field:
        raise FieldMismatchError(f"G over {mat.field.describe()} does not match {ext.field.describe()}")
    if mat.rows != t:
        raise PreconditionError(f"G has {mat.rows} rows, A has {t}")
    if not np.all(ext.in_subfield(mat.entries)) or not is_pg(RepMatroid(mat), t, ext.q):
        raise PreconditionError(f"G is not a GF({ext.q})-representation of PG({t - 1},{ext.q})")
    return mat


def l_decomposition(a: Mat) -> LDecomposition:
    ext = _tower(a)
    return LDecomposition({label: l_subspace(a.column(j), ext)
                           for j, label in enumerate(a.label_list())})


def _completion(base, vectors: Sequence[np.ndarray], t: int) -> np.ndarray:
    """Columns: *vectors*, then the first unit vectors that keep them independent."""
    cols = [np.asarray(v, dtype=np.int64) for v in vectors]
    if cols and _rank_array(base, np.array(cols)) != len(cols):
        raise InternalCheckError("vectors are not independent")
    identity = np.eye(t, dtype=np.int64)
    for i in range(t):
        if len(cols) == t:
            break
        if _rank_array(base, np.array(cols + [identity[i]])) == len(cols) + 1:
            cols.append(identity[i])
    if len(cols) != t:
        raise InternalCheckError("vectors are not independent")
    return np.array(cols, dtype=np.int64).T


# ---------------------------------------------------------------------------
# q-badness
# ---------------------------------------------------------------------------

def q_badness(a: Mat, g: PGInput) -> Optional[BadnessCertificate]:
    """First Z (pairs, then triples, in column order) witnessing q-badness, else ``None``."""
    ext = _tower(a)
    t = a.rows
    if t < 3:
        raise PreconditionError(f"q-badness needs t >= 3, got {t}")
    _pg_block(g, ext, t)
    decomposition = l_decomposition(a)
    subspaces = decomposition.subspaces
    full = decomposition.full()
    logger.info("q-badness: t=%d, %d columns, %d with 2-dimensional L", t, a.cols, len(full))

    for pair in itertools.combinations(full, 2):
        l1, l2 = (subspaces[z] for z in pair)
        if l1.intersect(l2).dim == 0 and _rank_array(a.field, a.select(pair).entries) == 2:
            return BadnessCertificate(pair, (l1, l2))
    for triple in itertools.combinations(full, 3):
        ls = tuple(subspaces[z] for z in triple)
        if ls[0].intersect(ls[1]).intersect(ls[2]).dim:
            continue
        if _rank_array(a.field, a.select(triple).entries) == 3:
            return BadnessCertificate(triple, ls)
    return None


# ---------------------------------------------------------------------------
# Embedding certificates
# ---------------------------------------------------------------------------

def _target(kind: FamilyKind, t: int, q: int) -> FamilyMatrix:
    if kind == FamilyKind.HAT:
        return hat_matrix(t, q, with_apex=True)
    return bar_matrix(t, q)


def _place(w: Mat, transform: np.ndarray, target: FamilyMatrix
           ) -> Optional[tuple[dict[str, int], dict[str, Optional[str]]]]:
    field = w.field
    image = _matmul_array(field, transform, w.entries)
    target_labels = target.labels
    by_key = {key: j for j, key in enumerate(projective_keys(field, target.mat.entries))}
    scalars: dict[str, int] = {}
    injection: dict[str, Optional[str]] = {}
    for j, (label, key) in enumerate(zip(w.label_list(), projective_keys(field, image))):
        if key is None:
            injection[label] = None
            continue
        slot = by_key.get(key)
        if slot is None:
            return None
        col = image[:, j]
        i = int(np.flatnonzero(col)[0])
        scalars[label] = int(field.div(target.mat.entries[i, slot], col[i]))
        injection[label] = target_labels[slot]
    return scalars, injection


def embed_certificate(a: Mat, g: PGInput) -> EmbeddingCertificate:
    """HAT or BAR certificate for an input that is not q-bad.

    Columns whose L-subspace has dimension at most 1 are parallel to GF(q)
    points and land in either family.  If the 2-dimensional L-subspaces
    share a line ``<c>``, sending ``c`` to ``e1`` lands everything in the
    hat family.  Otherwise they span a rank-2 flat whose F-span holds a
    GF(q)-vector ``v``; with ``w = u + w'v'`` a column off ``<v>``, the map
    ``u -> e1, v' -> e2, v -> e3`` lands everything in the bar family.

    Raises:
        InternalCheckError: the input is q-bad or the certificate fails its audit.
    """
    ext = _tower(a)
    base, q, t = ext.base, ext.q, a.rows
    g_mat = _pg_block(g, ext, t)
    decomposition = l_decomposition(a)
    full = decomposition.full()
    subspaces = decomposition.subspaces

    common = Subspace.full(base, t)
    for label in full:
        common = common.intersect(subspaces[label])
    if not full:
        kind, s = FamilyKind.HAT, np.eye(t, dtype=np.int64)
    elif common.dim:
        kind, s = FamilyKind.HAT, _completion(base, [common.basis[0]], t)
    else:
        flat = Subspace(ext.field, t, a.select(full).entries.T)
        if flat.dim != 2:
            raise InternalCheckError(f"non-bad input has a rank-{flat.dim} set of full L-columns")
        plane = Subspace(base, t, np.vstack([subspaces[label].basis for label in full]))
        v = subfield_vector_in_span(plane, flat)
        u, v2 = ext.field.split(a.column(full[0]))
        kind, s = FamilyKind.BAR, _completion(base, [u, v2, v], t)
    transform = _inverse_array(base, s)

    target = _target(kind, t, q)
    w = hstack([a, g_mat])
    placed = _place(w, transform, target)
    if placed is None:
        raise InternalCheckError(f"columns do not land in the {kind.name} family")
    cert = EmbeddingCertificate(kind, Mat(base, transform), *placed)
    if not verify_certificate(a, g_mat, cert):
        raise InternalCheckError("embedding certificate failed its audit")
    logger.info("embedding certificate: %s, %d columns placed", kind.name, len(cert.injection))
    return cert


def verify_certificate(a: Mat, g: PGInput,
                       cert: Union[EmbeddingCertificate, BadnessCertificate]) -> bool:
    """Independent audit of either kind of certificate; never raises."""
    try:
        ext = _tower(a)
        g_mat = _pg_block(g, ext, a.rows)
        if isinstance(cert, BadnessCertificate):
            return _audit_badness(a, ext, cert)
        return _audit_embedding(a, g_mat, ext, cert)
    except GFRegularError as exc:
        logger.debug("certificate audit failed: %s", exc)
        return False


def _audit_badness(a: Mat, ext: ExtSpec, cert: BadnessCertificate) -> bool:
    if len(cert.z) not in (2, 3) or len(set(cert.z)) != len(cert.z):
        return False
    ls = [l_subspace(a.column(z), ext) for z in cert.z]
    if any(s.dim != 2 for s in ls):
        return False
    meet = ls[0]
    for s in ls[1:]:
        meet = meet.intersect(s)
    if meet.dim:
        return False
    return _rank_array(a.field, a.select(cert.z).entries) == len(cert.z)


def _audit_embedding(a: Mat, g_mat: Mat, ext: ExtSpec, cert: EmbeddingCertificate) -> bool:
    base, field = ext.base, ext.field
    transform = cert.transform
    if transform.field != base or transform.shape != (a.rows, a.rows):
        return False
    if _rank_array(base, transform.entries) != a.rows:
        return False
    target = _target(cert.target, a.rows, ext.q)
    w = hstack([a, g_mat])
    if set(cert.injection) != set(w.label_list()):
        return False
    image = _matmul_array(field, transform.entries, w.entries)
    for j, label in enumerate(w.label_list()):
        slot = cert.injection[label]
        if slot is None:
            if image[:, j].any():
                return False
            continue
        scalar = cert.scalars.get(label, 0)
        if scalar == 0:
            return False
        if not np.array_equal(field.mul(image[:, j], scalar), target.mat.column(slot)):
            return False
    return True


# ---------------------------------------------------------------------------
# Obstruction minors
# ---------------------------------------------------------------------------

def _g_index(g_mat: Mat) -> dict[tuple[int, ...], str]:
    """Projective point -> first G label on it."""
    out: dict[tuple[int, ...], str] = {}
    for label, key in zip(g_mat.label_list(), projective_keys(g_mat.field, g_mat.entries)):
        if key is not None:
            out.setdefault(key, label)
    return out


def _g_label(index: dict[tuple[int, ...], str], field, vector: np.ndarray) -> str:
    key = projective_keys(field, np.asarray(vector, dtype=np.int64)[:, None])[0]
    try:
        return index[key]
    except KeyError:
        raise InternalCheckError(f"no PG column on point {key}") from None


def _plane_labels(g_mat: Mat, plane: Subspace) -> list[str]:
    labels = []
    seen = set()
    for label, key in zip(g_mat.label_list(), projective_keys(g_mat.field, g_mat.entries)):
        if key is not None and key not in seen and plane.contains(key):
            seen.add(key)
            labels.append(label)
    return labels


def _run(kind: str, m: RepMatroid, keep: Sequence[str], contract: Sequence[str],
         x: Sequence[str]) -> ObstructionMinor:
    kept = set(keep) | set(contract)
    recipe = MinorRecipe(tuple(label for label in m.labels if label not in kept), tuple(contract))
    minor = recipe.apply(m)
    try:
        report = verify_obstruction(minor, x)
    except GFRegularError as exc:
        raise InternalCheckError(f"{kind} recipe output is not an obstruction: {exc}") from exc
    logger.debug("%s recipe: contract %s, keep %d elements", kind, list(contract), len(keep))
    return ObstructionMinor(kind, recipe, minor, report)


def o_minor_from_bad(a: Mat, g: PGInput, cert: BadnessCertificate) -> tuple[ObstructionMinor, ...]:
    """Obstruction minors of ``M(A | G)`` built from a badness certificate.

    A triple Z restricts to the plane spanned by its L-subspaces.  A strong
    pair with L1 = <l1, l2>, L2 = <l3, l4> contracts z1 and keeps z2, the
    plane <l2, l3, l4> and the points l1+l3, l1+l4.  For t >= 5 a second
    recipe contracts both and keeps the plane <l2, l4, c> for a point c off
    L1 + L2, with the points l1+l4, l1+c, l3+c.
    """
    ext = _tower(a)
    base, t = ext.base, a.rows
    g_mat = _pg_block(g, ext, t)
    if not verify_certificate(a, g_mat, cert):
        raise InternalCheckError("badness certificate failed re-verification")
    m = RepMatroid(hstack([a, g_mat]))
    index = _g_index(g_mat)

    if not cert.strong:
        plane = cert.subspaces[0].sum(cert.subspaces[1]).sum(cert.subspaces[2])
        if plane.dim != 3:
            raise InternalCheckError(f"L-subspaces of Z span dimension {plane.dim}")
        keep = _plane_labels(g_mat, plane) + list(cert.z)
        return (_run("plane", m, keep, (), cert.z),)

    if t < 4:
        raise InternalCheckError("a strong pair needs t >= 4")
    z1, z2 = cert.z
    (l1, l2), (l3, l4) = (s.basis for s in cert.subspaces)
    frame = _completion(base, [l1, l2, l3, l4], t)
    add = base.add

    plane = Subspace.span(base, [l2, l3, l4], t)
    points = [_g_label(index, base, add(l1, l3)), _g_label(index, base, add(l1, l4))]
    keep = _plane_labels(g_mat, plane) + [z2] + points
    found = [_run("strong", m, keep, (z1,), (z2, *points))]

    if t >= 5:
        c = frame[:, 4]
        plane = Subspace.span(base, [l2, l4, c], t)
        points = [_g_label(index, base, add(l1, l4)),
                  _g_label(index, base, add(l1, c)),
                  _g_label(index, base, add(l3, c))]
        keep = _plane_labels(g_mat, plane) + points
        found.append(_run("moreover", m, keep, (z1, z2), points))
    return tuple(found)


# ---------------------------------------------------------------------------
# Top level
# ---------------------------------------------------------------------------

def decide_structure(w: Mat, pg_labels: Sequence[str]) -> Decision:
    """HAT, BAR or BAD for a matrix whose *pg_labels* columns form a spanning PG(r-1, q)."""
    ext = _tower(w)
    q = ext.q
    pg = list(pg_labels)
    if len(set(pg)) != len(pg):
        raise PreconditionError("PG labels repeat")
    m = RepMatroid(w)
    r = m.rank()
    work = m.matrix()
    if r < 3:
        raise PreconditionError(f"decision needs rank at least 3, got {r}")
    if m.rank(pg) != r:
        raise PreconditionError("PG columns do not span")
    logger.info("decide: %s, rank %d, %d extension columns", ext.field.describe(), r, w.cols - len(pg))

    confinement = confine_pg(work.select(pg), r, q)
    image = _matmul_array(ext.field, confinement.transform.entries, work.entries)
    working = Mat(ext.field, image, work.labels)
    others = [label for label in working.label_list() if label not in set(pg)]
    a = working.select(others)
    g_mat = confinement.confined

    cert = q_badness(a, g_mat)
    if cert is None:
        embedding = embed_certificate(a, g_mat)
        verdict = Verdict.HAT if embedding.target == FamilyKind.HAT else Verdict.BAR
        logger.info("decide: %s", verdict.name)
        return Decision(verdict, r, q, confinement, embedding)

    obstructions = o_minor_from_bad(a, g_mat, cert)
    logger.info("decide: BAD via Z=%s (%d verified minors)", list(cert.z), len(obstructions))
    return Decision(Verdict.BAD, r, q, confinement, cert, obstructions,
                    outside_moreover=cert.strong and r == 4)
