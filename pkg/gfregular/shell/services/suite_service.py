"""
The desk-scale acceptance suite behind ``verify-suite``.

Each numbered check returns an empty string on success or a description of
the first failure.  ``quick`` runs every check at reduced sweep sizes.
Random instances come from ``numpy.random.default_rng`` with fixed seeds,
so two runs produce the same report.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

import networkx as nx
import numpy as np

from gfregular.core.connectivity import is_round, kappa, linking_minor
from gfregular.core.errors import GFRegularError
from gfregular.core.extension import confine_pg, realify_rows, subfield_vector_in_span, zero_rows_normalize
from gfregular.core.field import Field, FieldSpec, field_of_order, tower
from gfregular.core.geometry import (
    ag_matrix,
    bar_cyclic_flat_check,
    bar_matrix,
    hat_cross_check,
    hat_matrix,
    obstruction_member,
    pg_matrix,
    verify_obstruction,
)
from gfregular.core.linalg import Mat, Subspace, hstack, matmul, rank
from gfregular.core.matroid import MinorRecipe, RepMatroid, bits, cycle_matroid, is_pg, same_rank_function
from gfregular.core.regularity import Decision, decide_structure, verify_certificate
from gfregular.core.representability import RankOracle, representability_profile, representable_orders
from gfregular.core.tangles import induced_tangle, is_tangle, t_k_tangle, tangle_matroid_check
from gfregular.core.types import Verdict

logger = logging.getLogger(__name__)

_SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_report(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_matrix(rng: np.random.Generator, field: Field, rows: int, cols: int) -> np.ndarray:
    return rng.integers(0, field.order, size=(rows, cols), dtype=np.int64)


def random_invertible(rng: np.random.Generator, field: Field, n: int) -> np.ndarray:
    while True:
        s = random_matrix(rng, field, n, n)
        if rank(Mat(field, s)) == n:
            return s


def _shared_row_space(rng: np.random.Generator, base: FieldSpec, d: int, k: int, n: int,
                      extra: int = 0) -> list[np.ndarray]:
    """``extra + 2`` matrices whose stacked rows lie in one random k-dimensional row space."""
    c = random_matrix(rng, base, k, n)
    shapes = [d, d] + ([extra] if extra else [])
    return [matmul(Mat(base, random_matrix(rng, base, rows, k)), Mat(base, c)).entries
            for rows in shapes]


def realify_instance(rng: np.random.Generator, q: int, d: int) -> Optional[tuple[Mat, Mat, int]]:
    """Random ``(A, B, h)`` meeting the row-realification preconditions, or ``None``."""
    ext = tower(q)
    base = ext.base
    h = int(rng.integers(0, d + 1))
    k = 2 * d - h
    n = k + int(rng.integers(0, 2))
    a, b = _shared_row_space(rng, base, d, k, n)
    if rank(Mat(ext.field, ext.field.join(a, b))) != d:
        return None
    if rank(Mat(base, np.vstack([a, b]))) != k:
        return None
    return Mat(base, a), Mat(base, b), h


def normalize_instance(rng: np.random.Generator, q: int, d: int
                       ) -> Optional[tuple[Mat, Mat, Mat, int]]:
    """Random ``(A, B, P, h)`` meeting the zero-row preconditions, or ``None``."""
    ext = tower(q)
    base = ext.base
    m = int(rng.integers(0, 3))
    h = int(rng.integers(0, d + 1))
    k = m + 2 * d - h
    n = max(m + d, k) + int(rng.integers(0, 2))
    a, b, *rest = _shared_row_space(rng, base, d, k, n, extra=m)
    p = rest[0] if rest else np.zeros((0, n), dtype=np.int64)
    if rank(Mat(ext.field, np.vstack([ext.field.join(a, b), p]))) != m + d:
        return None
    if rank(Mat(base, p)) != m:
        return None
    return Mat(base, a), Mat(base, b), Mat(base, p), h


def span_instance(rng: np.random.Generator, q: int, d: int) -> Optional[tuple[Subspace, Subspace]]:
    """Random ``(V, U)`` with V over GF(q), U over GF(q^2) inside span(V), 2 dim U > dim V."""
    ext = tower(q)
    base, field = ext.base, ext.field
    h = int(rng.integers(1, d + 1))
    j = int(rng.integers(h // 2 + 1, h + 1))
    v_rows = random_matrix(rng, base, h, d)
    if rank(Mat(base, v_rows)) != h:
        return None
    u_rows = matmul(Mat(field, random_matrix(rng, field, j, h)), Mat(field, v_rows)).entries
    u = Subspace(field, d, u_rows)
    if u.dim != j:
        return None
    return Subspace(base, d, v_rows), u


def pg_instance(rng: np.random.Generator, q: int, n: int) -> Mat:
    """PG(n-1, q) under a random F-row transform, column scaling and column order."""
    field = tower(q).field
    g = pg_matrix(n, q, over=field).mat
    s = random_invertible(rng, field, n)
    scalars = rng.integers(1, field.order, size=g.cols, dtype=np.int64)
    image = field.mul(matmul(Mat(field, s), g).entries, scalars[None, :])
    order = rng.permutation(g.cols)
    return Mat(field, image[:, order], tuple(g.label_list()[j] for j in order))


def decide_instance(a_columns, t: int, q: int) -> tuple[Mat, Mat]:
    """``(A, G)`` with A from *a_columns* (labels y1..) and G = PG(t-1, q) over GF(q^2)."""
    field = tower(q).field
    a = Mat.from_columns(field, a_columns, [f"y{i + 1}" for i in range(len(a_columns))], t)
    return a, pg_matrix(t, q, over=field).mat


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def _field_axioms(field: Field) -> str:
    x = np.arange(field.order, dtype=np.int64)
    a, b, c = np.meshgrid(x, x, x, indexing="ij")
    add, mul = field.add, field.mul
    if not np.array_equal(add(add(a, b), c), add(a, add(b, c))):
        return "addition is not associative"
    if not np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c))):
        return "multiplication is not associative"
    if not np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c))):
        return "multiplication does not distribute"
    if not np.array_equal(add(a, b), add(b, a)) or not np.array_equal(mul(a, b), mul(b, a)):
        return "operations are not commutative"
    if not np.array_equal(add(x, 0), x) or not np.array_equal(mul(x, 1), x):
        return "identities fail"
    if np.any(add(x, field.neg(x)) != 0):
        return "additive inverses fail"
    if np.any(mul(x[1:], field.inv(x[1:])) != 1):
        return "multiplicative inverses fail"
    return ""


def check_field_axioms(quick: bool) -> str:
    fields: list[Field] = [field_of_order(o) for o in (2, 3, 4, 8, 9, 16)]
    fields += [tower(2).field, tower(3).field, tower(4).field]
    for field in fields:
        problem = _field_axioms(field)
        if problem:
            return f"{field.describe()}: {problem}"
    return ""


def check_generator_counts(quick: bool) -> str:
    for q in (2, 3, 4):
        for n in range(2, 6):
            m = pg_matrix(n, q).matroid()
            if m.epsilon() != (q ** n - 1) // (q - 1):
                return f"epsilon(PG({n - 1},{q})) = {m.epsilon()}"
    for q in (2, 3):
        for h in (1, 2, 3):
            if ag_matrix(h, q).matroid().epsilon() != q ** h:
                return f"epsilon(AG({h},{q})) is wrong"
    if hat_matrix(3, 2).matroid().epsilon() != 12:
        return "hat(3,2) does not have 12 pairwise non-parallel columns"
    bar = bar_matrix(3, 2)
    m = bar.matroid()
    x = bar.role("X")
    if len(x) != 4 or m.rank(x + bar.role("f")) != 2:
        return "bar(3,2) does not carry a 4-point X on a 5-point line"
    return ""


def check_obstruction_profile(quick: bool) -> str:
    orders = (2, 3, 4, 5) if quick else (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)
    oracle = RankOracle.from_matroid(obstruction_member(2).matroid())
    profile = representability_profile(oracle, [field_of_order(o) for o in orders])
    found = representable_orders(profile)
    expected = [o for o in orders if o in (4, 16)]
    if found != expected:
        return f"representable over {found}, expected {expected}"
    return ""


def _audit_decision(a: Mat, g: Mat, decision: Decision) -> str:
    a_work = matmul(decision.confinement.transform, a)
    if not verify_certificate(a_work, decision.confinement.confined, decision.certificate):
        return "certificate does not verify"
    if decision.verdict == Verdict.BAD:
        if not decision.obstructions:
            return "BAD verdict without an obstruction minor"
        for minor in decision.obstructions:
            verify_obstruction(minor.minor, minor.report.x_labels)
    return ""


def check_trichotomy(quick: bool) -> str:
    q, t = 2, 3
    field = tower(q).field
    reps = [(0, 0, 0)] + [tuple(int(c) for c in p) for p in pg_matrix(t, 4).mat.entries.T]
    instances: list[list[tuple[int, ...]]] = [[]] + [[r] for r in reps]
    pairs = list(itertools.combinations_with_replacement(reps, 2))
    instances += [list(p) for p in (pairs[:40] if quick else pairs)]
    rng = np.random.default_rng(_SEED)
    wide = [[tuple(int(c) for c in col) for col in random_matrix(rng, field, 4, 3).T]
            for _ in range(30 if quick else 1000)]
    for columns, rows in itertools.chain(((c, t) for c in instances), ((c, 4) for c in wide)):
        a, g = decide_instance(columns, rows, q)
        decision = decide_structure(hstack([a, g]), g.label_list())
        problem = _audit_decision(a, g, decision)
        if problem:
            return f"A = {columns}: {problem}"
    return ""


def check_constructions(quick: bool) -> str:
    rng = np.random.default_rng(_SEED + 1)
    count = 50 if quick else 1000
    for q in (2, 3):
        field = tower(q).field
        done = 0
        while done < count:
            inst = realify_instance(rng, q, int(rng.integers(1, 5)))
            if inst is None:
                continue
            a, b, h = inst
            qm = realify_rows(a, b, h)
            product = matmul(qm, Mat(field, field.join(a.entries, b.entries)))
            if rank(qm) != h or np.any(product.entries >= q):
                return f"realify_rows failed at q={q}"
            done += 1
        done = 0
        while done < count:
            inst = normalize_instance(rng, q, int(rng.integers(1, 4)))
            if inst is None:
                continue
            a, b, p, h = inst
            a2, b2 = zero_rows_normalize(a, b, p, h)
            before = Subspace(field, a.cols, np.vstack([field.join(a.entries, b.entries), p.entries]))
            after = Subspace(field, a.cols, np.vstack([field.join(a2.entries, b2.entries), p.entries]))
            if np.any(b2.entries[:h]) or before != after:
                return f"zero_rows_normalize failed at q={q}"
            done += 1
        done = 0
        while done < count:
            inst = span_instance(rng, q, int(rng.integers(2, 5)))
            if inst is None:
                continue
            v, u = inst
            vec = subfield_vector_in_span(v, u)
            if not vec.any() or not v.contains(vec) or not u.contains(vec):
                return f"subfield_vector_in_span failed at q={q}"
            done += 1
        for _ in range(count // 10 if quick else count):
            n = int(rng.integers(3, 5 if q == 2 else 4))
            conf = confine_pg(pg_instance(rng, q, n), n, q)
            if np.any(conf.confined.entries >= q) or not is_pg(RepMatroid(conf.confined), n, q):
                return f"confine_pg failed at q={q}, n={n}"
    return ""


def _pg_minor_recipe(m: RepMatroid, point: str) -> MinorRecipe:
    """Contract *point* and delete all but the first element of each parallel class."""
    contracted = m.contract(point)
    extra = [label for cls in contracted.parallel_classes() for label in cls[1:]]
    return MinorRecipe(tuple(extra), (point,))


def check_tangles(quick: bool) -> str:
    cases = [(3, 2), (3, 3)] if quick else [(3, 2), (4, 2), (3, 3)]
    for n, q in cases:
        check = is_tangle(t_k_tangle(pg_matrix(n, q).matroid(), n))
        if not check.valid:
            return f"T_{n}(PG({n - 1},{q})) fails {check.axiom.name}"
    if not tangle_matroid_check(t_k_tangle(pg_matrix(3, 2).matroid(), 3)):
        return "tangle matroid of T_3(PG(2,2)) fails the rank axioms"
    m = pg_matrix(4, 2).matroid()
    recipe = _pg_minor_recipe(m, "p1")
    induced = induced_tangle(m, recipe, t_k_tangle(recipe.apply(m), 3))
    check = is_tangle(induced)
    if not check.valid:
        return f"induced tangle on PG(3,2) fails {check.axiom.name}"
    return ""


def brute_kappa(m: RepMatroid, a, b) -> int:
    """Minimum lambda over every A <= Z <= E - B, by plain enumeration."""
    am, bm = m.mask(a), m.mask(b)
    free = [i for i in range(m.size) if not (am | bm) >> i & 1]
    best = None
    for sel in range(1 << len(free)):
        z = am
        for i in bits(sel):
            z |= 1 << free[i]
        value = m.lam_mask(z)
        best = value if best is None else min(best, value)
    return best  # type: ignore[return-value]


def random_link_instance(rng: np.random.Generator) -> tuple[RepMatroid, list[str], list[str]]:
    field = field_of_order(int(rng.choice([2, 3])))
    cols = int(rng.integers(5, 9))
    m = RepMatroid(Mat(field, random_matrix(rng, field, 3, cols)))
    picks = rng.permutation(cols)
    na, nb = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    labels = m.labels
    return m, [labels[j] for j in picks[:na]], [labels[j] for j in picks[na:na + nb]]


def check_connectivity(quick: bool) -> str:
    for q in (2, 3):
        for n in (2, 3, 4):
            if not is_round(pg_matrix(n, q).matroid()).round:
                return f"PG({n - 1},{q}) is not round"
    if not is_round(cycle_matroid(nx.complete_graph(5))).round:
        return "M(K5) is not round"
    if not is_round(ag_matrix(2, 3).matroid()).round:
        return "AG(2,3) is not round"
    rng = np.random.default_rng(_SEED + 2)
    for _ in range(20 if quick else 200):
        m, a, b = random_link_instance(rng)
        value = kappa(m, a, b)
        if value != brute_kappa(m, a, b):
            return f"kappa disagrees with enumeration on A={a}, B={b}"
        result = linking_minor(m, a, b)
        n = result.minor
        if n.ground != frozenset(a) | frozenset(b) or n.lam(a) != value:
            return f"linking minor is wrong on A={a}, B={b}"
        if not same_rank_function(n.restrict(a), m.restrict(a)) or \
                not same_rank_function(n.restrict(b), m.restrict(b)):
            return f"linking minor changes a restriction on A={a}, B={b}"
    return ""


def check_families(quick: bool) -> str:
    if not bar_cyclic_flat_check(bar_matrix(3, 2)):
        return "cyclic flats of bar(3,2) do not split into the five classes"
    hat_cross_check(3, 2)
    return ""


_CHECKS: list[tuple[str, Callable[[bool], str]]] = [
    ("field axioms", check_field_axioms),
    ("generator counts", check_generator_counts),
    ("obstruction representability", check_obstruction_profile),
    ("decision trichotomy", check_trichotomy),
    ("constructive algebra", check_constructions),
    ("tangles", check_tangles),
    ("connectivity", check_connectivity),
    ("family structure", check_families),
]


class SuiteService:
    """Runs the numbered acceptance checks."""

    @staticmethod
    def names() -> list[str]:
        return [name for name, _ in _CHECKS]

    @staticmethod
    def run(quick: bool = True, only: Optional[list[int]] = None) -> list[CheckResult]:
        results = []
        for number, (name, check) in enumerate(_CHECKS, start=1):
            if only and number not in only:
                continue
            start = time.perf_counter()
            try:
                detail = check(quick)
            except GFRegularError as exc:
                detail = f"{type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - start
            results.append(CheckResult(number, name, not detail, detail, elapsed))
            logger.info("check %d (%s): %s in %.2fs", number, name,
                        "pass" if not detail else "FAIL", elapsed)
        return results
