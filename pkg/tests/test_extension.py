import numpy as np
import pytest

from gfregular.core.errors import DimensionError, FieldMismatchError, PreconditionError
from gfregular.core.extension import (
    confine_pg,
    l_subspace,
    realify_rows,
    subfield_vector_in_span,
    zero_rows_normalize,
)
from gfregular.core.field import tower
from gfregular.core.geometry import hat_matrix, pg_matrix
from gfregular.core.linalg import Mat, Subspace, matmul, rank, scale_columns
from gfregular.core.matroid import RepMatroid, is_pg
from gfregular.shell.services.suite_service import (
    normalize_instance,
    pg_instance,
    realify_instance,
    span_instance,
)


def test_l_subspace_dimensions(gf4):
    w = gf4.field.omega
    assert l_subspace([1, w, 0], gf4) == Subspace.span(gf4.base, [[1, 0, 0], [0, 1, 0]], 3)
    assert l_subspace([1, 1, 0], gf4).dim == 1
    assert l_subspace([w, w, 0], gf4).dim == 1
    assert l_subspace([0, 0, 0], gf4).dim == 0


def test_confine_identity_on_rational_input(gf4):
    g = pg_matrix(3, 2, over=gf4.field).mat
    conf = confine_pg(g, 3, 2)
    assert conf.transform == Mat.identity(gf4.field, 3)
    assert conf.confined is g


def test_confine_a_transformed_plane(gf9):
    field = gf9.field
    g = pg_matrix(3, 3, over=field).mat
    s = Mat(field, [[1, 3, 0], [0, 1, 4], [0, 0, 1]])
    assert rank(s) == 3
    moved = scale_columns(matmul(s, g), [1 + j % 8 for j in range(g.cols)])
    conf = confine_pg(moved, 3, 3)
    assert np.all(conf.confined.entries < 3)
    assert is_pg(RepMatroid(conf.confined), 3, 3)
    rebuilt = scale_columns(matmul(conf.transform, moved), conf.scalars)
    assert np.array_equal(rebuilt.entries, conf.confined.entries)


def test_confine_random_instances():
    rng = np.random.default_rng(7)
    for q, n in [(2, 3), (2, 4), (3, 3)]:
        conf = confine_pg(pg_instance(rng, q, n), n, q)
        assert np.all(conf.confined.entries < q)
        assert is_pg(RepMatroid(conf.confined), n, q)


def test_confine_rejects_non_geometries(gf4):
    hat = hat_matrix(3, 2).mat
    with pytest.raises(PreconditionError):
        confine_pg(hat, 3, 2)
    with pytest.raises(PreconditionError):
        confine_pg(pg_matrix(2, 2, over=gf4.field).mat, 2, 2)


def test_subfield_vector_in_span(gf4):
    base, field = gf4.base, gf4.field
    w = field.omega
    v = Subspace.span(base, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    u = Subspace.span(field, [[1, w, 0], [0, 1, w]], 3)
    vec = subfield_vector_in_span(v, u)
    assert vec.any() and np.all(vec < 2)
    assert u.contains(vec) and v.contains(vec)


def test_subfield_vector_preconditions(gf4):
    base, field = gf4.base, gf4.field
    w = field.omega
    v = Subspace.span(base, [[1, 0, 0], [0, 1, 0]], 3)
    with pytest.raises(PreconditionError):
        subfield_vector_in_span(v, Subspace.span(field, [[1, w, 0]], 3))
    with pytest.raises(PreconditionError):
        subfield_vector_in_span(v, Subspace.span(field, [[1, 0, 1], [0, 1, 0]], 3))
    with pytest.raises(FieldMismatchError):
        subfield_vector_in_span(Subspace.span(field, [[1, 0, 0]], 3), Subspace.span(field, [[1, 0, 0]], 3))


def test_subfield_vector_random_instances():
    rng = np.random.default_rng(11)
    done = 0
    while done < 25:
        inst = span_instance(rng, 3, 4)
        if inst is None:
            continue
        v, u = inst
        vec = subfield_vector_in_span(v, u)
        assert v.contains(vec) and u.contains(vec)
        done += 1


def test_realify_rows_example(gf4):
    base = gf4.base
    a = Mat(base, [[1, 0, 0], [0, 1, 0]])
    b = Mat(base, [[0, 0, 1], [0, 0, 0]])
    q = realify_rows(a, b, 1)
    assert q.to_lists() == [[0, 1]]
    product = matmul(q, Mat(gf4.field, gf4.field.join(a.entries, b.entries)))
    assert product.to_lists() == [[0, 1, 0]]


def test_realify_rows_preconditions(gf4):
    base = gf4.base
    a = Mat(base, [[1, 0, 0], [0, 1, 0]])
    b = Mat(base, [[0, 0, 1], [0, 0, 0]])
    with pytest.raises(PreconditionError):
        realify_rows(a, b, 2)
    with pytest.raises(PreconditionError):
        realify_rows(a, b, 3)
    with pytest.raises(DimensionError):
        realify_rows(a, Mat(base, [[1, 0], [0, 1]]), 1)
    wide_a = Mat(base, [[1, 0, 0, 0], [0, 1, 0, 0]])
    wide_b = Mat(base, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert realify_rows(wide_a, wide_b, 0).rows == 0


def test_realify_rows_random_instances():
    rng = np.random.default_rng(5)
    for q in (2, 3):
        field = tower(q).field
        done = 0
        while done < 20:
            inst = realify_instance(rng, q, 3)
            if inst is None:
                continue
            a, b, h = inst
            qm = realify_rows(a, b, h)
            done += 1
            if h == 0:
                assert qm.rows == 0
                continue
            product = matmul(qm, Mat(field, field.join(a.entries, b.entries)))
            assert rank(qm) == h and np.all(product.entries < q)


def test_zero_rows_normalize_random_instances():
    rng = np.random.default_rng(13)
    for q in (2, 3):
        field = tower(q).field
        done = 0
        while done < 20:
            inst = normalize_instance(rng, q, 3)
            if inst is None:
                continue
            a, b, p, h = inst
            a2, b2 = zero_rows_normalize(a, b, p, h)
            assert not b2.entries[:h].any()
            before = Subspace(field, a.cols, np.vstack([field.join(a.entries, b.entries), p.entries]))
            after = Subspace(field, a.cols, np.vstack([field.join(a2.entries, b2.entries), p.entries]))
            assert before == after
            done += 1


def test_zero_rows_normalize_keeps_leading_zero_rows(gf4):
    base = gf4.base
    a = Mat(base, [[1, 0, 0], [0, 1, 0]])
    b = Mat(base, [[0, 0, 0], [0, 0, 1]])
    p = Mat(base, np.zeros((0, 3), dtype=np.int64))
    a2, b2 = zero_rows_normalize(a, b, p, 1)
    assert a2 == a and b2 == b
