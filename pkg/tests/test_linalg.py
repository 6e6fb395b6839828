import numpy as np
import pytest

from gfregular.core.errors import (
    DimensionError,
    FieldMismatchError,
    LabelError,
    SingularMatrixError,
)
from gfregular.core.field import field_of_order, tower
from gfregular.core.linalg import (
    Mat,
    Subspace,
    inverse,
    kernel,
    left_kernel,
    matmul,
    projectively_equivalent,
    rank,
    rref,
    scale_columns,
    solve,
    subfield_row_transform,
    subspace_ops,
)
from gfregular.core.types import SubspaceOp


def test_rank_over_gf4(gf4):
    w = gf4.field.omega
    w2 = int(gf4.field.mul(w, w))
    m = Mat(gf4.field, [[1, w], [w, w2]])
    assert rank(m) == 1
    assert rank(Mat(gf4.field, [[1, w], [w, 1]])) == 2


def test_rref_is_canonical():
    f = field_of_order(3)
    m = Mat(f, [[2, 1, 0, 1], [1, 2, 1, 0]])
    reduced, pivots, r = rref(m)
    assert pivots == [0, 2] and r == 2
    assert reduced.to_lists() == [[1, 2, 0, 2], [0, 0, 1, 1]]
    again, _, _ = rref(reduced)
    assert again == reduced


def test_kernel_is_annihilated():
    f = field_of_order(5)
    m = Mat(f, [[1, 2, 3, 4], [0, 1, 1, 1]])
    k = kernel(m)
    assert k.dim == 2
    product = matmul(m, Mat(f, k.basis.T))
    assert not product.entries.any()
    left = left_kernel(Mat(f, [[1, 2], [2, 4], [0, 1]]))
    assert left.dim == 1
    assert not matmul(left.basis_mat(), Mat(f, [[1, 2], [2, 4], [0, 1]])).entries.any()


def test_inverse_and_singular():
    f = field_of_order(7)
    m = Mat(f, [[2, 3], [1, 4]])
    assert matmul(m, inverse(m)) == Mat.identity(f, 2)
    with pytest.raises(SingularMatrixError):
        inverse(Mat(f, [[1, 2], [2, 4]]))


def test_solve():
    f = field_of_order(3)
    m = Mat(f, [[1, 1, 0], [0, 1, 1]])
    x = solve(m, [2, 1])
    assert np.array_equal(matmul(m, Mat(f, x[:, None])).entries[:, 0], [2, 1])
    assert solve(Mat(f, [[1, 1], [1, 1]]), [0, 1]) is None
    with pytest.raises(DimensionError):
        solve(m, [1, 2, 3])


def test_subspace_intersection_and_sum():
    f = field_of_order(2)
    u = Subspace.span(f, [[1, 0, 0], [0, 1, 0]], 3)
    v = Subspace.span(f, [[0, 1, 0], [0, 0, 1]], 3)
    meet = subspace_ops(u, v, SubspaceOp.Intersect)
    assert meet == Subspace.span(f, [[0, 1, 0]], 3)
    assert subspace_ops(u, v, SubspaceOp.Sum) == Subspace.full(f, 3)
    assert subspace_ops(u, meet, SubspaceOp.Contains)
    assert not subspace_ops(meet, u, SubspaceOp.Contains)
    assert subspace_ops(u, Subspace.span(f, [[1, 1, 0], [1, 0, 0]], 3), SubspaceOp.Equals)


def test_modular_law_on_random_subspaces():
    f = field_of_order(3)
    rng = np.random.default_rng(17)
    for _ in range(30):
        u = Subspace(f, 4, rng.integers(0, 3, size=(2, 4)))
        v = Subspace(f, 4, rng.integers(0, 3, size=(3, 4)))
        assert u.intersect(v).dim == u.dim + v.dim - u.sum(v).dim


def test_subspace_complement():
    f = field_of_order(3)
    u = Subspace.span(f, [[1, 2, 0, 1]], 4)
    c = u.complement()
    assert c.dim == 3
    assert not matmul(c.basis_mat(), Mat(f, u.basis.T)).entries.any()
    assert c.complement() == u


def test_subspace_checks_field_and_ambient(gf4):
    f = field_of_order(2)
    with pytest.raises(DimensionError):
        Subspace.zero(f, 2).intersect(Subspace.zero(f, 3))
    with pytest.raises(FieldMismatchError):
        Subspace.zero(f, 2).sum(Subspace.zero(gf4.field, 2))


def test_mat_labels():
    f = field_of_order(2)
    m = Mat(f, [[1, 0, 1], [0, 1, 1]], ("a", "b", "c"))
    assert m.select(["c", "a"]).to_lists() == [[1, 1], [1, 0]]
    assert m.select(["c", "a"]).labels == ("c", "a")
    assert Mat(f, [[1, 0]]).label_list() == ("e1", "e2")
    with pytest.raises(LabelError):
        Mat(f, [[1, 0]], ("a", "a"))
    with pytest.raises(LabelError):
        m.index_of("z")


def test_embedding_and_over(gf4):
    base = gf4.base
    m = Mat(base, [[1, 0, 1]])
    lifted = m.embed_into(gf4.field)
    assert lifted.field == gf4.field
    assert lifted.over(base) == m
    with pytest.raises(FieldMismatchError):
        Mat(gf4.field, [[2, 1]]).over(base)


def test_subfield_row_transform(gf4):
    a = Mat(gf4.field, [[2, 1], [0, 3]])
    t = Mat(gf4.base, [[0, 1], [1, 1]])
    assert subfield_row_transform(a, t).to_lists() == [[0, 3], [2, 2]]
    with pytest.raises(SingularMatrixError):
        subfield_row_transform(a, Mat(gf4.base, [[1, 1], [1, 1]]))
    with pytest.raises(FieldMismatchError):
        subfield_row_transform(a, Mat(gf4.field, [[1, 0], [0, 1]]))


def test_scale_columns(gf4):
    a = Mat(gf4.field, [[1, 2], [3, 0]])
    scaled = scale_columns(a, [2, 1])
    assert scaled.to_lists() == [[2, 2], [1, 0]]
    with pytest.raises(FieldMismatchError):
        scale_columns(a, [2, 1], subfield_only=True)


def test_projective_equivalence_witness():
    ext = tower(2)
    field = ext.field
    a = Mat(field, [[1, 0, 1, 1], [0, 1, 1, 2]])
    t = Mat(field, [[1, 1], [0, 1]])
    scalars = [2, 3, 1, 2]
    b = scale_columns(matmul(t, a), scalars)
    witness = projectively_equivalent(a, b)
    assert witness is not None
    rebuilt = scale_columns(matmul(witness.transform, a), witness.scalars)
    assert rebuilt == b


def test_projective_equivalence_fails_on_different_matroids():
    f = field_of_order(3)
    a = Mat(f, [[1, 0, 1], [0, 1, 1]])
    b = Mat(f, [[1, 0, 1], [0, 1, 0]])
    assert projectively_equivalent(a, b) is None


def test_subfield_only_equivalence():
    ext = tower(2)
    field = ext.field
    a = Mat(field, [[1, 0, 1], [0, 1, 1]])
    b = Mat(field, [[1, 0, 1], [0, 1, 2]])
    assert projectively_equivalent(a, b) is not None
    assert projectively_equivalent(a, b, subfield_only=True) is None


def test_projective_equivalence_of_empty_matrices():
    f = field_of_order(3)
    witness = projectively_equivalent(Mat.zeros(f, 0, 3), Mat.zeros(f, 0, 3))
    assert witness is not None
    assert witness.transform.shape == (0, 0)
    assert witness.scalars == (1, 1, 1)
