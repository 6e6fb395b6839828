import pytest

from gfregular.core import limits
from gfregular.core.errors import PreconditionError, SizeBoundError
from gfregular.core.field import field_of_order
from gfregular.core.geometry import pg_matrix
from gfregular.core.linalg import Mat
from gfregular.core.matroid import MinorRecipe, RepMatroid
from gfregular.core.tangles import (
    Tangle,
    induced_tangle,
    is_tangle,
    t_k_sets,
    t_k_tangle,
    tangle_matroid_check,
    tangle_rank,
)
from gfregular.core.types import TangleAxiom
from gfregular.shell.services.suite_service import _pg_minor_recipe


def test_projective_plane_tangle(fano):
    t = t_k_tangle(fano, 3)
    assert is_tangle(t).valid
    assert t.is_small([]) and t.is_small(["p1"])
    assert not t.is_small(["p1", "p2", "p3"])
    assert not t.is_small(sorted(fano.ground - {"p1"}))


def test_projective_tangles_of_higher_order():
    m = pg_matrix(4, 2).matroid()
    t = t_k_tangle(m, 4)
    assert is_tangle(t).valid
    assert is_tangle(t_k_tangle(pg_matrix(3, 3).matroid(), 3)).valid
    for labels in ([], ["p1"], ["p1", "p2"], ["p1", "p2", "p3"]):
        assert tangle_rank(t, labels) == m.rank(labels)


def test_t_k_sets(fano):
    sets = t_k_sets(fano, 3)
    assert len(sets) == 8
    assert frozenset() in sets
    assert all(len(s) <= 1 for s in sets)
    assert t_k_sets(fano, 1) == []


def test_two_coloops_fail_the_first_axiom():
    m = RepMatroid(Mat(field_of_order(2), [[1, 0], [0, 1]]))
    check = is_tangle(t_k_tangle(m, 2))
    assert not check.valid
    assert check.axiom == TangleAxiom.T1
    assert check.witness == (frozenset(),)


def test_missing_singleton_breaks_the_first_axiom(fano):
    sets = [[]] + [[f"p{i}"] for i in range(1, 7)]
    check = is_tangle(Tangle.from_sets(fano, 3, sets))
    assert check.axiom == TangleAxiom.T1
    assert check.witness[0] in ({"p7"}, fano.ground - {"p7"})


def test_small_line_breaks_the_first_axiom(fano):
    line = ["p1", "p2", "p3"]
    assert fano.lam(line) == 2
    sets = [[]] + [[label] for label in fano.labels] + [line]
    check = is_tangle(Tangle.from_sets(fano, 3, sets))
    assert not check.valid
    assert check.axiom == TangleAxiom.T1
    assert check.witness == (frozenset(line),)


def test_covering_sets_break_the_second_axiom(fano):
    sets = [[]] + [[label] for label in fano.labels] + [sorted(fano.ground - {"p1"})]
    check = is_tangle(Tangle.from_sets(fano, 3, sets))
    assert check.axiom == TangleAxiom.T2
    union = frozenset().union(*check.witness)
    assert union == fano.ground


def test_tangle_rank(fano):
    t = t_k_tangle(fano, 3)
    assert tangle_rank(t, []) == 0
    assert tangle_rank(t, ["p1"]) == 1
    assert tangle_rank(t, ["p1", "p2"]) == 2
    assert tangle_rank(t, fano.labels) == 2
    assert tangle_matroid_check(t)


def test_induced_tangle():
    m = pg_matrix(4, 2).matroid()
    recipe = _pg_minor_recipe(m, "p1")
    t_n = t_k_tangle(recipe.apply(m), 3)
    induced = induced_tangle(m, recipe, t_n)
    assert induced.order == 3
    assert is_tangle(induced).valid
    with pytest.raises(PreconditionError):
        induced_tangle(m, MinorRecipe((), ("p1",)), t_n)


def test_exhaustive_bound(fano):
    with limits.override(max_exhaustive_ground=6):
        with pytest.raises(SizeBoundError):
            is_tangle(t_k_tangle(fano, 3))
