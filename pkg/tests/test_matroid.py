import networkx as nx
import pytest

from gfregular.core.errors import FieldMismatchError, LabelError
from gfregular.core.field import field_of_order, tower
from gfregular.core.geometry import ag_matrix, hat_matrix, pg_matrix
from gfregular.core.linalg import Mat
from gfregular.core.matroid import (
    MinorRecipe,
    RepMatroid,
    cycle_matroid,
    cyclic_flats,
    is_pg,
    rank_closure,
    same_rank_function,
    simplify_epsilon,
)
from gfregular.core.types import RankQuery, SimplifyQuery


def test_fano_basics(fano):
    assert fano.rank() == 3
    assert fano.size == 7
    assert fano.epsilon() == 7
    assert not fano.loops()
    assert fano.closure(["p1", "p2"]) == {"p1", "p2", "p3"}
    assert rank_closure(fano, ["p1", "p2", "p3"], RankQuery.Rank) == 2
    assert rank_closure(fano, ["p1", "p2"], RankQuery.Closure) == {"p1", "p2", "p3"}


def test_fano_flats(fano):
    flats = fano.flats()
    assert len(flats) == 16
    assert sum(1 for f in flats if fano.rank(f) == 2) == 7
    cyclic = cyclic_flats(fano)
    assert len(cyclic) == 9
    assert cyclic[0] == frozenset() and cyclic[-1] == fano.ground


def test_uniform_cyclic_flats():
    m = RepMatroid(Mat(field_of_order(2), [[1, 0, 1], [0, 1, 1]]))
    assert cyclic_flats(m) == [frozenset(), frozenset({"e1", "e2", "e3"})]


def test_connectivity_function(fano):
    line = ["p1", "p2", "p3"]
    assert fano.lam(line) == 2
    assert fano.lam(["p1"]) == 1
    dual = fano.dual()
    assert dual.rank() == 4
    for x in (line, ["p1"], ["p1", "p4"]):
        rest = sorted(fano.ground - set(x))
        assert fano.lam(x) == fano.lam(rest)
        assert dual.lam(x) == fano.lam(x)


def test_contraction_is_dual_of_deletion(fano):
    assert same_rank_function(fano.contract("p1").dual(), fano.dual().delete("p1"))
    assert same_rank_function(fano.delete("p7").dual(), fano.dual().contract("p7"))


def test_minor_parallel_classes(fano):
    m = fano.contract("p1")
    assert m.rank() == 2
    assert m.size == 6
    assert m.epsilon() == 3
    simple = simplify_epsilon(m, SimplifyQuery.Simplify)
    assert simple.labels == tuple(min(cls) for cls in m.parallel_classes())
    assert simplify_epsilon(m, SimplifyQuery.Epsilon) == 3


def test_keep_loops(fano):
    m = fano.contract("p1", keep_loops=True)
    assert m.size == 7
    assert m.loops() == {"p1"}
    assert m.simplify().size == 3


def test_minor_rejects_overlap(fano):
    with pytest.raises(LabelError):
        fano.minor(delete=["p1"], contract=["p1", "p2"])
    with pytest.raises(LabelError):
        fano.rank(["q9"])


def test_minor_recipe(fano):
    recipe = MinorRecipe(delete=("p7",), contract=("p1",))
    m = recipe.apply(fano)
    assert m.ground == fano.ground - {"p1", "p7"}
    assert recipe.to_report() == {"delete": ["p7"], "contract": ["p1"]}


def test_modularity():
    assert pg_matrix(3, 2).matroid().is_modular()
    assert not ag_matrix(2, 3).matroid().is_modular()


def test_is_pg():
    assert is_pg(pg_matrix(4, 3).matroid(), 4, 3)
    assert not is_pg(ag_matrix(2, 3).matroid(), 3, 3)
    hat = hat_matrix(3, 2).matroid()
    assert hat.epsilon() == 12
    assert not is_pg(hat, 3, 4)
    ext = tower(2)
    lifted = pg_matrix(3, 2, over=ext.field).matroid()
    assert is_pg(lifted, 3, 2)
    with pytest.raises(FieldMismatchError):
        is_pg(RepMatroid(Mat(ext.field, [[1, 0, 1], [0, 1, 2], [0, 0, 0]])), 3, 2)


def test_cycle_matroid_of_k5():
    m = cycle_matroid(nx.complete_graph(5))
    assert m.size == 10
    assert m.rank() == 4
    assert m.epsilon() == 10
    triangle = ["0-1", "1-2", "0-2"]
    assert m.rank(triangle) == 2


def test_cycle_matroid_is_regular():
    k4 = nx.complete_graph(4)
    assert same_rank_function(cycle_matroid(k4, 2), cycle_matroid(k4, 3))
    multi = nx.MultiGraph([(0, 1), (0, 1), (1, 1)])
    m = cycle_matroid(multi)
    assert m.epsilon() == 1
    assert len(m.loops()) == 1
