import pytest

from gfregular.core.errors import SizeBoundError
from gfregular.core.field import field_of_order
from gfregular.core.geometry import obstruction_member, pg_matrix
from gfregular.core.linalg import Mat
from gfregular.core.matroid import RepMatroid, popcount, same_rank_function
from gfregular.core.representability import (
    RankOracle,
    find_representation,
    representability_profile,
    representable_orders,
)


def uniform(r, n):
    return RankOracle([f"e{i + 1}" for i in range(n)], lambda mask: min(r, popcount(mask)))


def test_fano_orders(fano):
    oracle = RankOracle.from_matroid(fano)
    profile = representability_profile(oracle, [field_of_order(o) for o in (2, 3, 4, 5)])
    assert representable_orders(profile) == [2, 4]
    witness = profile[0].witness
    assert witness.labels == fano.labels
    assert same_rank_function(RepMatroid(witness), fano)


def test_four_point_line():
    oracle = uniform(2, 4)
    assert find_representation(oracle, field_of_order(2)) is None
    witness = find_representation(oracle, field_of_order(3))
    assert witness is not None and witness.shape == (2, 4)


def test_pruning_does_not_change_the_answer(fano):
    oracle = RankOracle.from_matroid(fano)
    for order in (2, 3):
        field = field_of_order(order)
        pruned = find_representation(oracle, field, prune=True)
        plain = find_representation(oracle, field, prune=False)
        assert (pruned is None) == (plain is None)
    assert find_representation(uniform(2, 4), field_of_order(3), prune=False) is not None


def test_loops_get_zero_columns():
    m = RepMatroid(Mat(field_of_order(2), [[1, 0, 1], [0, 0, 1]]))
    witness = find_representation(RankOracle.from_matroid(m), field_of_order(3))
    assert witness.column("e2").tolist() == [0, 0]


def test_obstruction_needs_the_quadratic_field():
    oracle = RankOracle.from_matroid(obstruction_member(2).matroid())
    profile = representability_profile(oracle, [field_of_order(o) for o in (2, 3, 4, 5)])
    assert representable_orders(profile) == [4]


def test_rank_axioms(fano):
    assert RankOracle.from_matroid(fano).check_axioms()
    assert uniform(2, 5).check_axioms()
    broken = RankOracle(["a", "b", "c"], lambda mask: (0, 1, 1, 2)[popcount(mask)])
    assert not broken.check_axioms()


def test_search_bounds():
    oracle = RankOracle.from_matroid(pg_matrix(4, 2).matroid())
    with pytest.raises(SizeBoundError):
        oracle.check_axioms()
    with pytest.raises(SizeBoundError):
        find_representation(oracle, field_of_order(2))
    with pytest.raises(SizeBoundError):
        find_representation(uniform(2, 4), field_of_order(17))
