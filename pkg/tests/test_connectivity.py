import networkx as nx
import numpy as np
import pytest

from gfregular.core import limits
from gfregular.core.connectivity import (
    hyperplane_masks,
    is_round,
    kappa,
    kappa_witness,
    linking_minor,
    vertical_connectivity,
)
from gfregular.core.errors import LabelError, SizeBoundError
from gfregular.core.field import field_of_order
from gfregular.core.geometry import ag_matrix, pg_matrix
from gfregular.core.linalg import Mat
from gfregular.core.matroid import RepMatroid, cycle_matroid, same_rank_function

LINE_A = ["p1", "p2", "p3"]
LINE_B = ["p4", "p8", "p12"]


def two_lines():
    a = np.zeros((4, 6), dtype=np.int64)
    a[:2, :3] = [[1, 0, 1], [0, 1, 1]]
    a[2:, 3:] = [[1, 0, 1], [0, 1, 1]]
    return RepMatroid(Mat(field_of_order(2), a))


def test_projective_planes_are_vertically_connected(fano):
    assert vertical_connectivity(fano, 5).connected
    assert vertical_connectivity(fano).connected


def test_contraction_drops_vertical_connectivity_by_at_most_one(fano):
    assert vertical_connectivity(fano, 3).connected
    for point in ("p1", "p5"):
        assert vertical_connectivity(fano.contract(point), 2).connected


def test_direct_sum_has_a_vertical_two_separation():
    m = two_lines()
    result = vertical_connectivity(m, 2)
    assert not result.connected
    side = sorted(result.separation)
    rest = sorted(m.ground - result.separation)
    assert m.lam(side) < min(2, m.rank(side), m.rank(rest))
    assert result.order == m.lam(side) + 1


def test_two_planes_sharing_a_line():
    m = pg_matrix(4, 2).matroid().restrict([f"p{i}" for i in range(1, 12)])
    side = ["p4", "p5", "p6", "p7"]
    assert m.rank(side) == 3
    assert m.rank(sorted(m.ground - set(side))) == 3
    assert m.lam(side) == 2
    result = vertical_connectivity(m, 3)
    assert not result.connected
    assert result.order <= 3
    assert vertical_connectivity(m, 2).connected


def test_roundness():
    for q in (2, 3):
        for n in (2, 3, 4):
            assert is_round(pg_matrix(n, q).matroid()).round
    assert is_round(ag_matrix(2, 3).matroid()).round
    assert is_round(cycle_matroid(nx.complete_graph(5))).round


def test_non_round_witness():
    m = two_lines()
    result = is_round(m)
    assert not result.round
    h1, h2 = result.hyperplanes
    assert h1 | h2 == m.ground
    assert m.rank(h1) == m.rank(h2) == 3
    assert not is_round(ag_matrix(2, 2).matroid()).round


def test_fano_has_seven_hyperplanes(fano):
    assert len(hyperplane_masks(fano)) == 7


def test_kappa_of_skew_lines():
    m = pg_matrix(4, 2).matroid()
    value, z = kappa_witness(m, LINE_A, LINE_B)
    assert value == 2
    assert set(LINE_A) <= z and not z & set(LINE_B)
    assert m.lam(z) == 2
    assert kappa(m, LINE_A, LINE_B) <= min(m.rank(LINE_A), m.rank(LINE_B))


def test_kappa_when_sets_partition_the_ground(fano):
    rest = sorted(fano.ground - set(LINE_A))
    assert kappa(fano, LINE_A, rest) == fano.lam(LINE_A)


def test_kappa_rejects_overlap(fano):
    with pytest.raises(LabelError):
        kappa(fano, ["p1", "p2"], ["p2", "p5"])


def test_kappa_respects_class_bound():
    m = pg_matrix(4, 2).matroid()
    with limits.override(max_classes=3):
        with pytest.raises(SizeBoundError):
            kappa(m, LINE_A, LINE_B)


def test_linking_minor_of_skew_lines():
    m = pg_matrix(4, 2).matroid()
    result = linking_minor(m, LINE_A, LINE_B)
    n = result.minor
    assert result.kappa == 2
    assert n.ground == set(LINE_A) | set(LINE_B)
    assert n.lam(LINE_A) == 2
    assert same_rank_function(n.restrict(LINE_A), m.restrict(LINE_A))
    assert same_rank_function(n.restrict(LINE_B), m.restrict(LINE_B))
    assert set(result.deleted) | set(result.contracted) == m.ground - n.ground


def test_linking_minor_is_identity_on_a_partition(fano):
    rest = sorted(fano.ground - set(LINE_A))
    result = linking_minor(fano, LINE_A, rest)
    assert result.deleted == () and result.contracted == ()
    assert same_rank_function(result.minor, fano)
