import numpy as np
import pytest

from gfregular.core.connectivity import kappa
from gfregular.core.geometry import pg_matrix
from gfregular.shell.services.suite_service import SuiteService, brute_kappa, random_link_instance


def test_check_names():
    names = SuiteService.names()
    assert len(names) == 8
    assert names[0] == "field axioms"


def test_selected_checks_only():
    results = SuiteService.run(quick=True, only=[1, 6])
    assert [r.number for r in results] == [1, 6]
    assert all(r.passed for r in results), [r.detail for r in results]


def test_kappa_matches_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m, a, b = random_link_instance(rng)
        assert kappa(m, a, b) == brute_kappa(m, a, b)
    m = pg_matrix(3, 2).matroid()
    assert brute_kappa(m, ["p1"], ["p2"]) == 1


@pytest.mark.slow
def test_quick_suite_passes():
    results = SuiteService.run(quick=True)
    assert len(results) == 8
    failed = [(r.number, r.detail) for r in results if not r.passed]
    assert not failed
