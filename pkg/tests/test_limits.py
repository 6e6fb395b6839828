import pytest

from gfregular.core import limits
from gfregular.core.errors import PreconditionError, SizeBoundError


def test_defaults_and_environment():
    assert limits.Limits().max_classes == 24
    bounds = limits.Limits.from_env({"GFREGULAR_MAX_CLASSES": "30", "GFREGULAR_MAX_SEARCH_FIELD": " "})
    assert bounds.max_classes == 30
    assert bounds.max_search_field == 16


@pytest.mark.parametrize("raw", ["ten", "0", "-4"])
def test_malformed_environment(raw):
    with pytest.raises(PreconditionError):
        limits.Limits.from_env({"GFREGULAR_MAX_FIELD_ORDER": raw})


def test_override_restores_previous_bounds():
    before = limits.active()
    with limits.override(max_columns=5) as bounds:
        assert limits.active() is bounds
        assert bounds.max_columns == 5
        with pytest.raises(SizeBoundError):
            limits.require(6, bounds.max_columns, "number of columns")
    assert limits.active() is before
