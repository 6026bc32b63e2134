import pytest

from fmwb.core import Vocabulary


@pytest.fixture
def v_graph():
    return Vocabulary((("E", 2),))


@pytest.fixture
def v_mon():
    return Vocabulary((("R", 1),))


@pytest.fixture
def v_mon_ord():
    return Vocabulary((("R", 1),), has_order=True)
