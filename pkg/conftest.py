"""
Shared fixtures: the rank-3 representation on four elements, the rank-4
representation on five, U_{2,3} over F_2 and the networks built from them.
"""

from pathlib import Path

import pytest

from fnc_polymatroid.config import Config, set_config
from fnc_polymatroid.constructor import build_network
from fnc_polymatroid.formats import load_map, load_network, load_representation
from fnc_polymatroid.polymatroid import polymatroid_of

DATA = Path(__file__).parent / "data"


@pytest.fixture(autouse=True)
def checked_config():
    """Defaults with every solve_right re-multiplied."""
    config = Config()
    config.linalg.check_solutions = True
    set_config(config)
    yield config
    set_config(Config())


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def r4_rep():
    return load_representation(DATA / "rank3_r4.json")


@pytest.fixture
def r5_rep():
    return load_representation(DATA / "rank4_r5.json")


@pytest.fixture
def u23_rep():
    return load_representation(DATA / "u23.json")


@pytest.fixture
def r4(r4_rep):
    return polymatroid_of(r4_rep)


@pytest.fixture
def r5(r5_rep):
    return polymatroid_of(r5_rep)


@pytest.fixture
def r4_build(r4):
    """Network, map and construction state built from the r=4 polymatroid with b = (1,1,1,0)."""
    return build_network(r4, (1, 1, 1, 0))


@pytest.fixture
def r4_net():
    return load_network(DATA / "r4_net.json")


@pytest.fixture
def r4_map():
    return load_map(DATA / "r4_map.json")


@pytest.fixture
def r5_build(r5):
    return build_network(r5, (2, 1, 1, 0, 0))


@pytest.fixture
def u23_net(u23_rep):
    return build_network(polymatroid_of(u23_rep), (1, 1, 0))
