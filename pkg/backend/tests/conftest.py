import os
import sys

import pytest
from fastapi.testclient import TestClient

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from config import Config
from workbench import Workbench
from worlds import flat_world, gauge_world, metric_world, potential_world

FLAT3_WORLD = """\
# flat phase space
world flat3
dim 3
gen X[i] P[i]
order X < P
rel [X[i],X[j]] = 0
rel [P[i],P[j]] = 0
rel [X[i],P[j]] = delta(i,j)
"""

SERIES_WORLD = """\
world series3
dim 1
param tau h
gen J X[0..3]
order J < X
rule X[n]*J -> J*X[n+1]
"""


@pytest.fixture(scope="session")
def test_config():
    """Small, fast settings for tests"""
    return Config(
        MAX_DIM=8,
        DEFAULT_DIM=2,
        DEFAULT_MAXLEN=2,
        SEED=7,
        ORACLE_TRIALS=5,
        ORACLE_DIM=3,
        SERIES_HORIZON=2,
        WALK_STEPS=200,
        MAX_HISTORY=3,
        PARALLEL_JOBS=1,
        WORLD_DIR="./no-such-world-dir",
    )


@pytest.fixture
def flat2():
    return flat_world(2)


@pytest.fixture
def gauge2():
    return gauge_world(2)


@pytest.fixture
def metric2():
    return metric_world(2)


@pytest.fixture
def potential2():
    return potential_world(2)


@pytest.fixture
def world_dir(tmp_path):
    """A folder with two valid world files and one broken one"""
    (tmp_path / "flat3.world").write_text(FLAT3_WORLD, encoding="utf-8")
    (tmp_path / "series3.world").write_text(SERIES_WORLD, encoding="utf-8")
    (tmp_path / "broken.world").write_text("world broken\nfrobnicate\n")
    (tmp_path / "notes.txt").write_text("not a world file")
    return tmp_path


@pytest.fixture
def workbench(test_config):
    return Workbench(test_config)


@pytest.fixture
def test_client(workbench, monkeypatch):
    """TestClient over the real app, with a fresh workbench per test"""
    import app as app_module

    monkeypatch.setattr(app_module, "workbench", workbench)
    return TestClient(app_module.app)
