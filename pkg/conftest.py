import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from efcost.states import example_catalogue  # noqa: E402
from efcost.variational import OptimizerConfig  # noqa: E402


@pytest.fixture(scope="session")
def example_bases():
    return example_catalogue()


@pytest.fixture
def fast_config():
    return OptimizerConfig(restarts=3, max_iters=300, seed=0)
