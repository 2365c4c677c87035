import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dicert.network import canonical_config, probability_table  # noqa: E402
from dicert.states import isotropic  # noqa: E402


@pytest.fixture(scope="session")
def ideal_config():
    return canonical_config(isotropic(1.0), 1.0)


@pytest.fixture(scope="session")
def ideal_table(ideal_config):
    return probability_table(ideal_config)
