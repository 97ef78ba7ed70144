import sys
from pathlib import Path

import pytest

from teleframe import qcore, teleport

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def basis():
    return teleport.standard_bell_basis()


@pytest.fixture(scope="session")
def random_psis():
    return [qcore.random_pure_state(1000 + k, 1, ["psi"]) for k in range(100)]
