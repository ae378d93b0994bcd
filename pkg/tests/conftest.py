"""
Fixtures compartidas de las pruebas
"""

import pytest

from src.harness.runner import DEMO_PARAMS
from src.models.schemas import SystemParams
from src.protocol.params import build_context
from src.protocol.randomness import RandomSource
from src.protocol.storage import generate_database


@pytest.fixture
def demo_ctx():
    """Instancia del ejemplo: N=13, M=2, K=2, X=2, T=(2,2), B=U=1, F=(2,2)"""
    return build_context(DEMO_PARAMS)


@pytest.fixture
def demo_db(demo_ctx):
    return generate_database(demo_ctx, RandomSource(7))


@pytest.fixture
def small_params():
    """Instancia minima con lambda = K = 1 y X = 0"""
    return SystemParams(N=2, M=1, K=1, X=0, T=(1,), B=0, U=0, F=(2,))
