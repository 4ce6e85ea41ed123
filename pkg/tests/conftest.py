"""
Pytest configuration and shared fixtures for unidist tests
"""
import pytest
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from segcalc import CuspLine, LineClass, Multisegment, seg


@pytest.fixture
def even_line():
    """Even conjugate self-dual line (reducibility at +-1/2)"""
    return CuspLine('rho', LineClass.EVEN)


@pytest.fixture
def odd_line():
    """Odd conjugate self-dual line (reducibility at 0)"""
    return CuspLine('rho', LineClass.ODD)


@pytest.fixture
def nonsd_lines():
    """A pair of mutually dual lines that are not conjugate self-dual"""
    return CuspLine('a', LineClass.NONSD, partner='b'), CuspLine('b', LineClass.NONSD, partner='a')


@pytest.fixture
def even_ladder(even_line):
    """Ladder {[1,2], [0,1]} on the Even line"""
    return Multisegment.of(seg(even_line, 1, 2), seg(even_line, 0, 1))


@pytest.fixture
def even_speh(even_line):
    """Conjugate self-dual Speh ladder of four segments on the Even line"""
    return Multisegment.of(
        seg(even_line, '3/2', '5/2'),
        seg(even_line, '1/2', '3/2'),
        seg(even_line, '-3/2', '-1/2'),
        seg(even_line, '-5/2', '-3/2'),
    )


@pytest.fixture
def odd_speh(odd_line):
    """Conjugate self-dual Speh ladder of four segments on the Odd line"""
    return Multisegment.of(
        seg(odd_line, 2, 3),
        seg(odd_line, 1, 2),
        seg(odd_line, -2, -1),
        seg(odd_line, -3, -2),
    )


@pytest.fixture
def clean_env(monkeypatch):
    """Remove UNIDIST_* overrides so tests see the shipped defaults"""
    for var in list(config.ENV_OVERRIDES) + ['UNIDIST_CONFIG']:
        monkeypatch.delenv(var, raising=False)
    config.reload_config()
    return monkeypatch


@pytest.fixture(autouse=True)
def restore_config():
    """Automatically reload configuration after each test"""
    yield
    config.reload_config()


# Pytest markers for test categorization
def pytest_configure(config):
    """Configure custom pytest markers"""
    config.addinivalue_line(
        "markers", "unit: mark test as a unit test"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "performance: mark test as a performance test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )
    config.addinivalue_line(
        "markers", "e2e: mark test as an end-to-end test"
    )
