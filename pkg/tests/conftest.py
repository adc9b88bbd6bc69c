import numpy as np
import pytest

from solsta.types import PhysicalConfig, SwitchingParams


@pytest.fixture
def config():
    """Baseline physics: omega=0.04, N=1."""
    return PhysicalConfig(omega=0.04, n_norm=1.0)


@pytest.fixture
def free_config():
    return PhysicalConfig(omega=0.0, n_norm=1.0)


@pytest.fixture
def slow_params():
    """Slow-compression baseline: A_s=10, s=1, t_f=100."""
    return SwitchingParams(g_base=2.0, a_s_amp=10.0, s_rate=1.0, t_f=100.0)


@pytest.fixture
def fast_params():
    """Fast branch: A_s=10, s=10, t_f=10 (same s*t_f product)."""
    return SwitchingParams(g_base=2.0, a_s_amp=10.0, s_rate=10.0, t_f=10.0)


def assert_close(actual, expected, tol, label=""):
    ok = abs(actual - expected) <= tol
    assert ok, f"{label}: {actual} vs {expected} (tol {tol})"
