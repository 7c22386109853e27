import numpy as np
import pytest

from ringsagnac import ProfileFamily, TrapConfig, make_profile


@pytest.fixture
def natural() -> TrapConfig:
    """Natural-unit preset: m = hbar = omega0 = r = 1, rotation 0.1."""
    return TrapConfig()


@pytest.fixture(scope="session")
def random_profile():
    """Factory for admissible random tabulated profiles."""

    def make(rng: np.random.Generator):
        n_nodes = int(rng.integers(5, 13))
        values = rng.uniform(0.1, 1.0, size=n_nodes)
        duration = float(rng.uniform(3.0, 12.0))
        return make_profile(ProfileFamily.TABULATED, duration, samples=values)

    return make
