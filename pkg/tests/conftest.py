import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lawprice import AtomSpace, Payoff

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def payoff(*values) -> Payoff:
    return Payoff(AtomSpace(len(values)), np.asarray(values, dtype=float))


@pytest.fixture
def space4() -> AtomSpace:
    return AtomSpace(4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
