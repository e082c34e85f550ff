import numpy as np
import pytest

from puosc.core import PuParams


@pytest.fixture
def p54():
    """alpha = 5, beta = 4, i.e. omega = (2, 1)."""
    return PuParams.from_frequencies(2.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_params(rng, beta_floor=0.1):
    alpha = rng.uniform(-3.0, 3.0)
    beta = rng.uniform(beta_floor, 3.0) * rng.choice([-1.0, 1.0])
    return PuParams(alpha, beta)


def random_freq_params(rng, sep=0.1):
    while True:
        w1, w2 = rng.uniform(0.4, 2.5, 2)
        if abs(w1 * w1 - w2 * w2) >= sep:
            return PuParams.from_frequencies(float(w1), float(w2))
