import numpy as np
import pytest

from gauss_extremal.gauss_model import GaussianAuxChannel, GaussianPairModel
from gauss_extremal.rng import random_pd


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def make_scalar_triple(gen, allow_degenerate=True):
    """Random scalar model with two valid descriptions."""
    rho = gen.uniform(-0.99, 0.99)
    model = GaussianPairModel.scalar(rho)

    def channel(side):
        if allow_degenerate and gen.uniform() < 0.05:
            return GaussianAuxChannel.degenerate_on(side)
        return GaussianAuxChannel.scalar_corr(gen.uniform(0.0, 0.999), side)

    return model, channel("x"), channel("y")


def make_vector_triple(gen, n=None, allow_degenerate=True):
    """Random vector model (dimension <= 8) with two valid descriptions."""
    if n is None:
        n = int(gen.integers(2, 9))
    model = GaussianPairModel.vector(random_pd(gen, n), random_pd(gen, n))

    def channel(side):
        if allow_degenerate and gen.uniform() < 0.05:
            return GaussianAuxChannel.degenerate_on(side)
        m = int(gen.integers(1, n + 1))
        return GaussianAuxChannel.linear(gen.standard_normal((m, n)), random_pd(gen, m), side)

    return model, channel("x"), channel("y")
