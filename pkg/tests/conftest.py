import pytest

from src.families import lookup
from src.idt import IdtModel
from src.rng import RngStream

SEED: int = 20231017


@pytest.fixture
def rng() -> RngStream:
    return RngStream(SEED)


@pytest.fixture
def frechet_model() -> IdtModel:
    """Fréchet θ = 0.5 with L = N, normalized (Ψ_H(x) = x^θ already)."""
    return lookup("frechet", theta=0.5).model()


@pytest.fixture
def german_linear_model() -> IdtModel:
    """F(x) = min{x, 1} with unit-exponential compound Poisson L, as given."""
    return lookup("german-linear").model(normalized=False)


@pytest.fixture
def german_exp_model() -> IdtModel:
    """F(x) = min{exp(x - 1), 1} with L = N, as given."""
    return lookup("german-exp").model(normalized=False)
