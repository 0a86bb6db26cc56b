import numpy as np
import pytest

from horofilter import GenSpec, generate


@pytest.fixture
def p5():
    return generate(GenSpec("path", {"n": 5}))


@pytest.fixture
def c4():
    return generate(GenSpec("cycle", {"n": 4}))


@pytest.fixture
def star4():
    return generate(GenSpec("star", {"leaves": 4}))


def random_graph(n: int, p: float, seed: int):
    """Seeded ER graph allowed to be disconnected (loader-level tests)."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return list(zip(iu[mask].tolist(), ju[mask].tolist()))
