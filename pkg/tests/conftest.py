import numpy as np
import pytest

from twobit.expansion import construct_fixture
from twobit.graph import TannerGraph

_CACHE: dict = {}


def fixture_graph(kind: str, n: int = 40, seed: int = 0) -> TannerGraph:
    """Constructed test graphs, memoised across the session."""
    key = (kind, n, seed)
    if key not in _CACHE:
        _CACHE[key] = construct_fixture(kind, n=n, seed=seed)
    return _CACHE[key]


@pytest.fixture(scope="session")
def fix_girth6() -> TannerGraph:
    return fixture_graph("theorem1_positive", 40, 0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_graph(rng, n: int, m: int, gamma: int) -> TannerGraph:
    """Left-regular graph with uniformly chosen check sets (4-cycles allowed)."""
    rows = [rng.choice(m, size=gamma, replace=False).tolist() for _ in range(n)]
    return TannerGraph(n, m, rows)
