import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsa.diagrams import bottleneck, top_k_persistences, wasserstein
from mlsa.persistence import PersistenceDiagram

from .oracles import brute_bottleneck, brute_wasserstein

INF = np.inf


def D(*dots, k=0):
    return PersistenceDiagram(k, np.array(dots, dtype=float).reshape(-1, 2))


def random_diagram(rng, max_dots=6):
    n = int(rng.integers(0, max_dots + 1))
    b = rng.random(n)
    return np.column_stack([b, b + rng.random(n) * rng.choice([0.1, 1.0])])


def test_identical_diagrams():
    d = D((0, 1), (0.2, 0.5), (0.3, INF))
    assert bottleneck(d, d) == 0
    for p in (1, 2, 3.5):
        assert wasserstein(d, d, p) == 0


def test_single_dot_examples():
    assert bottleneck(D((0, 2)), D((0, 2.5))) == pytest.approx(0.5)
    assert bottleneck(D((0, 2)), D()) == pytest.approx(1.0)
    assert wasserstein(D((0, 2)), D((0, 2.5)), 1) == pytest.approx(0.5)


def test_unmatched_dot_pays_half_persistence():
    # the enumeration oracle gives 2: keep (0,2) matched, send (0,4) to the diagonal
    a, b = [(0, 2), (0, 4)], [(0, 2)]
    want = brute_wasserstein(a, b, 1)
    assert want == pytest.approx(2.0)
    assert wasserstein(D(*a), D(*b), 1) == pytest.approx(want)


def test_errors():
    with pytest.raises(ValueError):
        bottleneck(D((0, 1)), D((0, 1), k=1))
    with pytest.raises(ValueError):
        wasserstein(D((0, 1)), D((0, 1)), 0.5)


def test_essential_dots():
    assert bottleneck(D((0, INF)), D()) == INF
    assert wasserstein(D((0, INF)), D((0, 1)), 1) == INF
    assert bottleneck(D((0, INF), (0.1, 0.2)), D((0.3, INF))) == pytest.approx(0.3)
    # sorted matching of essential births
    assert bottleneck(D((0, INF), (1, INF)), D((0.9, INF), (0.05, INF))) == pytest.approx(0.1)
    assert wasserstein(D((0, INF), (1, INF)), D((0.9, INF), (0.05, INF)), 1) == pytest.approx(0.15)


@pytest.mark.parametrize("seed", range(30))
def test_match_enumeration_oracle(seed):
    rng = np.random.default_rng(seed)
    a, b = random_diagram(rng), random_diagram(rng)
    assert bottleneck(D(*a), D(*b)) == pytest.approx(brute_bottleneck(a, b), abs=1e-9)
    for p in (1, 2):
        assert wasserstein(D(*a), D(*b), p) == pytest.approx(brute_wasserstein(a, b, p), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_pseudometric_properties(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (D(*random_diagram(rng, 5)) for _ in range(3))
    ab = bottleneck(a, b)
    assert ab == bottleneck(b, a)
    assert bottleneck(a, c) <= ab + bottleneck(b, c) + 1e-9
    for p in (1, 2, 4):
        assert ab <= wasserstein(a, b, p) + 1e-12


@pytest.mark.parametrize("dots,k,cap,want", [
    ([], 6, 0.3, [0, 0, 0, 0, 0, 0]),
    ([(0, 0.3), (0.1, 0.2)], 2, 0.3, [0.3, 0.1]),
    ([(0, INF)], 3, 0.3, [0.3, 0, 0]),
    ([(0, 0.05), (0, 0.5), (0.2, 0.25)], 2, 0.4, [0.4, 0.05]),
])
def test_top_k_persistences(dots, k, cap, want):
    np.testing.assert_allclose(top_k_persistences(D(*dots), k, cap), want)
