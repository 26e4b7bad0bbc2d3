import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwac.dataset import Item, load_dataset
from cwac.errors import ConsistencyError, ParameterError, UndefinedConfidenceError
from cwac.hits import (
    BipartiteIncidence,
    HubWeights,
    build_incidence,
    compute_hub_weights,
    hub_weights,
    w_confidence,
    w_support,
)

from corpus import random_dataset

GOLDEN = (1 + math.sqrt(5)) / 2


def connected(m):
    """Whether the bipartite graph of 0/1 matrix ``m`` is connected."""
    n = m.shape[0]
    seen = {0}
    frontier = [0]
    while frontier:
        t = frontier.pop()
        for j in np.flatnonzero(m[t]):
            for u in np.flatnonzero(m[:, j]):
                if u not in seen:
                    seen.add(int(u))
                    frontier.append(int(u))
    return len(seen) == n


def dense_power_oracle(m, seed=0, rounds=20000):
    """Principal eigenvector of M M^T by plain iteration from a random start."""
    a = m @ m.T
    v = np.random.default_rng(seed).random(m.shape[0]) + 0.1
    for _ in range(rounds):
        nv = a @ v
        nv /= np.linalg.norm(nv)
        if np.abs(nv - v).max() < 1e-15:
            break
        v = nv
    return v / v.sum()


def test_t4_incidence(t4):
    g = build_incidence(t4)
    assert (g.transaction_count, g.item_count, g.edge_count) == (4, 6, 12)


def test_t4_incidence_without_class(t4):
    g = build_incidence(t4, include_class_items=False)
    assert (g.item_count, g.edge_count) == (4, 8)


def test_single_transaction():
    d = load_dataset("x,y,c\na,b,+\n")
    g = build_incidence(d)
    assert g.adjacency == ((0, 1, 2),)
    assert hub_weights(d).weights.tolist() == [1.0]


def test_hiv_incidence(hiv):
    g = build_incidence(hiv)
    assert g.transaction_count == 14
    assert g.item_count == 3 + 3 + 2 + 2 + 2
    assert g.edge_count == 70


def test_t4_uniform(t4):
    hw = hub_weights(t4)
    np.testing.assert_allclose(hw.weights, 0.25, atol=1e-12)
    assert hw.converged


def test_golden_ratio():
    hw = compute_hub_weights(BipartiteIncidence.from_matrix([[1, 1], [1, 0]]))
    assert hw.weights[0] / hw.weights[1] == pytest.approx(GOLDEN, abs=1e-6)
    np.testing.assert_allclose(hw.weights, [0.6180, 0.3820], atol=1e-4)
    # Direct eigen-solution of [[2, 1], [1, 1]].
    vals, vecs = np.linalg.eigh(np.array([[2.0, 1.0], [1.0, 1.0]]))
    v = np.abs(vecs[:, -1])
    np.testing.assert_allclose(hw.weights, v / v.sum(), atol=1e-6)


def test_iteration_cap_flags():
    m = np.random.default_rng(3).integers(0, 2, (8, 8))
    m[:, 0] = 1
    hw = compute_hub_weights(BipartiteIncidence.from_matrix(m), tol=1e-300, max_iter=3)
    assert not hw.converged
    assert hw.iterations == 3
    assert hw.weights.sum() == pytest.approx(1.0)


def test_parameter_errors():
    g = BipartiteIncidence.from_matrix([[1]])
    with pytest.raises(ParameterError):
        compute_hub_weights(g, tol=0)
    with pytest.raises(ParameterError):
        compute_hub_weights(g, max_iter=0)
    with pytest.raises(ConsistencyError):
        BipartiteIncidence.from_matrix([[1, 0], [0, 0]])


def test_matches_dense_oracle_small_exhaustive():
    for n, k in itertools.product(range(1, 4), repeat=2):
        for bits in itertools.product((0, 1), repeat=n * k):
            m = np.array(bits, dtype=float).reshape(n, k)
            if (m.sum(1) == 0).any() or not connected(m):
                continue
            hw = compute_hub_weights(BipartiteIncidence.from_matrix(m))
            np.testing.assert_allclose(hw.weights, dense_power_oracle(m), atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_matches_dense_oracle_random(seed):
    rng = np.random.default_rng(seed)
    n, k = rng.integers(1, 11, size=2)
    m = (rng.random((n, k)) < rng.uniform(0.2, 0.9)).astype(float)
    m[:, 0] = 1.0  # connected, no empty rows
    hw = compute_hub_weights(BipartiteIncidence.from_matrix(m))
    assert hw.converged
    np.testing.assert_allclose(hw.weights, dense_power_oracle(m, seed), atol=1e-6)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), perm_seed=st.integers(0, 10**6))
def test_weights_are_distribution_and_equivariant(seed, perm_seed):
    d = random_dataset(seed, max_attributes=6, max_rows=40)
    hw = hub_weights(d)
    assert (hw.weights >= 0).all()
    assert hw.weights.sum() == pytest.approx(1.0, abs=1e-9)
    perm = np.random.default_rng(perm_seed).permutation(len(d))
    permuted = hub_weights(d.subset(perm))
    np.testing.assert_allclose(permuted.weights, hw.weights[perm], atol=1e-9)


class TestMeasures:
    def test_t4_support(self, t4):
        hw = hub_weights(t4)
        plus = t4.item("class", "+")
        assert w_support([t4.item("A", "a1")], plus, hw, t4) == pytest.approx(0.5)
        assert w_support([], plus, hw, t4) == pytest.approx(0.5)

    def test_absent_antecedent(self, t4):
        hw = hub_weights(t4)
        ante = [t4.item("A", "a1"), t4.item("A", "a2")]
        assert w_support(ante, t4.item("class", "+"), hw, t4) == 0.0

    def test_t4_confidence(self, t4):
        hw = hub_weights(t4)
        plus = t4.item("class", "+")
        assert w_confidence([t4.item("A", "a1")], plus, hw, t4) == pytest.approx(1.0)
        assert w_confidence([t4.item("B", "b1")], plus, hw, t4) == pytest.approx(0.5)

    def test_pure_antecedent(self, hiv):
        hw = hub_weights(hiv)
        ante = [hiv.item("CD4 Cell Count", "<200")]
        assert w_confidence(ante, hiv.item("AIDS", "Yes"), hw, hiv) == 1.0

    def test_errors(self, t4):
        hw = hub_weights(t4)
        plus = t4.item("class", "+")
        with pytest.raises(ConsistencyError):
            w_support([], plus, HubWeights.uniform(3), t4)
        with pytest.raises(ParameterError):
            w_support([plus], plus, hw, t4)
        with pytest.raises(UndefinedConfidenceError):
            w_confidence([t4.item("A", "a1"), t4.item("A", "a2")], plus, hw, t4)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_antimonotone_and_confidence_sums(self, seed):
        d = random_dataset(seed, max_attributes=5, max_rows=40)
        hw = hub_weights(d)
        rng = np.random.default_rng(seed)
        classes = [Item(d.class_index, c) for c in range(d.n_classes)]
        row = d.codes[rng.integers(len(d))]
        items = [Item(a, int(row[a])) for a in d.feature_indices]
        for r in range(len(items)):
            for small in itertools.combinations(items, r):
                big = small + tuple(it for it in items if it not in small)[:1]
                for c in classes:
                    assert w_support(big, c, hw, d) <= w_support(small, c, hw, d)
                total = sum(w_confidence(small, c, hw, d) for c in classes)
                assert total == pytest.approx(1.0, abs=1e-12)

    def test_uniform_weights_equal_classic_support(self, hiv):
        hw = HubWeights.uniform(len(hiv))
        yes = hiv.item("AIDS", "Yes")
        ante = [hiv.item("Tuberculosis (TB)", "yes")]
        assert w_support(ante, yes, hw, hiv) == pytest.approx(6 / 14, abs=1e-15)
