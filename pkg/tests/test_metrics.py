import itertools

import numpy as np
import pytest

from noisyhk import ModelConfig, NoiseModel, run_trajectory
from noisyhk.metrics import (anchored_deviation, cluster_count, cluster_partition, compute_series,
                             consensus_entry, default_tail_window, diameter, limsup_estimate, running_means)


def union_find_components(values, eps):
    """Connected components of the graph joining |x_i - x_j| <= eps."""
    parent = list(range(len(values)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in itertools.combinations(range(len(values)), 2):
        if abs(values[i] - values[j]) <= eps:
            parent[find(i)] = find(j)
    groups = {}
    for i in range(len(values)):
        groups.setdefault(find(i), set()).add(i)
    return {frozenset(g) for g in groups.values()}


def brute_entry(series, phi):
    for T in range(len(series)):
        if all(v <= phi for v in series[T:]):
            return T
    return None


class TestDiameter:
    def test_values(self):
        assert diameter(np.array([0.1, 0.4, 0.9])) == pytest.approx(0.8)
        assert diameter(np.array([0.1, 0.4, 0.9]), [1]) == 0.0

    def test_against_pairwise_scan(self):
        x = np.random.default_rng(0).uniform(0, 1, 20)
        brute = max(abs(a - b) for a, b in itertools.product(x, x))
        assert diameter(x) == brute

    def test_empty_subset(self):
        with pytest.raises(ValueError):
            diameter(np.array([0.1, 0.2]), [])

    def test_batched(self):
        X = np.array([[0.1, 0.5], [0.3, 0.3]])
        assert diameter(X).tolist() == pytest.approx([0.4, 0.0])


class TestAnchoredDeviation:
    def test_values(self):
        assert anchored_deviation(np.array([0.5, 0.5]), None, 0.5) == 0
        assert anchored_deviation(np.array([0.1, 0.9]), None, 0.5) == pytest.approx(0.4)

    def test_against_scan(self):
        x = np.random.default_rng(1).uniform(0, 1, 25)
        subset = [0, 3, 7, 11, 24]
        best = 0.0
        for i in subset:
            best = max(best, abs(x[i] - 0.37))
        assert anchored_deviation(x, subset, 0.37) == best

    def test_empty_subset(self):
        with pytest.raises(ValueError):
            anchored_deviation(np.array([0.1]), (), 0.5)


class TestConsensusEntry:
    def test_confirmed(self):
        r = consensus_entry([0.5, 0.3, 0.01, 0.01, 0.01], 0.02, min_tail=2)
        assert (r.entry_time, r.tail_margin, r.verdict) == (2, 2, "confirmed")

    def test_inconclusive_when_tail_short(self):
        r = consensus_entry([0.5, 0.3, 0.01, 0.01, 0.01], 0.02, min_tail=3)
        assert r.entry_time == 2 and r.verdict == "inconclusive"

    def test_never(self):
        r = consensus_entry([0.5, 0.4, 0.3], 0.1)
        assert r.entry_time is None and r.verdict == "none"

    def test_after_last_exceedance(self):
        s = [0.5, 0.01, 0.01, 0.3, 0.01, 0.01]
        assert consensus_entry(s, 0.02).entry_time == brute_entry(s, 0.02) == 4

    def test_random_series_match_reverse_scan(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            s = rng.uniform(0, 1, rng.integers(1, 30))
            phi = rng.uniform(0, 1)
            assert consensus_entry(s, phi).entry_time == brute_entry(list(s), phi)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            consensus_entry([], 0.1)
        with pytest.raises(ValueError):
            consensus_entry([0.1], -1)


class TestClusterPartition:
    def test_two_groups(self):
        groups = cluster_partition(np.array([0.1, 0.15, 0.8]), 0.2)
        assert [g.tolist() for g in groups] == [[0, 1], [2]]

    def test_equal_values(self):
        assert len(cluster_partition(np.full(6, 0.3), 0.05)) == 1

    def test_gap_rule_chains(self):
        # spread 0.3 exceeds epsilon but every gap is within it
        assert len(cluster_partition(np.array([0.0, 0.15, 0.3]), 0.2)) == 1

    def test_matches_union_find(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = rng.uniform(0, 1, 20)
            got = {frozenset(g.tolist()) for g in cluster_partition(x, 0.1)}
            assert got == union_find_components(x, 0.1)

    def test_count_vectorised(self):
        X = np.array([[0.1, 0.15, 0.8], [0.0, 0.5, 1.0]])
        assert cluster_count(X, 0.2).tolist() == [2, 3]


class TestLimsup:
    def test_constant(self):
        assert limsup_estimate([0.3] * 10, 4) == 0.3

    def test_window(self):
        assert limsup_estimate([1, 1, 0.1, 0.2, 0.1], 3) == 0.2

    def test_suffix_scan(self):
        s = np.random.default_rng(4).uniform(size=50)
        for w in range(1, 51):
            assert limsup_estimate(s, w) == max(s[len(s) - w:])

    def test_zero_window_rejected(self):
        with pytest.raises(ValueError):
            limsup_estimate([0.1], 0)
        with pytest.raises(ValueError):
            limsup_estimate([0.1], 2)

    def test_default_window(self):
        assert default_tail_window(20_000) == 4000
        assert default_tail_window(1000) == 500
        assert default_tail_window(100) == 101


def test_running_means_simple():
    assert running_means([1, 2, 3, 6], 1).tolist() == [2, 2.5, 11 / 3]


def test_compute_series_shapes():
    cfg = ModelConfig("hetero-stubborn", 6, 0.2, NoiseModel.uniform(0.01), b1=0.2, b2=0.8)
    tr = run_trajectory(cfg, horizon=40, seed=1)
    series = compute_series(tr)
    assert len(series) == 41
    assert list(series.anchored) == ["B1", "B2"]
    assert np.all((series.diameter >= 0) & (series.diameter <= 1))
    assert series.diameter[5] == diameter(tr[5])
