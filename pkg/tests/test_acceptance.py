"""End-to-end acceptance checks at the stated tolerances (master seed 0, fixed in advance)."""

import numpy as np
import pytest

from conftest import record
from noisyhk import ModelConfig, NoiseModel, SeedStream, run_trajectory
from noisyhk.core import OpinionState, neighbor_set, step
from noisyhk.harness import (HypothesisError, preset_homo_prejudice, preset_noise_free_baseline,
                             preset_theorem1a, preset_theorem1c, preset_theorem2, preset_theorem3,
                             preset_theorem4, run_ensemble)
from noisyhk.metrics import anchored_deviation, cluster_partition, diameter
from noisyhk.noise import sample_noise

SEED = 0
THRESHOLD = 0.95

pytestmark = pytest.mark.slow


def fraction_line(report):
    parts = [f"{s.check.label} {s.pass_count}/{s.replications}" for s in report.summaries]
    return "; ".join(parts)


@pytest.fixture(scope="module")
def theorem2_report():
    return run_ensemble(preset_theorem2(20, 0.2, 0.02, 0.4, 0.6, 0.2, seed=SEED))


def test_criterion_1_theorem1a():
    report = run_ensemble(preset_theorem1a(10, 0.2, 0.01, seed=SEED))
    frac = report.summaries[0].pass_fraction
    ok = frac >= THRESHOLD
    record("criterion 1", ok, f"confirmed 2δ-consensus {fraction_line(report)} (need ≥ {THRESHOLD})")
    assert ok, fraction_line(report)


def test_criterion_2_theorem1c():
    report = run_ensemble(preset_theorem1c(10, 0.2, 0.008, b1_value=0.5, seed=SEED))
    bounds = sorted(round(s.check.bound, 12) for s in report.summaries)
    assert bounds == [0.016, 0.088]
    ok = all(s.pass_fraction >= THRESHOLD for s in report.summaries)
    record("criterion 2", ok, f"{fraction_line(report)} (need ≥ {THRESHOLD} each)")
    assert ok, fraction_line(report)


def test_criterion_3_theorem2(theorem2_report):
    report = theorem2_report
    assert all(round(s.check.bound, 12) == 0.35 for s in report.summaries)
    all_within = all(s.pass_count == s.replications for s in report.summaries)
    two = report.expected_cluster_fraction
    ok = all_within and two >= THRESHOLD
    record("criterion 3", ok, f"{fraction_line(report)} (need all); 2 clusters in {two:.2f} "
                              f"(need ≥ {THRESHOLD}); histogram {report.cluster_histogram}")
    assert ok


def test_criterion_4_theorem3():
    report = run_ensemble(preset_theorem3(20, 0.1, 0.01, 0.8, 0.9, 0.1, seed=SEED))
    assert all(round(s.check.bound, 12) == 0.0125 for s in report.summaries)
    both = sum(r.passed and r.clusters == 2 for r in report.results) / len(report.results)
    # every replication that meets the bounds must have split into exactly two clusters
    consistent = all(r.clusters == 2 for r in report.results if r.passed)
    ok = both >= THRESHOLD and consistent
    record("criterion 4", ok, f"{fraction_line(report)}; bounds and exactly 2 clusters in {both:.2f} "
                              f"(need ≥ {THRESHOLD}); histogram {report.cluster_histogram}")
    assert ok


def test_criterion_5_noise_free_baseline(theorem2_report):
    n = 20
    half = tuple(range(n // 2))
    cfg = ModelConfig("hetero-prejudice", n, 0.2, NoiseModel.zero(), alpha=0.4, j1=0.6, j2=0.2,
                      s1=half, s2=tuple(range(n // 2, n)))
    base = run_ensemble(preset_noise_free_baseline(cfg, replications=50, seed=SEED))
    noisy = theorem2_report.results[:50]
    # the noisy ensemble replays the baseline's initial opinions seed for seed
    for i in (0, 17, 49):
        x_free = run_trajectory(cfg, horizon=0, seed=SeedStream(SEED, i)).opinions[0]
        x_noisy = run_trajectory(theorem2_report.spec.config, horizon=0, seed=SeedStream(SEED, i)).opinions[0]
        assert np.array_equal(x_free, x_noisy)
    fixed = all(r.fixed_point_step is not None for r in base.results)
    many = max(r.clusters for r in base.results)
    levels = max(r.levels for r in base.results)
    collapsed = sum(r.clusters == 2 for r in noisy)
    ok = fixed and many > 2 and collapsed == 50
    record("criterion 5", ok, f"fixed points {sum(r.fixed_point_step is not None for r in base.results)}/50; "
                              f"max gap clusters {many} (need > 2; max distinct levels {levels}); "
                              f"noisy 2-cluster {collapsed}/50 (need 50)")
    assert ok


def test_criterion_6_theorem4ii():
    report = run_ensemble(preset_theorem4("ii", 10, 0.2, 0.01, 0.2, 0.8, seed=SEED))
    assert all(round(s.check.bound, 12) == 0.02 for s in report.summaries)
    ok = all(s.pass_fraction >= THRESHOLD for s in report.summaries)
    record("criterion 6", ok, f"{fraction_line(report)} (need ≥ {THRESHOLD} each)")
    assert ok


def _components(x, eps):
    n = len(x)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(x[i] - x[j]) <= eps:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def test_criterion_7_property_suite():
    rng = np.random.default_rng(20240607)
    failures = []
    for k in range(1000):
        n = int(rng.integers(1, 31))
        eps = float(rng.uniform(0.01, 1.0))
        x = rng.uniform(0, 1, n)
        if k % 3 == 0:
            x = np.round(x, 1)  # ties and exact eps gaps
        got = sorted(tuple(int(i) for i in g) for g in cluster_partition(x, eps))
        if got != _components(x, eps):
            failures.append(f"partition k={k}")
        y, z = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
        for sub in (None, tuple(sorted(set(rng.integers(0, n, max(1, n // 2)).tolist())))):
            if diameter(x, sub) > anchored_deviation(x, sub, y[0]) * 2 + 1e-15:
                failures.append(f"diameter vs deviation k={k}")
            if anchored_deviation(x, sub, y[0]) > anchored_deviation(x, sub, z[0]) + abs(y[0] - z[0]) + 1e-15:
                failures.append(f"anchor triangle k={k}")

    cfg = ModelConfig("hetero-stubborn", 12, 0.2, NoiseModel.uniform(0.05), b1=0.1, b2=0.7)
    a = run_trajectory(cfg, horizon=300, seed=11)
    b = run_trajectory(cfg, horizon=300, seed=11)
    if not np.array_equal(a.opinions, b.opinions):
        failures.append("replay")
    if a.opinions.min() < 0 or a.opinions.max() > 1:
        failures.append("bounds")
    if not np.array_equal(a.stubborn, np.array([0.1, 0.7])):
        failures.append("stubborn")
    state = OpinionState.initial(cfg, a.opinions[150])
    for i in range(cfg.n):
        nb = set(neighbor_set(i, state, cfg).tolist())
        if i not in nb:
            failures.append(f"self-membership {i}")
        for j in nb:
            if j < cfg.n and i not in set(neighbor_set(j, state, cfg).tolist()):
                failures.append(f"symmetry {i},{j}")
    clique = ModelConfig("plain", 6, 0.5)
    s1 = step(OpinionState.initial(clique, np.linspace(0.3, 0.7, 6)), clique)
    if not np.allclose(s1.mobile, 0.5, atol=1e-15) or np.ptp(s1.mobile) != 0:
        failures.append("clique collapse")
    for model in (NoiseModel.uniform(0.05), NoiseModel("tgauss", 0.05, sigma=0.02),
                  NoiseModel("rademacher", 0.05, atom=0.03)):
        draws = sample_noise(model, np.random.default_rng(1), 200_000)
        if np.abs(draws).max() > model.delta:
            failures.append(f"noise bound {model.family.value}")
        if abs(draws.mean()) > 4 * np.sqrt(model.variance() / draws.size):
            failures.append(f"noise symmetry {model.family.value}")
    ok = not failures
    record("criterion 7", ok, "1000 partition/union-find and triangle-inequality states, replay, bounds, "
                              "stubborn, neighbour symmetry, clique, noise bounds"
                              + ("" if ok else f"; failures {failures[:5]}"))
    assert ok, failures


GATES = [
    ("1a", lambda: preset_theorem1a(10, 0.2, 0.11), "0.11", "0.1"),
    ("1b", lambda: preset_homo_prejudice(10, 0.2, 0.0, 0.4, 0.5), "0", "0"),
    ("1c", lambda: preset_theorem1c(10, 0.2, 0.01), "0.01", "0.00909091"),
    ("2", lambda: preset_theorem2(20, 0.2, 0.02, 0.4, 0.35, 0.2), "0.15", "0.2"),
    ("3", lambda: preset_theorem3(20, 0.2, 0.02, 0.4, 0.6, 0.2), "0.4", "0.9"),
    ("4i", lambda: preset_theorem4("i", 10, 0.2, 0.4 / 11, 0.2, 0.8), "0.0363636", "0.0363636"),
    ("4ii", lambda: preset_theorem4("ii", 10, 0.2, 0.01, 0.2, 0.8, x0=[0.1] * 4 + [0.5] + [0.9] * 5),
     "0.5", "0.2"),
]


def test_criterion_8_hypothesis_gates():
    missed = []
    for name, build, lhs, rhs in GATES:
        try:
            build()
        except HypothesisError as exc:
            text = str(exc)
            if lhs not in text or rhs not in text:
                missed.append(f"{name}: {text}")
        else:
            missed.append(f"{name}: accepted")
    ok = not missed
    record("criterion 8", ok, f"{len(GATES) - len(missed)}/{len(GATES)} presets reject out-of-hypothesis "
                              "parameters quoting both sides" + ("" if ok else f"; {missed}"))
    assert ok, missed
