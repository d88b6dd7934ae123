"""Seeded Monte Carlo ensembles and theorem presets.

A preset turns theorem parameters into an :class:`ExperimentSpec`: it checks
the theorem's hypotheses exactly (open and closed endpoints as stated),
builds the model config and lists the bounds to test. :func:`run_ensemble`
then simulates every replication and scores each bound.

Almost-sure claims are scored as high-probability claims at a finite
horizon: a check passes for the ensemble when at least ``pass_threshold`` of
the replications satisfy it.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .core import ModelConfig, Variant, iterate, sample_initial
from .noise import NoiseFamily, NoiseModel, NoiseStream
from .seeds import SeedStream

NOISY_HORIZON = 20_000
NOISE_FREE_HORIZON = 10_000
TAIL = 4_000
PASS_THRESHOLD = 0.95

SUBSETS = ("V", "S1", "S2", "V1", "V2")


class SpecError(ValueError):
    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid experiment spec: " + "; ".join(self.problems))


_NEGATE = {">": "≯", "<": "≮", ">=": "≱", "<=": "≰"}
_SHOW = {">=": "≥", "<=": "≤"}


@dataclass(frozen=True)
class Hypothesis:
    """One inequality from a theorem statement, evaluated on concrete values."""

    statement: str
    lhs: float
    relation: str
    rhs: float

    @property
    def holds(self) -> bool:
        a, b = self.lhs, self.rhs
        return {">": a > b, "<": a < b, ">=": a >= b, "<=": a <= b}[self.relation]

    def describe(self) -> str:
        rel = _SHOW.get(self.relation, self.relation) if self.holds else _NEGATE[self.relation]
        return f"{self.statement}: {self.lhs:.6g} {rel} {self.rhs:.6g}"

    def to_dict(self) -> dict:
        return {"statement": self.statement, "lhs": self.lhs, "relation": self.relation,
                "rhs": self.rhs, "holds": self.holds}


class HypothesisError(ValueError):
    def __init__(self, label: str, violated: Sequence[Hypothesis]):
        self.violated = list(violated)
        lines = "; ".join(h.describe() for h in self.violated)
        super().__init__(f"{label}: hypothesis violated: {lines}")


@dataclass(frozen=True)
class BoundCheck:
    """Bound on one metric; ``bound=None`` makes the check descriptive only.

    ``criterion`` is ``"entry"`` (confirmed finite-time entry), ``"limsup"``
    (tail maximum within the bound) or ``"report"``.
    """

    subset: str
    mode: str
    bound: Optional[float]
    label: str
    anchor: Optional[float] = None
    criterion: str = "limsup"

    def problems(self) -> list[str]:
        out = []
        if self.subset not in SUBSETS:
            out.append(f"{self.label}: unknown subset {self.subset!r}")
        if self.mode not in ("diameter", "anchored"):
            out.append(f"{self.label}: mode must be diameter or anchored")
        if self.mode == "anchored" and self.anchor is None:
            out.append(f"{self.label}: anchored mode requires an anchor")
        if self.criterion not in ("entry", "limsup", "report"):
            out.append(f"{self.label}: unknown criterion {self.criterion!r}")
        if self.criterion != "report" and (self.bound is None or self.bound < 0):
            out.append(f"{self.label}: bound must be >= 0")
        return out

    def to_dict(self) -> dict:
        return {"label": self.label, "subset": self.subset, "mode": self.mode, "anchor": self.anchor,
                "bound": self.bound, "criterion": self.criterion}


@dataclass(frozen=True)
class ExperimentSpec:
    config: ModelConfig
    checks: tuple = ()
    replications: int = 100
    horizon: int = NOISY_HORIZON
    min_tail: int = TAIL
    tail_window: Optional[int] = None
    master_seed: int = 0
    label: str = "custom"
    groups: tuple = ()  # (name, indices) pairs for V1/V2
    regions: Optional[tuple] = None  # per-agent interval lists for initial sampling
    x0: Optional[tuple] = None  # shared initial state, overrides regions
    hypotheses: tuple = ()
    out_of_hypothesis: bool = False
    expected_clusters: Optional[int] = None
    baseline: bool = False
    pass_threshold: float = PASS_THRESHOLD
    notes: tuple = ()

    @property
    def window(self) -> int:
        if self.tail_window is not None:
            return self.tail_window
        return metrics.default_tail_window(self.horizon)

    def subset(self, name: str) -> Optional[tuple]:
        """Agent indices for a subset name; None means all of V."""
        if name == "V":
            return None
        if name == "S1":
            return self.config.s1
        if name == "S2":
            return self.config.s2
        return dict(self.groups).get(name)

    def problems(self) -> list[str]:
        out = []
        if self.replications < 1:
            out.append("replications must be >= 1")
        if self.horizon < 0:
            out.append("horizon must be >= 0")
        if not self.horizon > self.min_tail:
            out.append(f"horizon ({self.horizon}) must exceed min_tail ({self.min_tail})")
        if self.tail_window is not None and not 1 <= self.tail_window <= self.horizon + 1:
            out.append("tail_window must lie in 1..horizon+1")
        if not 0 < self.pass_threshold <= 1:
            out.append("pass_threshold must lie in (0,1]")
        n = self.config.n
        for check in self.checks:
            out += check.problems()
            if check.subset in SUBSETS and check.subset != "V":
                idx = self.subset(check.subset)
                if not idx:
                    out.append(f"{check.label}: subset {check.subset} is empty or undefined for this config")
                elif min(idx) < 0 or max(idx) >= n:
                    out.append(f"{check.label}: subset {check.subset} has indices outside 0..{n - 1}")
        if self.x0 is not None:
            x0 = np.asarray(self.x0, dtype=float)
            if x0.shape != (n,) or np.any((x0 < 0) | (x0 > 1)):
                out.append(f"x0 must hold n={n} values in [0,1]")
        if self.regions is not None and len(self.regions) != n:
            out.append("regions must give one interval list per agent")
        return out

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "config": self.config.to_dict(),
            "replications": self.replications,
            "horizon": self.horizon,
            "min_tail": self.min_tail,
            "tail_window": self.window,
            "master_seed": self.master_seed,
            "pass_threshold": self.pass_threshold,
            "groups": {k: list(v) for k, v in self.groups},
            "checks": [c.to_dict() for c in self.checks],
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "out_of_hypothesis": self.out_of_hypothesis,
            "expected_clusters": self.expected_clusters,
            "baseline": self.baseline,
            "notes": list(self.notes),
        }


# results --------------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    label: str
    tail_max: float
    entry_time: Optional[int]
    confirmed: bool
    passed: Optional[bool]

    def to_dict(self) -> dict:
        return {"label": self.label, "tail_max": self.tail_max, "entry_time": self.entry_time,
                "confirmed": self.confirmed, "passed": self.passed}


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    seed: int
    checks: tuple
    clusters: int
    levels: int
    fixed_point_step: Optional[int]

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {"index": self.index, "seed": self.seed, "passed": self.passed, "clusters": self.clusters,
                "levels": self.levels, "fixed_point_step": self.fixed_point_step,
                "checks": [c.to_dict() for c in self.checks]}


def _quantiles(values) -> Optional[dict]:
    if not values:
        return None
    q = np.quantile(np.asarray(values, dtype=float), [0, 0.25, 0.5, 0.75, 1])
    return dict(zip(("min", "q1", "median", "q3", "max"), (float(v) for v in q)))


@dataclass(frozen=True)
class CheckSummary:
    check: BoundCheck
    pass_count: Optional[int]
    replications: int
    entry_times: Optional[dict]
    tail_max: dict

    @property
    def pass_fraction(self) -> Optional[float]:
        return None if self.pass_count is None else self.pass_count / self.replications

    def to_dict(self) -> dict:
        return {**self.check.to_dict(), "pass_count": self.pass_count, "pass_fraction": self.pass_fraction,
                "entry_time": self.entry_times, "tail_max": self.tail_max}


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    results: tuple  # ReplicationResult, ordered by index

    @property
    def summaries(self) -> list[CheckSummary]:
        out = []
        for k, check in enumerate(self.spec.checks):
            outcomes = [r.checks[k] for r in self.results]
            passes = None if check.criterion == "report" else sum(bool(o.passed) for o in outcomes)
            entries = [o.entry_time for o in outcomes if o.entry_time is not None]
            out.append(CheckSummary(check, passes, len(outcomes), _quantiles(entries),
                                    _quantiles([o.tail_max for o in outcomes])))
        return out

    def pass_fraction(self, label: str) -> float:
        for s in self.summaries:
            if s.check.label == label:
                return s.pass_fraction
        raise KeyError(label)

    @property
    def cluster_histogram(self) -> dict:
        counts = {}
        for r in self.results:
            counts[r.clusters] = counts.get(r.clusters, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def expected_cluster_fraction(self) -> Optional[float]:
        k = self.spec.expected_clusters
        if k is None:
            return None
        return sum(r.clusters == k for r in self.results) / len(self.results)

    @property
    def passed(self) -> bool:
        fractions = [s.pass_fraction for s in self.summaries if s.pass_fraction is not None]
        return all(f >= self.spec.pass_threshold for f in fractions)

    def to_dict(self) -> dict:
        fixed = [r.fixed_point_step for r in self.results]
        out = {
            "spec": self.spec.to_dict(),
            "mode": "out-of-hypothesis exploration" if self.spec.out_of_hypothesis else "in-hypothesis",
            "cluster_rule": "sorted-gap rule: split where consecutive opinions differ by more than epsilon",
            "passed": self.passed,
            "checks": [s.to_dict() for s in self.summaries],
            "clusters": {str(k): v for k, v in self.cluster_histogram.items()},
            "expected_cluster_fraction": self.expected_cluster_fraction,
        }
        if self.spec.baseline:
            reached = [f for f in fixed if f is not None]
            out["fixed_point"] = {"reached": len(reached), "replications": len(fixed),
                                  "step": _quantiles(reached)}
            levels = {}
            for r in self.results:
                levels[r.levels] = levels.get(r.levels, 0) + 1
            out["levels"] = {str(k): v for k, v in sorted(levels.items())}
        out["replications"] = [r.to_dict() for r in self.results]
        return out


# ensemble runner --------------------------------------------------------------


def _run_chunk(spec: ExperimentSpec, indices: Sequence[int]) -> list[ReplicationResult]:
    cfg = spec.config
    seeds = [SeedStream(spec.master_seed, r) for r in indices]
    rngs = [s.generator() for s in seeds]
    if spec.x0 is not None:
        X0 = np.tile(np.asarray(spec.x0, dtype=float), (len(indices), 1))
    else:
        X0 = np.stack([sample_initial(rng, cfg.n, spec.regions) for rng in rngs])
    streams = [NoiseStream(cfg.noise, rng, cfg.n) for rng in rngs]

    plan = [(spec.subset(c.subset), c) for c in spec.checks]
    series = np.empty((len(plan), spec.horizon + 1, len(indices)))
    fixed = np.full(len(indices), -1)
    prev = None
    X = X0
    for t, X in iterate(cfg, X0, streams, spec.horizon):
        for k, (idx, check) in enumerate(plan):
            if check.mode == "diameter":
                series[k, t] = metrics.diameter(X, idx)
            else:
                series[k, t] = metrics.anchored_deviation(X, idx, check.anchor)
        if spec.baseline and prev is not None:
            fixed[np.all(X == prev, axis=1) & (fixed < 0)] = t - 1
        prev = X

    window = spec.window
    results = []
    for j, r in enumerate(indices):
        outcomes = []
        for k, (_, check) in enumerate(plan):
            s = series[k, :, j]
            tail_max = metrics.limsup_estimate(s, window)
            if check.bound is None:
                outcomes.append(CheckOutcome(check.label, tail_max, None, False, None))
                continue
            entry = metrics.consensus_entry(s, check.bound, spec.min_tail)
            ok = entry.confirmed if check.criterion == "entry" else tail_max <= check.bound
            outcomes.append(CheckOutcome(check.label, tail_max, entry.entry_time, entry.confirmed,
                                         None if check.criterion == "report" else bool(ok)))
        results.append(ReplicationResult(
            index=r,
            seed=seeds[j].seed,
            checks=tuple(outcomes),
            clusters=metrics.cluster_count(X[j], cfg.epsilon),
            levels=metrics.distinct_levels(X[j]),
            fixed_point_step=int(fixed[j]) if spec.baseline and fixed[j] >= 0 else None,
        ))
    return results


def run_ensemble(spec: ExperimentSpec, threads: int = 1) -> ExperimentReport:
    """Run every replication of ``spec`` and score its checks.

    ``threads`` caps worker processes (0 = one per CPU). The report does not
    depend on it: each replication owns its random stream and results are
    keyed by replication index.
    """
    problems = spec.problems()
    if problems:
        raise SpecError(problems)
    workers = (os.cpu_count() or 1) if threads == 0 else max(1, threads)
    workers = min(workers, spec.replications)
    indices = list(range(spec.replications))
    if workers == 1:
        results = _run_chunk(spec, indices)
    else:
        chunks = [c.tolist() for c in np.array_split(indices, workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_run_chunk, [spec] * len(chunks), chunks) for r in part]
    results.sort(key=lambda r: r.index)
    return ExperimentReport(spec, tuple(results))


# presets ----------------------------------------------------------------------


def _gate(label: str, hypotheses: Sequence[Hypothesis], override: bool) -> bool:
    """Raise unless every hypothesis holds; returns True when overridden."""
    bad = [h for h in hypotheses if not h.holds]
    if bad and not override:
        raise HypothesisError(label, bad)
    return bool(bad)


def _noise(delta: float, family: str = "uniform") -> NoiseModel:
    if delta == 0:
        return NoiseModel.zero()
    return NoiseModel(NoiseFamily(family), delta)


def _halves(n: int, first: Optional[Sequence[int]], second: Optional[Sequence[int]]):
    if first is None and second is None:
        first = range(n // 2)
    first = tuple(first) if first is not None else ()
    if second is None:
        second = tuple(i for i in range(n) if i not in set(first))
    if not first:
        first = tuple(i for i in range(n) if i not in set(second))
    return tuple(first), tuple(second)


def _common(replications, horizon, seed, min_tail, tail_window):
    return dict(replications=replications, horizon=horizon, master_seed=seed, min_tail=min_tail,
                tail_window=tail_window)


def two_cluster_threshold(epsilon: float, alpha: float, delta: float) -> float:
    """Right-hand side ``epsilon + 2((1-alpha)epsilon + delta)/alpha`` of the bipartite condition."""
    return epsilon + 2 * prejudice_bound(epsilon, alpha, delta)


def prejudice_bound(epsilon: float, alpha: float, delta: float) -> float:
    """``((1-alpha)epsilon + delta)/alpha``: eventual deviation of a prejudiced group from its prejudice."""
    return ((1 - alpha) * epsilon + delta) / alpha


def preset_theorem1a(n, epsilon, delta, replications=100, horizon=NOISY_HORIZON, seed=0, *,
                     noise="uniform", min_tail=TAIL, tail_window=None, override=False) -> ExperimentSpec:
    """Plain noisy HK: finite-time 2*delta consensus for delta in (0, epsilon/2]."""
    label = "Theorem 1(a)"
    hyps = (Hypothesis("δ > 0", delta, ">", 0.0), Hypothesis("δ ≤ ε/2", delta, "<=", epsilon / 2))
    out = _gate(label, hyps, override)
    cfg = ModelConfig(Variant.PLAIN, n, epsilon, _noise(delta, noise))
    checks = (BoundCheck("V", "diameter", 2 * delta, "d_V <= 2δ", criterion="entry"),)
    return ExperimentSpec(cfg, checks, label=label, hypotheses=hyps, out_of_hypothesis=out,
                          **_common(replications, horizon, seed, min_tail, tail_window))


def preset_theorem1b(n, epsilon, delta, alpha, j1, s1=None, replications=100, horizon=NOISY_HORIZON,
                     seed=0, *, noise="uniform", min_tail=TAIL, tail_window=None,
                     override=False) -> ExperimentSpec:
    """Homogeneous prejudice: descriptive report of the deviation from J1.

    The closed-form bound depends on constants not given here, so the check
    carries no bound and never fails.
    """
    label = "Theorem 1(b)"
    hyps = (Hypothesis("δ > 0", delta, ">", 0.0),)
    out = _gate(label, hyps, override)
    s1 = tuple(range(n)) if s1 is None else tuple(s1)
    cfg = ModelConfig(Variant.HOMO_PREJUDICE, n, epsilon, _noise(delta, noise), alpha=alpha, j1=j1, s1=s1)
    checks = (BoundCheck("V", "anchored", None, "d_V^J1 (descriptive)", anchor=j1, criterion="report"),)
    notes = ("bound constants for this case are not computed; the deviation from J1 is reported only",)
    return ExperimentSpec(cfg, checks, label=label, hypotheses=hyps, out_of_hypothesis=out, notes=notes,
                          **_common(replications, horizon, seed, min_tail, tail_window))


preset_homo_prejudice = preset_theorem1b


def preset_theorem1c(n, epsilon, delta, b1_value=0.5, b1_count=1, replications=100, horizon=NOISY_HORIZON,
                     seed=0, *, noise="uniform", min_tail=TAIL, tail_window=None,
                     override=False) -> ExperimentSpec:
    """Homogeneous stubborn agents: 2δ consensus and (n+1)δ consensus with B1."""
    label = "Theorem 1(c)"
    hyps = (Hypothesis("δ > 0", delta, ">", 0.0),
            Hypothesis("δ < ε/(2(n+1))", delta, "<", epsilon / (2 * (n + 1))))
    out = _gate(label, hyps, override)
    cfg = ModelConfig(Variant.HOMO_STUBBORN, n, epsilon, _noise(delta, noise), b1=b1_value, b1_count=b1_count)
    checks = (
        BoundCheck("V", "diameter", 2 * delta, "d_V <= 2δ"),
        BoundCheck("V", "anchored", (n + 1) * delta, "d_V^B1 <= (n+1)δ", anchor=b1_value),
    )
    return ExperimentSpec(cfg, checks, label=label, hypotheses=hyps, out_of_hypothesis=out,
                          **_common(replications, horizon, seed, min_tail, tail_window))


def _prejudice_checks(j1, j2, bound, tag):
    return (
        BoundCheck("S1", "anchored", bound, f"d_S1^J1 <= {tag}", anchor=j1),
        BoundCheck("S2", "anchored", bound, f"d_S2^J2 <= {tag}", anchor=j2),
    )


def preset_theorem2(n, epsilon, delta, alpha, j1, j2, s1=None, s2=None, replications=100,
                    horizon=NOISY_HORIZON, seed=0, *, noise="uniform", min_tail=TAIL, tail_window=None,
                    override=False) -> ExperimentSpec:
    """Heterogeneous prejudice: each group stays within ((1-α)ε+δ)/α of its prejudice."""
    label = "Theorem 2"
    hyps = (Hypothesis("|J1−J2| > ε", abs(j1 - j2), ">", epsilon),
            Hypothesis("ε < 1", epsilon, "<", 1.0))
    out = _gate(label, hyps, override)
    s1, s2 = _halves(n, s1, s2)
    cfg = ModelConfig(Variant.HETERO_PREJUDICE, n, epsilon, _noise(delta, noise), alpha=alpha, j1=j1, j2=j2,
                      s1=s1, s2=s2)
    checks = _prejudice_checks(j1, j2, prejudice_bound(epsilon, alpha, delta), "((1−α)ε+δ)/α")
    return ExperimentSpec(cfg, checks, label=label, hypotheses=hyps, out_of_hypothesis=out, expected_clusters=2,
                          **_common(replications, horizon, seed, min_tail, tail_window))


def preset_theorem3(n, epsilon, delta, alpha, j1, j2, s1=None, s2=None, replications=100,
                    horizon=NOISY_HORIZON, seed=0, *, noise="uniform", min_tail=TAIL, tail_window=None,
                    override=False) -> ExperimentSpec:
    """Well-separated prejudices: each group within δ/α of its prejudice, two clusters."""
    label = "Theorem 3"
    hyps = (Hypothesis("J1−J2 > ε + 2((1−α)ε+δ)/α", j1 - j2, ">", two_cluster_threshold(epsilon, alpha, delta)),)
    out = _gate(label, hyps, override)
    s1, s2 = _halves(n, s1, s2)
    cfg = ModelConfig(Variant.HETERO_PREJUDICE, n, epsilon, _noise(delta, noise), alpha=alpha, j1=j1, j2=j2,
                      s1=s1, s2=s2)
    checks = _prejudice_checks(j1, j2, delta / alpha, "δ/α")
    return ExperimentSpec(cfg, checks, label=label, hypotheses=hyps, out_of_hypothesis=out, expected_clusters=2,
                          **_common(replications, horizon, seed, min_tail, tail_window))


def _union(intervals):
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        elif hi > lo:
            merged.append((lo, hi))
    return tuple(merged)


def preset_theorem4(case, n, epsilon, delta, b1, b2, b1_count=1, b2_count=1, v1=None, x0=None,
                    replications=100, horizon=NOISY_HORIZON, seed=0, *, noise="uniform", min_tail=TAIL,
                    tail_window=None, override=False) -> ExperimentSpec:
    """Heterogeneous stubborn agents, case ``"i"`` or ``"ii"``.

    Case ii splits the agents into V1 (first ``n//2`` unless ``v1`` is given)
    starting in [0, B1] and V2 starting in [B2, 1]. Case i samples every agent
    on the union of [0, B2-ε) and (B1+ε, B2], taken literally.
    """
    case = str(case).lower()
    if case not in ("i", "ii"):
        raise ValueError("case must be 'i' or 'ii'")
    label = f"Theorem 4({case})"
    gap = b2 - b1 - epsilon
    limit = gap / (n + 1) if case == "i" else gap / (2 * (n + 1))
    form = "(B2−B1−ε)/(n+1)" if case == "i" else "(B2−B1−ε)/(2(n+1))"
    hyps = [Hypothesis("B2−B1 > ε", b2 - b1, ">", epsilon), Hypothesis("δ > 0", delta, ">", 0.0),
            Hypothesis(f"δ < {form}", delta, "<", limit)]
    groups = ()
    notes = ()
    if case == "ii":
        first, second = _halves(n, v1, None)
        groups = (("V1", first), ("V2", second))
        regions = tuple(((0.0, b1),) if i in set(first) else ((b2, 1.0),) for i in range(n))
        if x0 is not None:
            x = np.asarray(x0, dtype=float)
            hyps.append(Hypothesis("x_i(0) ≤ B1 for i ∈ V1", float(x[list(first)].max()), "<=", b1))
            hyps.append(Hypothesis("x_j(0) ≥ B2 for j ∈ V2", float(x[list(second)].min()), ">=", b2))
        checks = (BoundCheck("V1", "diameter", 2 * delta, "d_V1 <= 2δ"),
                  BoundCheck("V2", "diameter", 2 * delta, "d_V2 <= 2δ"))
    else:
        region = _union([(0.0, b2 - epsilon), (b1 + epsilon, b2)])
        regions = (region,) * n
        notes = ("initial region [0, B2−ε) ∪ (B1+ε, B2] is taken literally; the two intervals overlap "
                 "when B2−ε > B1+ε, so the stated region may not isolate the intended initial opinions",)
        if x0 is not None:
            x = np.asarray(x0, dtype=float)
            inside = [any(lo <= v <= hi for lo, hi in region) for v in x]
            hyps.append(Hypothesis("agents with x_i(0) outside [0,B2−ε) ∪ (B1+ε,B2]",
                                   float(len(x) - sum(inside)), "<=", 0.0))
        checks = (BoundCheck("V", "diameter", 2 * delta, "d_V <= 2δ"),)
    out = _gate(label, hyps, override)
    cfg = ModelConfig(Variant.HETERO_STUBBORN, n, epsilon, _noise(delta, noise), b1=b1, b2=b2,
                      b1_count=b1_count, b2_count=b2_count)
    return ExperimentSpec(cfg, checks, label=label, groups=groups, regions=regions,
                          x0=None if x0 is None else tuple(float(v) for v in x0), hypotheses=tuple(hyps),
                          out_of_hypothesis=out, notes=notes,
                          **_common(replications, horizon, seed, min_tail, tail_window))


def preset_noise_free_baseline(config: ModelConfig, replications=50, horizon=NOISE_FREE_HORIZON, seed=0, *,
                               min_tail=0, tail_window=None) -> ExperimentSpec:
    """Noise-free run recording the first exact fixed point and terminal clusters."""
    if config.noise.family is not NoiseFamily.ZERO:
        raise SpecError(["noise-free baseline requires the zero noise family"])
    return ExperimentSpec(config, (), label=f"noise-free baseline ({config.variant.value})", baseline=True,
                          notes=("fixed_point_step is the first t with x(t+1) = x(t) exactly",),
                          **_common(replications, horizon, seed, min_tail, tail_window))


PRESETS = {
    "1a": preset_theorem1a,
    "1b": preset_theorem1b,
    "1c": preset_theorem1c,
    "2": preset_theorem2,
    "3": preset_theorem3,
    "4i": lambda *a, **k: preset_theorem4("i", *a, **k),
    "4ii": lambda *a, **k: preset_theorem4("ii", *a, **k),
}
