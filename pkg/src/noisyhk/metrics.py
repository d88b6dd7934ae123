"""Consensus and fragmentation measures over states and trajectories.

All state-level functions accept either an :class:`OpinionState` or a plain
array whose last axis indexes agents, so the ensemble runner can evaluate a
whole batch ``(R, n)`` at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import OpinionState, Trajectory, Variant


def _values(state) -> np.ndarray:
    return state.mobile if isinstance(state, OpinionState) else np.asarray(state, dtype=float)


def _select(state, subset) -> np.ndarray:
    x = _values(state)
    if subset is None:
        if x.shape[-1] == 0:
            raise ValueError("subset must be nonempty")
        return x
    idx = np.asarray(list(subset), dtype=int)
    if idx.size == 0:
        raise ValueError("subset must be nonempty")
    if idx.min() < 0 or idx.max() >= x.shape[-1]:
        raise IndexError("subset index out of range")
    return x[..., idx]


def diameter(state, subset: Optional[Sequence[int]] = None):
    """Largest pairwise opinion gap within ``subset`` (all agents by default)."""
    x = _select(state, subset)
    d = x.max(axis=-1) - x.min(axis=-1)
    return float(d) if np.ndim(d) == 0 else d


def anchored_deviation(state, subset: Optional[Sequence[int]], anchor: float):
    """Largest distance from ``anchor`` over ``subset``."""
    x = _select(state, subset)
    d = np.abs(x - anchor).max(axis=-1)
    return float(d) if np.ndim(d) == 0 else d


@dataclass(frozen=True)
class ConsensusReport:
    phi: float
    entry_time: Optional[int]
    tail_margin: Optional[int]
    confirmed: bool

    @property
    def verdict(self) -> str:
        if self.entry_time is None:
            return "none"
        return "confirmed" if self.confirmed else "inconclusive"


def consensus_entry(series, phi: float, min_tail: int = 0) -> ConsensusReport:
    """Earliest step from which ``series <= phi`` holds to the end of the record."""
    s = np.asarray(series, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("series must be a nonempty 1-d sequence")
    if phi < 0:
        raise ValueError("phi must be >= 0")
    horizon = len(s) - 1
    above = np.flatnonzero(s > phi)
    if above.size and above[-1] == horizon:
        return ConsensusReport(phi, None, None, False)
    entry = int(above[-1]) + 1 if above.size else 0
    margin = horizon - entry
    return ConsensusReport(phi, entry, margin, margin >= min_tail)


def cluster_partition(state, epsilon: float) -> list[np.ndarray]:
    """Split agents wherever consecutive sorted opinions differ by more than ``epsilon``.

    Groups are ordered by opinion; indices inside a group are sorted.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    x = _values(state)
    if x.size == 0:
        return []
    order = np.argsort(x, kind="stable")
    cuts = np.flatnonzero(np.diff(x[order]) > epsilon) + 1
    return [np.sort(g) for g in np.split(order, cuts)]


def cluster_count(X, epsilon: float):
    """Number of gap-rule clusters; vectorised over leading axes."""
    x = np.sort(np.asarray(_values(X), dtype=float), axis=-1)
    c = 1 + (np.diff(x, axis=-1) > epsilon).sum(axis=-1)
    return int(c) if np.ndim(c) == 0 else c


def distinct_levels(state) -> int:
    """Number of exactly distinct opinion values (meaningful at a noise-free fixed point)."""
    return int(np.unique(_values(state)).size)


def limsup_estimate(series, tail_window: int) -> float:
    """Maximum over the final ``tail_window`` entries."""
    s = np.asarray(series, dtype=float)
    if tail_window < 1:
        raise ValueError("tail_window must be >= 1")
    if tail_window > len(s):
        raise ValueError(f"tail_window {tail_window} exceeds series length {len(s)}")
    return float(s[-tail_window:].max())


def default_tail_window(horizon: int) -> int:
    """Final 20% of the horizon, at least 500 steps, never more than the record."""
    return min(horizon + 1, max(500, math.ceil(0.2 * horizon)))


@dataclass(frozen=True)
class MetricsSeries:
    diameter: np.ndarray
    anchored: dict  # label -> per-step deviation
    clusters: np.ndarray

    def __len__(self) -> int:
        return len(self.diameter)


def anchor_specs(config) -> list[tuple[str, Optional[tuple], float]]:
    """Default ``(label, subset, anchor)`` triples for a model variant."""
    v = config.variant
    if v is Variant.HOMO_PREJUDICE:
        return [("J1", None, config.j1)]
    if v is Variant.HETERO_PREJUDICE:
        pairs = [("J1", config.s1, config.j1), ("J2", config.s2, config.j2)]
        return [p for p in pairs if p[1]]
    if v is Variant.HOMO_STUBBORN:
        return [("B1", None, config.b1)]
    if v is Variant.HETERO_STUBBORN:
        return [("B1", None, config.b1), ("B2", None, config.b2)]
    return []


def compute_series(traj: Trajectory, anchors=None) -> MetricsSeries:
    """Per-step diameter, anchored deviations and cluster counts of a trajectory."""
    X = traj.opinions
    if anchors is None:
        anchors = anchor_specs(traj.config)
    anchored = {label: np.asarray(anchored_deviation(X, subset, a)) for label, subset, a in anchors}
    return MetricsSeries(np.asarray(diameter(X)), anchored, np.asarray(cluster_count(X, traj.config.epsilon)))


def running_means(z, start: int = 0) -> np.ndarray:
    """``g(k) = mean(z[start:start+k])`` for ``k = 1..len(z)-start``.

    Nondecreasing in ``k`` whenever ``z`` is nondecreasing.
    """
    tail = np.asarray(z, dtype=float)[start:]
    return np.cumsum(tail) / np.arange(1, len(tail) + 1)
