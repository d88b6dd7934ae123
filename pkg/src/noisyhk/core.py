"""Model state, configuration and the synchronous noisy HK update.

Five variants share one update kernel. For every mobile agent ``i`` the
neighbour pool holds the mobile opinions plus, for stubborn variants, the
fixed anchors. Agent ``i`` averages every pool member within ``epsilon``
(inclusive), optionally blends the average with its prejudice value, adds
its own noise draw and is clamped to ``[0, 1]``.

Pool indices: mobile agents are ``0..n-1``; stubborn anchor ``k`` is
``n + k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional, Sequence

import numpy as np

from .noise import NoiseFamily, NoiseModel, NoiseStream, sample_noise
from .seeds import SeedStream


class ConfigError(ValueError):
    """Invalid configuration; ``problems`` lists every violated constraint."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class Variant(str, Enum):
    PLAIN = "plain"
    HOMO_PREJUDICE = "homo-prejudice"
    HOMO_STUBBORN = "homo-stubborn"
    HETERO_PREJUDICE = "hetero-prejudice"
    HETERO_STUBBORN = "hetero-stubborn"

    @property
    def prejudiced(self) -> bool:
        return self in (Variant.HOMO_PREJUDICE, Variant.HETERO_PREJUDICE)

    @property
    def stubborn(self) -> bool:
        return self in (Variant.HOMO_STUBBORN, Variant.HETERO_STUBBORN)


def _in_unit(v) -> bool:
    return v is not None and 0.0 <= v <= 1.0


@dataclass(frozen=True)
class ModelConfig:
    variant: Variant
    n: int
    epsilon: float
    noise: NoiseModel = field(default_factory=NoiseModel.zero)
    alpha: Optional[float] = None
    j1: Optional[float] = None
    j2: Optional[float] = None
    s1: tuple = ()
    s2: tuple = ()
    b1: Optional[float] = None
    b2: Optional[float] = None
    b1_count: int = 1
    b2_count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "s1", tuple(int(i) for i in self.s1))
        object.__setattr__(self, "s2", tuple(int(i) for i in self.s2))
        problems = self.problems()
        if problems:
            raise ConfigError(problems)

    def problems(self) -> list[str]:
        v = self.variant
        out = []
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            out.append(f"n must be a positive integer (got {self.n!r})")
            return out
        if not (self.epsilon is not None and 0 < self.epsilon <= 1):
            out.append("epsilon must lie in (0,1]")
        agents = set(range(self.n))
        if v.prejudiced:
            if self.b1 is not None or self.b2 is not None:
                out.append(f"{v.value} does not take stubborn anchors (b1/b2)")
            if self.alpha is None or not 0 < self.alpha <= 1:
                out.append("alpha must lie in (0,1]")
            if not _in_unit(self.j1):
                out.append("j1 must lie in [0,1]")
            if len(set(self.s1)) != len(self.s1) or not set(self.s1) <= agents:
                out.append("s1 must be distinct agent indices in 0..n-1")
        if v is Variant.HOMO_PREJUDICE and self.s2:
            out.append("homo-prejudice takes no s2 members")
        if v is Variant.HETERO_PREJUDICE:
            if not _in_unit(self.j2):
                out.append("j2 must lie in [0,1]")
            elif _in_unit(self.j1) and self.epsilon is not None and not abs(self.j1 - self.j2) > self.epsilon:
                out.append(f"|j1 - j2| > epsilon required (|{self.j1} - {self.j2}| vs {self.epsilon})")
            if len(set(self.s2)) != len(self.s2) or not set(self.s2) <= agents:
                out.append("s2 must be distinct agent indices in 0..n-1")
            if set(self.s1) & set(self.s2):
                out.append("s1 and s2 must be disjoint")
            if set(self.s1) | set(self.s2) != agents:
                out.append("s1 and s2 must together cover every agent")
        if v.stubborn:
            if self.alpha is not None or self.j1 is not None or self.j2 is not None or self.s1 or self.s2:
                out.append(f"{v.value} does not take prejudice parameters (alpha/j1/j2/s1/s2)")
            if not _in_unit(self.b1):
                out.append("b1 must lie in [0,1]")
            if self.b1_count < 1:
                out.append("b1_count must be >= 1")
        if v is Variant.HETERO_STUBBORN:
            if not _in_unit(self.b2):
                out.append("b2 must lie in [0,1]")
            elif _in_unit(self.b1) and self.epsilon is not None and not self.b2 - self.b1 > self.epsilon:
                out.append(f"b2 - b1 > epsilon required ({self.b2} - {self.b1} vs {self.epsilon})")
            if self.b2_count < 1:
                out.append("b2_count must be >= 1")
        return out

    # derived arrays -------------------------------------------------------

    @property
    def stubborn_values(self) -> np.ndarray:
        if self.variant is Variant.HOMO_STUBBORN:
            return np.full(self.b1_count, float(self.b1))
        if self.variant is Variant.HETERO_STUBBORN:
            return np.concatenate([np.full(self.b1_count, float(self.b1)), np.full(self.b2_count, float(self.b2))])
        return np.empty(0)

    @property
    def stubborn_groups(self) -> tuple:
        if self.variant is Variant.HOMO_STUBBORN:
            return ("B1",) * self.b1_count
        if self.variant is Variant.HETERO_STUBBORN:
            return ("B1",) * self.b1_count + ("B2",) * self.b2_count
        return ()

    def prejudice_weights(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-agent (alpha, J); alpha is 0 for non-prejudiced agents."""
        w = np.zeros(self.n)
        target = np.zeros(self.n)
        if self.variant.prejudiced:
            w[list(self.s1)] = self.alpha
            target[list(self.s1)] = self.j1
            if self.variant is Variant.HETERO_PREJUDICE:
                w[list(self.s2)] = self.alpha
                target[list(self.s2)] = self.j2
        return w, target

    def with_noise(self, noise: NoiseModel) -> "ModelConfig":
        return replace(self, noise=noise)

    def to_dict(self) -> dict:
        out = {"variant": self.variant.value, "n": self.n, "epsilon": self.epsilon, "noise": self.noise.to_dict()}
        if self.variant.prejudiced:
            out.update(alpha=self.alpha, j1=self.j1, s1=list(self.s1))
            if self.variant is Variant.HETERO_PREJUDICE:
                out.update(j2=self.j2, s2=list(self.s2))
        if self.variant.stubborn:
            out.update(b1=self.b1, b1_count=self.b1_count)
            if self.variant is Variant.HETERO_STUBBORN:
                out.update(b2=self.b2, b2_count=self.b2_count)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        d = dict(d)
        noise = NoiseModel.from_dict(d.pop("noise", {"family": "zero"}))
        return cls(noise=noise, **{k: tuple(v) if k in ("s1", "s2") else v for k, v in d.items()})


@dataclass(frozen=True)
class OpinionState:
    t: int
    mobile: np.ndarray
    stubborn: np.ndarray = field(default_factory=lambda: np.empty(0))
    groups: tuple = ()

    def __post_init__(self):
        mobile = np.array(self.mobile, dtype=float)
        stubborn = np.array(self.stubborn, dtype=float).reshape(-1)
        mobile.setflags(write=False)
        stubborn.setflags(write=False)
        object.__setattr__(self, "mobile", mobile)
        object.__setattr__(self, "stubborn", stubborn)
        if not self.groups:
            object.__setattr__(self, "groups", ("B1",) * len(stubborn))
        if len(self.groups) != len(stubborn):
            raise ValueError("one group tag per stubborn value required")

    @classmethod
    def initial(cls, config: ModelConfig, x0) -> "OpinionState":
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (config.n,):
            raise ValueError(f"x0 must have length n={config.n}")
        if np.any((x0 < 0) | (x0 > 1)) or not np.all(np.isfinite(x0)):
            raise ValueError("x0 values must lie in [0,1]")
        return cls(0, x0, config.stubborn_values, config.stubborn_groups)

    @property
    def n(self) -> int:
        return len(self.mobile)

    @property
    def pool(self) -> np.ndarray:
        return np.concatenate([self.mobile, self.stubborn])


# scalar operations -------------------------------------------------------


def _check_agent(i: int, state: OpinionState) -> None:
    if not 0 <= i < state.n:
        raise IndexError(f"agent index {i} outside 0..{state.n - 1}")


def _neighbor_mask(i: int, state: OpinionState, config: ModelConfig) -> np.ndarray:
    _check_agent(i, state)
    pool = state.pool if config.variant.stubborn else state.mobile
    return np.abs(pool - state.mobile[i]) <= config.epsilon


def neighbor_set(i: int, state: OpinionState, config: ModelConfig) -> np.ndarray:
    """Sorted pool indices within ``epsilon`` of agent ``i`` (inclusive)."""
    return np.flatnonzero(_neighbor_mask(i, state, config))


def local_mean(i: int, state: OpinionState, config: ModelConfig) -> float:
    mask = _neighbor_mask(i, state, config)
    pool = state.pool if config.variant.stubborn else state.mobile
    return float(np.where(mask, pool, 0.0).sum() / mask.sum())


def raw_update(i: int, state: OpinionState, config: ModelConfig, noise: float) -> float:
    """Unclamped next opinion of agent ``i`` given its noise draw."""
    w, target = config.prejudice_weights()
    m = local_mean(i, state, config)
    if w[i] == 0:
        return m + noise
    return (1 - w[i]) * m + w[i] * target[i] + noise


def clamp01(v):
    return np.clip(v, 0.0, 1.0) if isinstance(v, np.ndarray) else min(1.0, max(0.0, v))


# batched kernel -----------------------------------------------------------


def advance(X: np.ndarray, stubborn: np.ndarray, epsilon: float, weight: np.ndarray,
            target: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """One synchronous step for a batch of states ``X`` of shape ``(R, n)``."""
    R = X.shape[0]
    pool = np.concatenate([X, np.broadcast_to(stubborn, (R, len(stubborn)))], axis=1) if len(stubborn) else X
    mask = np.abs(pool[:, None, :] - X[:, :, None]) <= epsilon
    mean = np.where(mask, pool[:, None, :], 0.0).sum(axis=2) / mask.sum(axis=2)
    blended = np.where(weight > 0, (1 - weight) * mean + weight * target, mean)
    return np.clip(blended + noise, 0.0, 1.0)


def step(state: OpinionState, config: ModelConfig, rng: Optional[np.random.Generator] = None,
         noise: Optional[np.ndarray] = None) -> OpinionState:
    """Advance one step; noise is either given or drawn from ``rng`` (agents in index order)."""
    if noise is None:
        if rng is None and config.noise.family is not NoiseFamily.ZERO:
            raise ValueError("rng or noise required for noisy models")
        noise = sample_noise(config.noise, rng, state.n) if rng is not None else np.zeros(state.n)
    noise = np.asarray(noise, dtype=float).reshape(1, state.n)
    w, target = config.prejudice_weights()
    x = advance(state.mobile[None, :], state.stubborn, config.epsilon, w, target, noise)[0]
    return OpinionState(state.t + 1, x, state.stubborn, state.groups)


# initial conditions ------------------------------------------------------


def sample_initial(rng: np.random.Generator, n: int, regions=None) -> np.ndarray:
    """Draw initial opinions, uniform on each agent's region.

    ``regions`` is None (every agent uniform on [0,1]) or a length-``n``
    sequence of interval lists; an agent with several intervals picks one
    with probability proportional to its length.
    """
    if regions is None:
        return rng.uniform(0.0, 1.0, size=n)
    if len(regions) != n:
        raise ValueError("one region per agent required")
    x = np.empty(n)
    for i, intervals in enumerate(regions):
        u = rng.uniform(0.0, sum(hi - lo for lo, hi in intervals))
        for lo, hi in intervals:
            if u <= hi - lo:
                break
            u -= hi - lo
        x[i] = min(lo + u, hi)
    return x


def iterate(config: ModelConfig, X0: np.ndarray, streams: Sequence[NoiseStream],
            horizon: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(t, X)`` for ``t = 0..horizon`` for a batch of trajectories.

    Row ``r`` of ``X`` uses ``streams[r]``; noise is pulled one block at a
    time, so each row evolves exactly as it would on its own.
    """
    X = np.array(X0, dtype=float, ndmin=2)
    stubborn = config.stubborn_values
    w, target = config.prejudice_weights()
    zero = config.noise.family is NoiseFamily.ZERO
    yield 0, X
    block = None
    for t in range(horizon):
        k = t % NoiseStream.BLOCK
        if zero:
            noise = 0.0
        else:
            if k == 0:
                block = np.stack([s.block() for s in streams], axis=0)
            noise = block[:, k, :]
        X = advance(X, stubborn, config.epsilon, w, target, noise)
        yield t + 1, X


@dataclass(frozen=True)
class Trajectory:
    config: ModelConfig
    opinions: np.ndarray  # (horizon + 1, n)
    stubborn: np.ndarray
    groups: tuple
    seed: Optional[SeedStream] = None

    def __len__(self) -> int:
        return len(self.opinions)

    def __getitem__(self, t: int) -> OpinionState:
        t = range(len(self))[t]
        return OpinionState(t, self.opinions[t], self.stubborn, self.groups)

    @property
    def horizon(self) -> int:
        return len(self) - 1

    @property
    def final(self) -> OpinionState:
        return self[-1]


def _as_stream(seed) -> SeedStream:
    if seed is None:
        return SeedStream(0, 0)
    if isinstance(seed, SeedStream):
        return seed
    return SeedStream(int(seed), 0)


def run_trajectory(config: ModelConfig, x0=None, horizon: int = 1000, seed=None,
                   regions=None) -> Trajectory:
    """Simulate one trajectory of ``horizon`` steps.

    Without ``x0`` the initial opinions come from the seed stream (uniform on
    [0,1], or on ``regions``) before any dynamics noise is drawn.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    stream = _as_stream(seed)
    rng = stream.generator()
    if x0 is None:
        x0 = sample_initial(rng, config.n, regions)
    start = OpinionState.initial(config, x0)
    out = np.empty((horizon + 1, config.n))
    noise = NoiseStream(config.noise, rng, config.n)
    for t, X in iterate(config, start.mobile, [noise], horizon):
        out[t] = X[0]
    out.setflags(write=False)
    return Trajectory(config, out, start.stubborn, start.groups, stream)
