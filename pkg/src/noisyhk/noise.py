"""Bounded, zero-mean noise families.

Every family draws values in ``[-delta, delta]``. For ``delta > 0`` each one
also satisfies the two-sided mass condition ``P{xi >= a} >= p`` and
``P{xi <= -a} >= p``; :meth:`NoiseModel.mass_condition` returns the ``(a, p)``
pair used for that family:

* ``uniform``: ``(delta/2, 1/4)``
* ``rademacher`` with atom ``a``: ``(a, 1/2)``
* ``tgauss`` (normal with scale ``sigma`` conditioned on ``|xi| <= delta``):
  ``(delta/2, p)`` with ``p`` the exact conditional tail mass.
* ``zero``: the noise-free case, ``delta`` must be 0 and no condition holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class NoiseFamily(str, Enum):
    UNIFORM = "uniform"
    TRUNCATED_GAUSSIAN = "tgauss"
    RADEMACHER = "rademacher"
    ZERO = "zero"


@dataclass(frozen=True)
class NoiseModel:
    family: NoiseFamily = NoiseFamily.UNIFORM
    delta: float = 0.0
    sigma: Optional[float] = None  # tgauss scale before truncation, default delta/2
    atom: Optional[float] = None  # rademacher magnitude, default delta

    def __post_init__(self):
        object.__setattr__(self, "family", NoiseFamily(self.family))
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def zero(cls) -> "NoiseModel":
        return cls(NoiseFamily.ZERO, 0.0)

    @classmethod
    def uniform(cls, delta: float) -> "NoiseModel":
        return cls(NoiseFamily.UNIFORM, delta)

    def problems(self) -> list[str]:
        out = []
        d = self.delta
        if not (isinstance(d, (int, float)) and math.isfinite(d)) or d < 0:
            return [f"delta must be a finite number >= 0 (got {d!r})"]
        if self.family is NoiseFamily.ZERO:
            if d != 0:
                out.append("zero noise requires delta = 0")
        elif d <= 0:
            out.append(f"{self.family.value} noise requires delta > 0")
        if self.family is NoiseFamily.TRUNCATED_GAUSSIAN and self.sigma is not None and self.sigma <= 0:
            out.append("tgauss sigma must be > 0")
        if self.family is NoiseFamily.RADEMACHER and self.atom is not None:
            if not 0 < self.atom <= d:
                out.append(f"rademacher atom must lie in (0, delta] = (0, {d}]")
        return out

    @property
    def scale(self) -> float:
        return self.sigma if self.sigma is not None else self.delta / 2

    @property
    def magnitude(self) -> float:
        return self.atom if self.atom is not None else self.delta

    def variance(self) -> float:
        d = self.delta
        if self.family is NoiseFamily.ZERO:
            return 0.0
        if self.family is NoiseFamily.UNIFORM:
            return d * d / 3
        if self.family is NoiseFamily.RADEMACHER:
            return self.magnitude ** 2
        # truncated normal on [-d, d]
        s = self.scale
        b = d / s
        z = math.erf(b / math.sqrt(2))
        pdf = math.exp(-b * b / 2) / math.sqrt(2 * math.pi)
        return s * s * (1 - 2 * b * pdf / z)

    def mass_condition(self) -> tuple[float, float]:
        """``(a, p)`` such that ``P{xi >= a} >= p`` and ``P{xi <= -a} >= p``."""
        d = self.delta
        if self.family is NoiseFamily.ZERO:
            raise ValueError("zero noise has no positive mass condition")
        if self.family is NoiseFamily.UNIFORM:
            return d / 2, 0.25
        if self.family is NoiseFamily.RADEMACHER:
            return self.magnitude, 0.5
        s = self.scale
        phi = lambda u: 0.5 * (1 + math.erf(u / (s * math.sqrt(2))))  # noqa: E731
        p = (phi(d) - phi(d / 2)) / (2 * phi(d) - 1)
        return d / 2, p

    def to_dict(self) -> dict:
        out = {"family": self.family.value, "delta": self.delta}
        if self.family is NoiseFamily.TRUNCATED_GAUSSIAN:
            out["sigma"] = self.scale
        if self.family is NoiseFamily.RADEMACHER:
            out["atom"] = self.magnitude
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        return cls(d.get("family", "uniform"), float(d.get("delta", 0.0)), d.get("sigma"), d.get("atom"))


def sample_noise(model: NoiseModel, rng: np.random.Generator, size=None):
    """Draw noise from ``model``. Returns a float when ``size`` is None."""
    shape = () if size is None else size
    d = model.delta
    fam = model.family
    if fam is NoiseFamily.ZERO:
        out = np.zeros(shape)
    elif fam is NoiseFamily.UNIFORM:
        out = rng.uniform(-d, d, size=shape)
    elif fam is NoiseFamily.RADEMACHER:
        a = model.magnitude
        out = np.where(rng.random(size=shape) < 0.5, -a, a)
    else:
        out = np.asarray(model.scale * rng.standard_normal(size=shape), dtype=float)
        bad = np.abs(out) > d
        while bad.any():
            # redraw rejected entries in C order
            out[bad] = model.scale * rng.standard_normal(size=int(bad.sum()))
            bad = np.abs(out) > d
    if size is None:
        return float(out)
    return out


class NoiseStream:
    """Buffered per-step noise for one trajectory.

    Draws ``(block, n)`` arrays at a time so row ``t`` holds the step-``t``
    draws for agents ``0..n-1``. The block size is fixed, which keeps the
    stream a pure function of the generator state.
    """

    BLOCK = 512

    def __init__(self, model: NoiseModel, rng: np.random.Generator, n: int):
        self.model = model
        self.rng = rng
        self.n = n
        self._buf = np.empty((0, n))
        self._pos = 0

    def block(self) -> np.ndarray:
        """Return the next whole block (used by the batched ensemble path)."""
        rows = self._buf[self._pos:]
        if len(rows):
            self._pos = len(self._buf)
            return rows
        return sample_noise(self.model, self.rng, (self.BLOCK, self.n))

    def next(self) -> np.ndarray:
        if self._pos >= len(self._buf):
            self._buf = sample_noise(self.model, self.rng, (self.BLOCK, self.n))
            self._pos = 0
        row = self._buf[self._pos]
        self._pos += 1
        return row
