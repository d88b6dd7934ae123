"""Noisy Hegselmann-Krause opinion dynamics: simulation and Monte Carlo bound checks."""

from .core import (
    ConfigError,
    ModelConfig,
    OpinionState,
    Trajectory,
    Variant,
    clamp01,
    local_mean,
    neighbor_set,
    raw_update,
    run_trajectory,
    step,
)
from .harness import BoundCheck, ExperimentReport, ExperimentSpec, HypothesisError, SpecError, run_ensemble
from .noise import NoiseFamily, NoiseModel, sample_noise
from .seeds import SeedStream

__version__ = "0.1.0"
