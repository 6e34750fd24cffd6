"""Fuzzy-scheduled L1 adaptive control with swarm-tuned output sets."""

from ._core import (
    DIVERGENCE_PENALTY,
    PARTICLE_DIM,
    SCENARIOS,
    ConfigError,
    DivergenceError,
    Error,
    decode,
    default_particle,
    particle_bounds,
    run,
    select_gain,
    simulate,
    tune,
)

__all__ = [
    "DIVERGENCE_PENALTY",
    "PARTICLE_DIM",
    "SCENARIOS",
    "ConfigError",
    "DivergenceError",
    "Error",
    "decode",
    "default_particle",
    "particle_bounds",
    "run",
    "select_gain",
    "simulate",
    "tune",
]
