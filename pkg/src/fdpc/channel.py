"""Binary-input AWGN channel with replayable per-frame noise.

Noise is drawn from a counter-based generator keyed on (seed, frame_index),
so any single frame's observation can be regenerated in isolation without
replaying the frames before it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelConfig:
    ebno_db: float
    rate: float
    seed: int = 0
    clean: bool = False

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def sigma2(self) -> float:
        return noise_sigma2(self.ebno_db, self.rate)


def noise_sigma2(ebno_db: float, rate: float) -> float:
    """Noise variance for unit-energy antipodal signalling."""
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def modulate(bits: np.ndarray) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def transmit(x: np.ndarray, config: ChannelConfig, frame_index: int) -> np.ndarray:
    if config.clean:
        return np.asarray(x, dtype=np.float64).copy()
    key = (config.seed << 64) | frame_index
    rng = np.random.Generator(np.random.Philox(key=key))
    sigma = np.sqrt(config.sigma2)
    return np.asarray(x, dtype=np.float64) + rng.normal(0.0, sigma, np.shape(x))


def llr_from_observation(y: np.ndarray, config: ChannelConfig) -> np.ndarray:
    """Channel LLR, positive when a transmitted 0 is the likelier bit.

    A clean channel has no likelihood scale of its own; the configured
    sigma2 is still applied so magnitudes stay finite and comparable.
    """
    return 2.0 * np.asarray(y, dtype=np.float64) / config.sigma2
