"""Discrete Gaussian sampling over the integers.

D_{Z,s} assigns x weight exp(-pi x^2 / s^2).  Sampling is by CDF inversion
over [-ceil(12 s), ceil(12 s)]; the truncated tail carries total mass below
2^-64 for every s >= 1.  All draws come from an explicit Rng so runs are
replayable.
"""

from __future__ import annotations

import numpy as np

from .rng import Rng

_PREC_BITS = 53  # uniform deviates carry one double's worth of entropy


class DiscreteGaussian:
    def __init__(self, s: float, tail: float = 12.0):
        if s < 1.0:
            raise ValueError("width parameter s must be >= 1")
        self.s = float(s)
        zmax = int(np.ceil(tail * s))
        self.support = np.arange(-zmax, zmax + 1, dtype=np.int64)
        weights = np.exp(-np.pi * (self.support.astype(np.float64) ** 2) / (s * s))
        cdf = np.cumsum(weights)
        self._cdf = cdf / cdf[-1]

    def _uniforms(self, rng: Rng, n: int) -> np.ndarray:
        raw = np.frombuffer(rng.random_bytes(8 * n), dtype=">u8").astype(np.uint64)
        return (raw >> np.uint64(64 - _PREC_BITS)).astype(np.float64) / float(
            1 << _PREC_BITS
        )

    def sample(self, rng: Rng) -> int:
        return int(self.sample_vector(rng, 1)[0])

    def sample_vector(self, rng: Rng, n: int) -> np.ndarray:
        u = self._uniforms(rng, n)
        idx = np.searchsorted(self._cdf, u, side="right")
        return self.support[idx]
