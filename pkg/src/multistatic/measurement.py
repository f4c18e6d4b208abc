"""Gaussian measurement noise and reproducible per-trial random streams.

Each TX-RX pair contributes one bistatic-range (BR), one bistatic-range-rate
(BRR), and one direction-of-arrival (DOA) measurement.  Noise is i.i.d.
zero-mean Gaussian per channel with standard deviations (sigma_br_m,
sigma_brr_mps, sigma_doa_deg); DOA noise is specified in degrees at the
boundary and applied in radians.

Reproducibility: streams are derived with the counter-based Philox
generator keyed by the master seed, with the (channel, trial, block)
indices placed in the counter's high words.  Distinct indices start at
least 2**64 blocks apart, so streams are independent and identical no
matter in what order (or on how many workers) trials execute.  Draws use
``numpy.random.Generator.normal``; golden values are tied to numpy's
Gaussian implementation for the pinned bit generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyTruth
from .geometry import PairTruth


@dataclass(frozen=True)
class NoiseSpec:
    """Per-channel noise standard deviations; all zero means noise-free."""

    sigma_br_m: float
    sigma_brr_mps: float
    sigma_doa_deg: float

    def __post_init__(self):
        for name in ("sigma_br_m", "sigma_brr_mps", "sigma_doa_deg"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class MeasurementSet:
    """One trial's noisy observations for all N pairs, plus their noise spec."""

    br_m: tuple[float, ...]
    brr_mps: tuple[float, ...]
    doa_rad: tuple[float, ...]
    noise: NoiseSpec

    def __post_init__(self):
        object.__setattr__(self, "br_m", tuple(self.br_m))
        object.__setattr__(self, "brr_mps", tuple(self.brr_mps))
        object.__setattr__(self, "doa_rad", tuple(self.doa_rad))
        n = len(self.br_m)
        if n < 1 or len(self.brr_mps) != n or len(self.doa_rad) != n:
            raise ValueError(
                f"measurement channels must share one length >= 1, got "
                f"{len(self.br_m)}/{len(self.brr_mps)}/{len(self.doa_rad)}"
            )

    @property
    def n_pairs(self) -> int:
        return len(self.br_m)


def derive_stream(
    master_seed: int, trial: int, channel: int, block: int = 0
) -> np.random.Generator:
    """Deterministic, order-independent substream for one (trial, channel).

    ``block`` separates larger units of work that each own a full set of
    trial indices (e.g. one block per sweep point).  Same arguments, same
    stream; distinct arguments, independent streams.
    """
    bitgen = np.random.Philox(key=master_seed, counter=[0, channel, trial, block])
    return np.random.Generator(bitgen)


def generate_measurements(
    truth: Sequence[PairTruth],
    theta0: float,
    noise: NoiseSpec,
    stream: np.random.Generator,
) -> MeasurementSet:
    """Add Gaussian noise to ground truth, consuming exactly 3N draws.

    Draw order is fixed: all N BR perturbations, then all N BRR, then all
    N DOA.  The 3N standard-normal variates are consumed even when a sigma
    is zero, so a stream advances identically for any noise spec.  DOA
    measurements are theta0 plus noise and are deliberately not wrapped or
    clamped; domain projection is the estimator's job.
    """
    n = len(truth)
    if n == 0:
        raise EmptyTruth("cannot generate measurements for zero pairs")
    br_noise = stream.normal(0.0, noise.sigma_br_m, n)
    brr_noise = stream.normal(0.0, noise.sigma_brr_mps, n)
    doa_noise = stream.normal(0.0, math.radians(noise.sigma_doa_deg), n)
    return MeasurementSet(
        br_m=tuple(float(t.bistatic_range_m + e) for t, e in zip(truth, br_noise)),
        brr_mps=tuple(float(t.bistatic_range_rate_mps + e) for t, e in zip(truth, brr_noise)),
        doa_rad=tuple(float(theta0 + e) for e in doa_noise),
        noise=noise,
    )
