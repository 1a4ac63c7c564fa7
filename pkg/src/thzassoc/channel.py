"""THz link budget: free-space and molecular-absorption loss, SNR, Shannon rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from thzassoc.errors import ParameterError

SPEED_OF_LIGHT = 3e8  # m/s, rounded as in link-budget hand calculations
LOG10_E = math.log10(math.e)


@dataclass(frozen=True)
class LinkBudgetParams:
    carrier_frequency: float = 300e9  # Hz
    bandwidth: float = 1e9  # Hz, per link
    theta_db: float = 120.0  # 10 log10(P Gb Gu / N0), noise folded in
    absorption_coeff: float = 0.0  # 1/m
    min_distance: float = 0.1  # m

    def __post_init__(self):
        if not self.carrier_frequency > 0:
            raise ParameterError("carrier_frequency must be positive", key="carrier_frequency_hz")
        if not self.bandwidth > 0:
            raise ParameterError("bandwidth must be positive", key="bandwidth_hz")
        if not self.absorption_coeff >= 0:
            raise ParameterError("absorption_coeff must be >= 0", key="absorption_coeff_per_m")
        if not self.min_distance > 0:
            raise ParameterError("min_distance must be positive", key="min_distance_m")
        if not math.isfinite(self.theta_db):
            raise ParameterError("theta_db must be finite", key="theta_db")


def fspl_db(frequency, distance):
    """Free-space path loss 20 log10(4 pi f d / c) in dB. Accepts arrays."""
    f = np.asarray(frequency, dtype=float)
    d = np.asarray(distance, dtype=float)
    if np.any(f <= 0) or np.any(d <= 0):
        raise ParameterError("fspl_db needs positive frequency and distance")
    out = 20.0 * np.log10(4.0 * math.pi * f * d / SPEED_OF_LIGHT)
    return float(out) if out.ndim == 0 else out


def mal_db(distance, absorption_coeff):
    """Molecular absorption loss 10 log10(exp(K d)) in dB."""
    d = np.asarray(distance, dtype=float)
    k = np.asarray(absorption_coeff, dtype=float)
    if np.any(d < 0) or np.any(k < 0):
        raise ParameterError("mal_db needs non-negative distance and coefficient")
    out = 10.0 * LOG10_E * k * d
    return float(out) if out.ndim == 0 else out


def snr_db(params: LinkBudgetParams, distance):
    d = np.maximum(np.asarray(distance, dtype=float), params.min_distance)
    return params.theta_db - fspl_db(params.carrier_frequency, d) - mal_db(d, params.absorption_coeff)


def achievable_rate(params: LinkBudgetParams, distance):
    """Shannon rate B log2(1 + SNR) in bit/s; distance is clamped to ``min_distance``."""
    if np.any(np.asarray(distance) < 0):
        raise ParameterError("distance must be >= 0")
    snr = snr_db(params, distance)
    # log2(1 + 10^(s/10)) via logaddexp keeps huge budgets finite
    bits = np.logaddexp2(0.0, np.asarray(snr) * (math.log2(10.0) / 10.0))
    out = params.bandwidth * bits
    return float(out) if np.ndim(out) == 0 else out


def rate_matrix(topology, params: LinkBudgetParams) -> np.ndarray:
    """Achievable rate for every BS-UE pair, shape (N_b, N_u)."""
    return achievable_rate(params, topology.distances())
