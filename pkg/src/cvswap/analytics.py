"""Closed-form variance and gain expressions, unit conversions, verdicts.

Everything here is pure arithmetic on :class:`ExperimentParams`; the
first-principles network in :mod:`cvswap.swap` must agree with
:func:`variance_formula` to high precision, which is the central
cross-check of the whole package (``cvswap verify``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .params import ExperimentParams

_LN10 = math.log(10.0)


def variance_formula(params: ExperimentParams, g_swap: float) -> float:
    """Verification-stage variance (SNL units) at normalized feedforward gain ``g_swap``.

    Identical for the amplitude-sum and phase-difference channels. The
    closed form keeps its specific efficiency dressing on purpose; do not
    "simplify" it, the network oracle guards the transcription.
    """
    if g_swap < 0:
        raise ValueError(f"g_swap must be >= 0, got {g_swap}")
    r1, r2 = params.r1, params.r2
    x1, x2, x3, x4 = params.xi1, params.xi2, params.xi3, params.xi4
    eta = params.eta
    sqrt_r = math.sqrt(params.mirror_R)

    v = 0.25 * (eta * x3 - g_swap * eta * x4) ** 2 * math.exp(2.0 * r1)
    v += 0.25 * (sqrt_r * eta * x2 * x4 - g_swap * eta * x4) ** 2 * math.exp(2.0 * r2)
    v += 0.25 * (eta * x3 + g_swap * eta * x4) ** 2 * math.exp(-2.0 * r1)
    v += 0.25 * (sqrt_r * eta * x2 * x4 + g_swap * eta * x4) ** 2 * math.exp(-2.0 * r2)
    v += 1.0 - eta**2
    v += 0.5 * eta**2 * (2.0 - x3**2 - x4**2)
    v += 0.5 * eta**2 * (1.0 - params.mirror_R * x2**2) * x4**2
    if g_swap > 0:
        if x1 == 0:
            raise ValueError("xi1 = 0 with nonzero gain: feedforward noise term diverges")
        v += g_swap**2 * (1.0 - eta**2 * x1**2) * x4**2 / x1**2
    return v


def optimal_gain(params: ExperimentParams) -> float:
    """Normalized gain minimizing :func:`variance_formula`; 0 when nothing is squeezed."""
    r1, r2 = params.r1, params.r2
    e2r1, e2r2 = math.exp(2.0 * r1), math.exp(2.0 * r2)
    e4r1, e4r2 = math.exp(4.0 * r1), math.exp(4.0 * r2)
    sqrt_r = math.sqrt(params.mirror_R)
    eta_sq = params.eta**2
    xi1_sq = params.xi1**2

    numerator = eta_sq * ((e4r1 - 1.0) * e2r2 * params.xi3
                          + e2r1 * (e4r2 - 1.0) * sqrt_r * params.xi2 * params.xi4) * xi1_sq
    denominator = (4.0 * math.exp(2.0 * (r1 + r2))
                   + eta_sq * (e2r1 + e2r2
                               + math.exp(4.0 * r1 + 2.0 * r2)
                               + math.exp(2.0 * r1 + 4.0 * r2)
                               - 4.0 * math.exp(2.0 * (r1 + r2))) * xi1_sq) * params.xi4
    if denominator == 0:
        raise ValueError("degenerate gain denominator (xi4 = 0): no beam to displace")
    return numerator / denominator


def gain_to_electronic(g_swap: float, params: ExperimentParams) -> float:
    """Electronic gain g realizing a normalized g_swap = sqrt(1-R)/sqrt(2) * eta * xi1 * g."""
    if params.mirror_R >= 1.0:
        raise ValueError("mirror_R = 1 leaves no feedforward port")
    if params.eta == 0 or params.xi1 == 0:
        raise ValueError("eta and xi1 must be > 0 to set an electronic gain")
    return math.sqrt(2.0) * g_swap / (math.sqrt(1.0 - params.mirror_R) * params.eta * params.xi1)


def electronic_to_gain(g: float, params: ExperimentParams) -> float:
    """Inverse of :func:`gain_to_electronic`."""
    if params.mirror_R >= 1.0:
        raise ValueError("mirror_R = 1 leaves no feedforward port")
    if params.eta == 0 or params.xi1 == 0:
        raise ValueError("eta and xi1 must be > 0 to set an electronic gain")
    return math.sqrt(1.0 - params.mirror_R) * params.eta * params.xi1 * g / math.sqrt(2.0)


# -- unit conversions --------------------------------------------------------
#
# Two dB conventions coexist, both standard on the bench:
#   * db_from_linear / linear_from_db use signed dB relative to SNL
#     (negative = below shot noise), matching VarianceReport.
#   * r_from_db / db_from_r and enl_correct quote a positive *depth below
#     SNL*, the way squeezing levels are reported: exp(-2r) = 10^(-dB/10).


def db_from_linear(v: float) -> float:
    if not v > 0:
        raise ValueError(f"linear variance must be > 0, got {v}")
    return 10.0 * math.log10(v)


def linear_from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def r_from_db(db: float) -> float:
    if db < 0:
        raise ValueError(f"squeezing depth must be >= 0 dB below SNL, got {db}")
    return db * _LN10 / 20.0


def db_from_r(r: float) -> float:
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    return 20.0 * r / _LN10


def enl_correct(v_meas_db_below_snl: float, enl_db_below_snl: float) -> float:
    """Remove the electronic-noise floor from a measured suppression depth.

    Both arguments and the result are positive dB below SNL. The floor is
    subtracted in linear units and the remainder renormalized to the
    floor-free shot noise: (V_meas - V_enl) / (1 - V_enl).
    """
    if not enl_db_below_snl > 0:
        raise ValueError(f"ENL must sit strictly below the SNL, got {enl_db_below_snl} dB")
    v_meas = 10.0 ** (-v_meas_db_below_snl / 10.0)
    v_enl = 10.0 ** (-enl_db_below_snl / 10.0)
    if v_meas <= v_enl:
        raise ValueError("measured variance is at or below the electronic noise floor")
    return -10.0 * math.log10((v_meas - v_enl) / (1.0 - v_enl))


_SNL_BOUNDARY_TOL = 1e-12


def duan_verdict(v_plus: float, v_minus: float) -> tuple[bool, float]:
    """Inseparability verdict: both joint variances strictly below shot noise.

    Returns (entangled, margin) with margin = 1 - max(v_plus, v_minus). The
    boundary counts as not entangled, with a 1e-12 guard band so that pure
    float accumulation noise in an exactly-at-SNL chain can never flip the
    verdict.
    """
    if not (v_plus > 0 and v_minus > 0):
        raise ValueError("variances must be > 0")
    worst = max(v_plus, v_minus)
    return worst < 1.0 - _SNL_BOUNDARY_TOL, 1.0 - worst


def preserved_fraction(initial_db: float, swapped_db: float) -> float:
    """Fraction of the initial suppression depth surviving the swap (dB ratio)."""
    if not initial_db > 0:
        raise ValueError(f"initial suppression must be > 0 dB, got {initial_db}")
    return swapped_db / initial_db


# -- sweeps -------------------------------------------------------------------


@dataclass
class SweepGrid:
    """Optimal-gain variance surface over a squeezing-parameter grid."""

    r1_values: np.ndarray
    r2_values: np.ndarray
    values: np.ndarray  # shape (len(r1_values), len(r2_values)), linear SNL units

    def __post_init__(self) -> None:
        self.r1_values = np.asarray(self.r1_values, dtype=float)
        self.r2_values = np.asarray(self.r2_values, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.r1_values.size, self.r2_values.size):
            raise ValueError("grid shape does not match axis lengths")


def sweep_surface(
    params: ExperimentParams,
    r1_axis: Sequence[float],
    r2_axis: Sequence[float],
) -> SweepGrid:
    """Evaluate variance_formula at the per-point optimal gain over the grid."""
    r1s = np.asarray(list(r1_axis), dtype=float)
    r2s = np.asarray(list(r2_axis), dtype=float)
    if r1s.size == 0 or r2s.size == 0:
        raise ValueError("sweep axes must be nonempty")
    if (r1s < 0).any() or (r2s < 0).any():
        raise ValueError("squeezing parameters must be >= 0")
    values = np.empty((r1s.size, r2s.size))
    for i, r1 in enumerate(r1s):
        for j, r2 in enumerate(r2s):
            point = replace(params, r1=float(r1), r2=float(r2))
            values[i, j] = variance_formula(point, optimal_gain(point))
    return SweepGrid(r1s, r2s, values)
