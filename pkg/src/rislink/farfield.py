"""Closed-form far-field link budget of a RIS seen as two back-to-back apertures.

The receive and transmit halves of the surface are each treated as a fixed
beam antenna whose gain follows from the projected area. End-to-end gain is
then two Friis hops joined by those two gains, and it is reported relative
to a direct line-of-sight hop over the same total distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radio import SPEED_OF_LIGHT, fspl_db

BEAMWIDTH_CONSTANT = 1.02  # uniform circular aperture, HPBW ~ 1.02 lambda / D


@dataclass(frozen=True)
class DeploymentCase:
    name: str
    frequency_hz: float
    d1_m: float
    d2_m: float
    n_elements: int
    alpha_in_rad: float = 0.0
    alpha_out_rad: float = 0.0

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def area_m2(self) -> float:
        # half-wavelength pitch
        return self.n_elements * self.wavelength_m ** 2 / 4.0


def _case(name, freq, d1_wl, d2_wl, n):
    lam = SPEED_OF_LIGHT / freq
    return DeploymentCase(name, freq, d1_wl * lam, d2_wl * lam, n)


# Distances are given in wavelengths so the ratios d/lambda are exact.
CASES = {
    "1S": _case("1S", 30e9, 10_000, 10_000, 1_000),
    "1L": _case("1L", 30e9, 10_000, 10_000, 10_000),
    "2L": _case("2L", 30e9, 18_000, 2_000, 10_000),
    "3S": _case("3S", 3e9, 1_800, 200, 1_000),
}


@dataclass(frozen=True)
class LinkBudget:
    fspl_hop1_db: float
    fspl_hop2_db: float
    fspl_single_hop_db: float
    ris_rx_gain_db: float
    ris_tx_gain_db: float
    bs_gain_db: float = 0.0
    ue_gain_db: float = 0.0

    @property
    def ris_gain_db(self) -> float:
        return self.ris_rx_gain_db + self.ris_tx_gain_db

    @property
    def end_to_end_gain_db(self) -> float:
        return (self.bs_gain_db + self.ue_gain_db + self.ris_gain_db
                - self.fspl_hop1_db - self.fspl_hop2_db)

    @property
    def los_gain_db(self) -> float:
        return self.bs_gain_db + self.ue_gain_db - self.fspl_single_hop_db

    @property
    def gain_relative_to_los_db(self) -> float:
        # terminal gains appear in both paths and cancel
        return self.ris_gain_db - (self.fspl_hop1_db + self.fspl_hop2_db) + self.fspl_single_hop_db


def aperture_gain_db(area_m2: float, wavelength_m: float, alpha_rad: float = 0.0) -> float:
    """Gain of a uniformly excited aperture, 10*log10(4*pi*A*cos(alpha)/lambda^2)."""
    if area_m2 <= 0 or wavelength_m <= 0:
        raise ValueError("area and wavelength must be positive")
    if not 0.0 <= alpha_rad < math.pi / 2:
        raise ValueError(f"steering angle {alpha_rad} rad outside [0, pi/2)")
    return 10.0 * math.log10(4.0 * math.pi * area_m2 * math.cos(alpha_rad) / wavelength_m ** 2)


def two_hop_fspl_db(d1_m: float, d2_m: float, wavelength_m: float) -> float:
    return fspl_db(d1_m, wavelength_m) + fspl_db(d2_m, wavelength_m)


def evaluate_case(case: DeploymentCase, bs_gain_db: float = 0.0,
                  ue_gain_db: float = 0.0) -> LinkBudget:
    lam = case.wavelength_m
    return LinkBudget(
        fspl_hop1_db=fspl_db(case.d1_m, lam),
        fspl_hop2_db=fspl_db(case.d2_m, lam),
        fspl_single_hop_db=fspl_db(case.d1_m + case.d2_m, lam),
        ris_rx_gain_db=aperture_gain_db(case.area_m2, lam, case.alpha_in_rad),
        ris_tx_gain_db=aperture_gain_db(case.area_m2, lam, case.alpha_out_rad),
        bs_gain_db=bs_gain_db,
        ue_gain_db=ue_gain_db,
    )


def los_budget(d_m: float, wavelength_m: float) -> LinkBudget:
    """Reference budget with no RIS: zero RIS gain, one hop split as d + 0."""
    single = fspl_db(d_m, wavelength_m)
    return LinkBudget(single, 0.0, single, 0.0, 0.0)


def equivalent_diameter_m(area_m2: float) -> float:
    return math.sqrt(4.0 * area_m2 / math.pi)


def half_power_beam_diameter_m(area_m2: float, wavelength_m: float, distance_m: float) -> float:
    """Width of the -3 dB footprint at ``distance_m`` (small-angle)."""
    if area_m2 <= 0 or wavelength_m <= 0 or distance_m <= 0:
        raise ValueError("area, wavelength and distance must be positive")
    hpbw = BEAMWIDTH_CONSTANT * wavelength_m / equivalent_diameter_m(area_m2)
    return distance_m * hpbw


def _grid(values, name):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D grid")
    if arr.size > 1 and not (np.all(np.diff(arr) > 0) or np.all(np.diff(arr) < 0)):
        raise ValueError(f"{name} must be monotone")
    return arr


def sweep_fspl(total_distance_grid, split_ratio: float, wavelength_m: float):
    """Rows of (total_m, single_hop_db, doubled_single_db, two_hop_db).

    ``split_ratio`` is d1 / (d1 + d2).
    """
    if not 0.0 < split_ratio < 1.0:
        raise ValueError("split_ratio must lie in (0, 1)")
    rows = []
    for d in _grid(total_distance_grid, "total_distance_grid"):
        single = fspl_db(d, wavelength_m)
        two = two_hop_fspl_db(split_ratio * d, (1.0 - split_ratio) * d, wavelength_m)
        rows.append((float(d), single, 2.0 * single, two))
    return rows


def sweep_ris_gain(area_grid, wavelength_m: float):
    """Rows of (area_m2, area_over_lambda2, combined_gain_db) at boresight."""
    return [(float(a), float(a) / wavelength_m ** 2, 2.0 * aperture_gain_db(a, wavelength_m))
            for a in _grid(area_grid, "area_grid")]


def sweep_beamwidth(area_grid, wavelength_m: float, distances):
    """Rows of (area_m2, distance_m, beam_diameter_m)."""
    dists = _grid(distances, "distances")
    return [(float(a), float(d), half_power_beam_diameter_m(a, wavelength_m, d))
            for a in _grid(area_grid, "area_grid") for d in dists]
