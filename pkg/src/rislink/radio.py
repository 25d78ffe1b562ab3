"""Units, geometry, and channel primitives shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
THERMAL_NOISE_DBM_HZ = -174.0


def db_from_linear(p):
    """Power ratio to dB. Zero maps to ``-inf``; negative input raises."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0):
        raise ValueError("linear power must be non-negative")
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def linear_from_db(g):
    arr = 10.0 ** (np.asarray(g, dtype=float) / 10.0)
    return float(arr) if arr.ndim == 0 else arr


def fspl_db(d_m: float, wavelength_m: float) -> float:
    """Free-space path loss 20*log10(4*pi*d/lambda) in dB."""
    if d_m <= 0 or wavelength_m <= 0:
        raise ValueError("distance and wavelength must be positive")
    return 20.0 * math.log10(4.0 * math.pi * d_m / wavelength_m)


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


@dataclass(frozen=True)
class RadioConfig:
    frequency_hz: float
    bandwidth_hz: float = 100e6
    noise_figure_db: float = 10.0
    bs_tx_power_dbm: float = 40.0
    wavelength_m: float = field(init=False)

    def __post_init__(self):
        if not (self.frequency_hz > 0 and self.bandwidth_hz > 0):
            raise ValueError("frequency and bandwidth must be positive")
        object.__setattr__(self, "wavelength_m", SPEED_OF_LIGHT / self.frequency_hz)

    @classmethod
    def from_wavelength(cls, wavelength_m: float, **kwargs) -> "RadioConfig":
        return cls(SPEED_OF_LIGHT / wavelength_m, **kwargs)

    @property
    def noise_dbm(self) -> float:
        return noise_power_dbm(self.bandwidth_hz, self.noise_figure_db)


@dataclass(frozen=True)
class Position3:
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite position {self!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def distance_to(self, other: "Position3") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))


def _angle_from_normal(vec: np.ndarray, normal: np.ndarray) -> float:
    c = float(np.dot(vec, normal) / (np.linalg.norm(vec) * np.linalg.norm(normal)))
    return math.acos(max(-1.0, min(1.0, c)))


@dataclass(frozen=True)
class LinkGeometry:
    """BS -> node -> UE geometry; angles are measured from the node's surface normal."""

    bs: Position3
    node: Position3
    ue: Position3
    d1_m: float
    d2_m: float
    alpha_in_rad: float = 0.0
    alpha_out_rad: float = 0.0

    def __post_init__(self):
        if self.d1_m <= 0 or self.d2_m <= 0:
            raise ValueError("hop distances must be positive")
        for a in (self.alpha_in_rad, self.alpha_out_rad):
            if not 0.0 <= a < math.pi / 2:
                raise ValueError(f"angle {a} outside [0, pi/2)")

    @classmethod
    def from_positions(cls, bs: Position3, node: Position3, ue: Position3,
                       normal=(0.0, 0.0, 1.0)) -> "LinkGeometry":
        n = np.asarray(normal, dtype=float)
        to_bs = bs.as_array() - node.as_array()
        to_ue = ue.as_array() - node.as_array()
        return cls(bs, node, ue, node.distance_to(bs), node.distance_to(ue),
                   _angle_from_normal(to_bs, n), _angle_from_normal(to_ue, n))


def rician_channel(distance_m: float, wavelength_m: float, k_factor_db: float,
                   seed, size: int | None = None):
    """Unit-mean-power Rician gain for one hop.

    The LoS term carries the geometric phase ``-2*pi*d/lambda`` and power
    K/(K+1); the scattered term is circular Gaussian with power 1/(K+1).
    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    Returns a complex scalar, or an array of ``size`` independent draws.
    """
    los = np.exp(-2j * np.pi * distance_m / wavelength_m)
    if math.isinf(k_factor_db) and k_factor_db > 0:
        return complex(los) if size is None else np.full(size, los)
    k = 10.0 ** (k_factor_db / 10.0)
    rng = np.random.default_rng(seed)
    shape = () if size is None else (size,)
    scatter = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    h = math.sqrt(k / (k + 1.0)) * los + math.sqrt(1.0 / (k + 1.0)) * scatter
    return complex(h) if size is None else h
