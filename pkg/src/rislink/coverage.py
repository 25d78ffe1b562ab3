"""Blind-spot coverage: SE maps for a reflector, fixed RIS, adaptive RIS and a repeater.

The BS beams towards a single node (reflector, RIS or network-controlled
repeater) and the UE is served only through that node; there is no direct
BS-UE link. Each hop carries free-space loss and an independent unit-power
Rician gain drawn from a seed keyed on the scenario seed and the UE position,
so any cell can be recomputed in isolation and sweeps do not depend on
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import fieldsum as fs
from .radio import SPEED_OF_LIGHT, RadioConfig, fspl_db, linear_from_db, rician_channel


def default_bandwidth_hz(frequency_hz: float) -> float:
    """100 MHz below FR2, 400 MHz from 24.25 GHz up."""
    return 400e6 if frequency_hz >= 24.25e9 else 100e6


@dataclass(frozen=True)
class Grid:
    x0: float = 0.0
    x1: float = 78.0
    y0: float = -80.0
    y1: float = 80.0
    resolution_m: float = 2.0

    def __post_init__(self):
        if self.resolution_m <= 0 or self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError(f"invalid grid {self}")

    def _axis(self, lo, hi):
        n = int(math.floor((hi - lo) / self.resolution_m + 1e-9)) + 1
        return lo + self.resolution_m * np.arange(n)

    @property
    def xs(self) -> np.ndarray:
        return self._axis(self.x0, self.x1)

    @property
    def ys(self) -> np.ndarray:
        return self._axis(self.y0, self.y1)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.ys), len(self.xs)

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0

    def contains(self, x: float, y: float) -> bool:
        tol = 1e-9 * max(1.0, self.resolution_m)
        return self.x0 - tol <= x <= self.x1 + tol and self.y0 - tol <= y <= self.y1 + tol


@dataclass(frozen=True)
class Reflector:
    """Passive plate that keeps amplitude but applies seeded random per-element phases."""
    seed: int = 0


@dataclass(frozen=True)
class FixedRis:
    """RIS phased once for ``anchor_point`` (x, y); ``None`` means the grid centroid."""
    anchor_point: tuple | None = None


@dataclass(frozen=True)
class AdaptiveRis:
    pass


@dataclass(frozen=True)
class Ncr:
    n_antennas: int = 16
    max_tx_power_dbm: float = 40.0
    si_suppression_db: float = 90.0
    ext_interference_over_noise_db: float = 10.0
    stability_margin_db: float = 3.0


NodeModel = Union[Reflector, FixedRis, AdaptiveRis, Ncr]

MODEL_NAMES = {"reflector": Reflector, "fixedris": FixedRis, "ris": AdaptiveRis, "ncr": Ncr}


def model_name(model: NodeModel) -> str:
    return {Reflector: "reflector", FixedRis: "fixedris", AdaptiveRis: "ris", Ncr: "ncr"}[type(model)]


@dataclass(frozen=True)
class Scenario:
    radio: RadioConfig
    node_model: NodeModel = field(default_factory=AdaptiveRis)
    grid: Grid = field(default_factory=Grid)
    bs: tuple = (0.0, 0.0, 20.0)
    node: tuple = (80.0, 0.0, 2.0)
    node_azimuth_deg: float | None = None  # None: panel faces the BS horizontally
    ue_height_m: float = 1.5
    bs_antennas: int = 64
    ris_nx: int = 16
    ris_ny: int = 16
    phase_bits: int | None = None
    phase_error_sigma_rad: float = 0.0
    insertion_loss_db: float = 0.0
    k_factor_db: float = 10.0
    seed: int = 0

    @classmethod
    def default(cls, frequency_hz: float = 15e9, **kwargs) -> "Scenario":
        radio = RadioConfig(frequency_hz, bandwidth_hz=default_bandwidth_hz(frequency_hz))
        return cls(radio=radio, **kwargs)

    def with_model(self, model: NodeModel) -> "Scenario":
        return replace(self, node_model=model)

    @property
    def bs_gain_db(self) -> float:
        # coherent beamforming towards the node
        return 10.0 * math.log10(self.bs_antennas)

    @property
    def azimuth_rad(self) -> float:
        if self.node_azimuth_deg is not None:
            return math.radians(self.node_azimuth_deg)
        return math.atan2(self.bs[1] - self.node[1], self.bs[0] - self.node[0])

    def to_panel_frame(self, points) -> np.ndarray:
        """World coordinates to the panel frame (normal along local +z, local y up)."""
        a = self.azimuth_rad
        normal = np.array([math.cos(a), math.sin(a), 0.0])
        up = np.array([0.0, 0.0, 1.0])
        tangent = np.cross(up, normal)
        rot = np.stack([tangent, up, normal])
        return (np.atleast_2d(points) - np.asarray(self.node, dtype=float)) @ rot.T

    def panel(self) -> fs.RisPanel:
        return fs.RisPanel(self.ris_nx, self.ris_ny, self.radio.wavelength_m,
                           insertion_loss_db=self.insertion_loss_db,
                           phase_bits=self.phase_bits,
                           phase_error_sigma_rad=self.phase_error_sigma_rad)


def _zigzag(v: int) -> int:
    return 2 * v if v >= 0 else -2 * v - 1


def cell_seed(seed: int, x: float, y: float) -> np.random.SeedSequence:
    """Seed sequence for the UE at (x, y); positions are keyed at millimetre resolution."""
    return np.random.SeedSequence([seed & (2**64 - 1),
                                   _zigzag(round(x * 1000)), _zigzag(round(y * 1000))])


def _fading(scenario: Scenario, d1, d2, x, y):
    """Per-hop power gains |h1|^2, |h2|^2 for a UE at (x, y)."""
    rng = np.random.default_rng(cell_seed(scenario.seed, x, y))
    lam = scenario.radio.wavelength_m
    h1 = rician_channel(d1, lam, scenario.k_factor_db, rng)
    h2 = rician_channel(d2, lam, scenario.k_factor_db, rng)
    return abs(h1) ** 2, abs(h2) ** 2


def _ue_point(scenario: Scenario, ue_pos) -> np.ndarray:
    ue = np.asarray(ue_pos, dtype=float)
    if ue.shape == (2,):
        ue = np.array([ue[0], ue[1], scenario.ue_height_m])
    if not scenario.grid.contains(ue[0], ue[1]):
        raise ValueError(f"UE position {tuple(ue[:2])} lies outside the grid")
    return ue


def _se(snr_linear):
    return np.log2(1.0 + snr_linear)


def ris_phase_panel(scenario: Scenario, ue_local=None) -> fs.RisPanel:
    """Panel phased for the scenario's (RIS or reflector) node model, before impairments."""
    panel = scenario.panel()
    model = scenario.node_model
    src = scenario.to_panel_frame(scenario.bs)[0]
    if isinstance(model, Reflector):
        rng = np.random.default_rng(model.seed)
        return fs.set_profile(panel, fs.Custom(rng.uniform(0.0, fs.TWO_PI, panel.n_elements)))
    if isinstance(model, FixedRis):
        ax, ay = model.anchor_point if model.anchor_point is not None else scenario.grid.centroid
        anchor = scenario.to_panel_frame((ax, ay, scenario.ue_height_m))[0]
        return fs.set_profile(panel, fs.Focusing(src, anchor))
    if isinstance(model, AdaptiveRis):
        if ue_local is None:
            raise ValueError("adaptive RIS phases need a UE position")
        return fs.set_profile(panel, fs.Focusing(src, ue_local))
    raise TypeError(f"{model!r} is not a surface model")


def _ris_snr(scenario: Scenario, ue: np.ndarray, panel: fs.RisPanel | None = None) -> float:
    radio = scenario.radio
    lam = radio.wavelength_m
    src = scenario.to_panel_frame(scenario.bs)[0]
    ue_local = scenario.to_panel_frame(ue)[0]
    d1 = float(np.linalg.norm(src))
    d2 = float(np.linalg.norm(ue_local))
    if ue_local[2] <= 0.0:
        return 0.0  # behind the panel
    if panel is None:
        panel = ris_phase_panel(scenario, ue_local)
    panel = fs.apply_impairments(panel, cell_seed(scenario.seed, ue[0], ue[1]).spawn(1)[0])
    g_ris = float(fs.field_sum_gain(panel, src, ue_local)[0])
    f1, f2 = _fading(scenario, d1, d2, ue[0], ue[1])
    rx_dbm = (radio.bs_tx_power_dbm + scenario.bs_gain_db
              - fspl_db(d1, lam) - fspl_db(d2, lam))
    return linear_from_db(rx_dbm - radio.noise_dbm) * g_ris * f1 * f2


def ris_se(scenario: Scenario, ue_pos, panel: fs.RisPanel | None = None) -> float:
    """Spectral efficiency (bit/s/Hz) through a reflector or RIS node at ``ue_pos``.

    ``ue_pos`` is (x, y) at the scenario UE height, or a full (x, y, z).
    ``panel`` overrides the phases the node model would choose.
    """
    if panel is None and isinstance(scenario.node_model, Ncr):
        raise TypeError("ris_se needs a surface node model; use ncr_se")
    return float(_se(_ris_snr(scenario, _ue_point(scenario, ue_pos), panel)))


def ncr_sinr(scenario: Scenario, ue_pos) -> float:
    """End-to-end SINR (linear) of a full-duplex amplify-and-forward repeater.

    Relay input is BS signal + thermal noise + external interference + residual
    self-interference (transmit power attenuated by the SI suppression). The
    amplification is the largest gain that keeps the output at the power cap,
    limited by the loop-stability bound ``margin / coupling``.
    """
    model = scenario.node_model
    if not isinstance(model, Ncr):
        raise TypeError("ncr_sinr needs an Ncr node model")
    ue = _ue_point(scenario, ue_pos)
    radio = scenario.radio
    lam = radio.wavelength_m
    bs = np.asarray(scenario.bs, dtype=float)
    node = np.asarray(scenario.node, dtype=float)
    d1 = float(np.linalg.norm(bs - node))
    d2 = float(np.linalg.norm(ue - node))
    f1, f2 = _fading(scenario, d1, d2, ue[0], ue[1])
    array_gain_db = 10.0 * math.log10(model.n_antennas)

    noise = linear_from_db(radio.noise_dbm)
    signal = linear_from_db(radio.bs_tx_power_dbm + scenario.bs_gain_db + array_gain_db
                            - fspl_db(d1, lam)) * f1
    interference = noise * linear_from_db(model.ext_interference_over_noise_db)
    coupling = linear_from_db(-model.si_suppression_db)
    p_max = linear_from_db(model.max_tx_power_dbm)

    external = signal + noise + interference
    # output P = g * (external + coupling * P) held at the cap
    gain = p_max / (external + p_max * coupling)
    if coupling > 0:
        gain = min(gain, linear_from_db(-model.stability_margin_db) / coupling)
    p_out = gain * external / (1.0 - gain * coupling)
    residual_si = coupling * p_out

    access = linear_from_db(array_gain_db - fspl_db(d2, lam)) * f2
    desired = gain * signal * access
    forwarded = gain * (noise + interference + residual_si) * access
    return desired / (forwarded + noise)


def ncr_se(scenario: Scenario, ue_pos) -> float:
    return float(_se(ncr_sinr(scenario, ue_pos)))


def node_se(scenario: Scenario, ue_pos) -> float:
    if isinstance(scenario.node_model, Ncr):
        return ncr_se(scenario, ue_pos)
    return ris_se(scenario, ue_pos)


@dataclass(frozen=True)
class SEMap:
    xs: np.ndarray
    ys: np.ndarray
    se: np.ndarray  # shape (len(ys), len(xs))
    model: str = ""

    def values(self) -> np.ndarray:
        return self.se.ravel()

    def mean(self) -> float:
        return float(self.se.mean())

    def within(self, center, radius_m: float) -> np.ndarray:
        gx, gy = np.meshgrid(self.xs, self.ys)
        mask = np.hypot(gx - center[0], gy - center[1]) <= radius_m
        return self.se[mask]


def sweep_grid(scenario: Scenario) -> SEMap:
    """SE for every grid cell under the scenario's node model."""
    xs, ys = scenario.grid.xs, scenario.grid.ys
    se = np.empty((len(ys), len(xs)))
    shared = None
    if isinstance(scenario.node_model, (Reflector, FixedRis)):
        shared = ris_phase_panel(scenario)
    h = scenario.ue_height_m
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            ue = np.array([x, y, h])
            if isinstance(scenario.node_model, Ncr):
                se[iy, ix] = ncr_se(scenario, ue)
            else:
                se[iy, ix] = _se(_ris_snr(scenario, ue, shared))
    if not np.all(np.isfinite(se)):
        raise FloatingPointError("non-finite spectral efficiency in sweep")
    return SEMap(xs, ys, se, model_name(scenario.node_model))


@dataclass(frozen=True)
class Cdf:
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", np.sort(np.asarray(self.samples, dtype=float).ravel()))

    @property
    def probabilities(self) -> np.ndarray:
        n = self.samples.size
        return np.arange(1, n + 1) / n

    @property
    def mean(self) -> float:
        return float(self.samples.mean())

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.samples, q))


def cdf_of(semap: SEMap) -> Cdf:
    return Cdf(semap.values())
