"""Element-level field summation over a RIS panel.

The panel sits in the local z = 0 plane with its normal along +z and its
elements on a half-wavelength lattice centred on the origin. Gains are
computed from the exact per-element path lengths, so the same routines cover
the far field, the intermediate field, and focused (curved) phase fronts.

Normalisation: the coherent sum ``S = sum_n a_n exp(j(phi_n - k r1_n - k r2_n))``
is scaled by ``(pi cos(alpha_in)) * (pi cos(alpha_out))``, where the angles are
taken at the panel centre. With ideal phasing in the far field this equals
``(4 pi A cos(alpha_in) / lambda^2) * (4 pi A cos(alpha_out) / lambda^2)``,
the combined two-sided aperture gain of :mod:`rislink.farfield`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import kernels

TWO_PI = 2.0 * math.pi


def _unit(v, name="direction"):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError(f"{name} must be a unit 3-vector, got {v!r}")
    return v


def _front_point(p, name="point"):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise ValueError(f"{name} must have 3 coordinates")
    if np.any(p[..., 2] <= 0.0):
        raise ValueError(f"{name} must lie in front of the panel plane (z > 0)")
    return p


def direction(theta_rad: float, phi_rad: float = 0.0) -> np.ndarray:
    """Unit vector at polar angle ``theta`` from the panel normal and azimuth ``phi``."""
    st = math.sin(theta_rad)
    return np.array([st * math.cos(phi_rad), st * math.sin(phi_rad), math.cos(theta_rad)])


def mirror_direction(source_dir) -> np.ndarray:
    """Specular reflection of the direction towards the source."""
    s = _unit(source_dir)
    return np.array([-s[0], -s[1], s[2]])


@dataclass(frozen=True)
class RisPanel:
    nx: int
    ny: int
    wavelength_m: float
    phases: np.ndarray = field(default=None, repr=False)
    insertion_loss_db: float = 0.0
    phase_bits: int | None = None
    phase_error_sigma_rad: float = 0.0

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1 or self.wavelength_m <= 0:
            raise ValueError("panel needs positive element counts and wavelength")
        if self.insertion_loss_db < 0 or self.phase_error_sigma_rad < 0:
            raise ValueError("insertion loss and phase error sigma must be non-negative")
        if self.phase_bits is not None and self.phase_bits < 1:
            raise ValueError("phase_bits must be >= 1")
        ph = np.zeros(self.n_elements) if self.phases is None else np.asarray(self.phases, dtype=float)
        if ph.size != self.n_elements:
            raise ValueError(f"expected {self.n_elements} phases, got {ph.size}")
        ph = np.mod(ph.reshape(-1), TWO_PI)
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny

    @property
    def pitch_m(self) -> float:
        return self.wavelength_m / 2.0

    @property
    def area_m2(self) -> float:
        return self.n_elements * self.pitch_m ** 2

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength_m

    @property
    def amplitude(self) -> float:
        return 10.0 ** (-self.insertion_loss_db / 20.0)

    def element_positions(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (x, y) element coordinates, x varying fastest."""
        xs = (np.arange(self.nx) - (self.nx - 1) / 2.0) * self.pitch_m
        ys = (np.arange(self.ny) - (self.ny - 1) / 2.0) * self.pitch_m
        gx, gy = np.meshgrid(xs, ys)
        return gx.ravel(), gy.ravel()


@dataclass(frozen=True)
class FlatGradient:
    """Linear phase for plane-wave incidence from ``incident_dir`` towards ``outgoing_dir``.

    Both vectors point away from the panel: one towards the source, one
    towards the intended receiver.
    """
    incident_dir: tuple
    outgoing_dir: tuple


@dataclass(frozen=True)
class Focusing:
    source_point: tuple
    focus_point: tuple


@dataclass(frozen=True)
class Uniform:
    phase: float = 0.0


@dataclass(frozen=True)
class Custom:
    phases: tuple


PhaseProfile = Union[FlatGradient, Focusing, Uniform, Custom]


def profile_phases(panel: RisPanel, profile: PhaseProfile) -> np.ndarray:
    x, y = panel.element_positions()
    k = panel.wavenumber
    if isinstance(profile, FlatGradient):
        s = _unit(profile.incident_dir, "incident_dir")
        d = _unit(profile.outgoing_dir, "outgoing_dir")
        g = s + d
        return -k * (g[0] * x + g[1] * y)
    if isinstance(profile, Focusing):
        src = _front_point(profile.source_point, "source_point")
        foc = _front_point(profile.focus_point, "focus_point")
        r1 = np.sqrt((x - src[0]) ** 2 + (y - src[1]) ** 2 + src[2] ** 2)
        r2 = np.sqrt((x - foc[0]) ** 2 + (y - foc[1]) ** 2 + foc[2] ** 2)
        return np.mod(k * r1, TWO_PI) + np.mod(k * r2, TWO_PI)
    if isinstance(profile, Uniform):
        return np.full(panel.n_elements, float(profile.phase))
    if isinstance(profile, Custom):
        return np.asarray(profile.phases, dtype=float)
    raise TypeError(f"unknown phase profile {profile!r}")


def set_profile(panel: RisPanel, profile: PhaseProfile) -> RisPanel:
    """Return a copy of ``panel`` with ideal (unimpaired) phases from ``profile``."""
    return replace(panel, phases=profile_phases(panel, profile))


def quantize_phases(phases, bits: int) -> np.ndarray:
    """Round to the nearest of ``2**bits`` levels ``2*pi*m/2**bits``; halves round up."""
    step = TWO_PI / (1 << bits)
    q = np.floor(np.mod(phases, TWO_PI) / step + 0.5) * step
    return np.mod(q, TWO_PI)


def apply_impairments(panel: RisPanel, seed=None) -> RisPanel:
    """Quantise then perturb the phases; insertion loss acts through ``panel.amplitude``."""
    ph = panel.phases
    if panel.phase_bits is not None:
        ph = quantize_phases(ph, panel.phase_bits)
    if panel.phase_error_sigma_rad > 0:
        rng = np.random.default_rng(seed)
        ph = ph + rng.normal(0.0, panel.phase_error_sigma_rad, ph.shape)
    return replace(panel, phases=ph)


def _obliquity(points) -> np.ndarray:
    p = np.atleast_2d(points)
    return p[:, 2] / np.linalg.norm(p, axis=1)


def field_sum_gain(panel: RisPanel, source_point, dest_points) -> np.ndarray:
    """Combined two-sided RIS gain (linear) for one source and many destinations."""
    src = _front_point(source_point, "source_point").reshape(3)
    dests = _front_point(dest_points, "dest_point").reshape(-1, 3)
    x, y = panel.element_positions()
    amp = np.full(panel.n_elements, panel.amplitude)
    s = kernels.cascade_sum(x, y, amp, panel.phases, panel.wavenumber, src, dests)
    norm = math.pi ** 2 * _obliquity(src)[0] * _obliquity(dests)
    return np.abs(s) ** 2 * norm


def field_sum_gain_db(panel: RisPanel, source_point, dest_point):
    """Combined RIS gain in dB; scalar for one destination, array for many."""
    g = 10.0 * np.log10(field_sum_gain(panel, source_point, dest_point))
    return float(g[0]) if np.ndim(dest_point) == 1 else g


def radiation_pattern(panel: RisPanel, source_point, directions):
    """Far-field pattern for illumination from ``source_point``.

    Returns ``(directions, gain_db)`` with the same normalisation as
    :func:`field_sum_gain`; directions into the back half-space get ``-inf``.
    """
    dirs = np.asarray(directions, dtype=float).reshape(-1, 3)
    if dirs.size == 0:
        raise ValueError("direction grid is empty")
    if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1.0) > 1e-9):
        raise ValueError("directions must be unit vectors")
    src = _front_point(source_point, "source_point").reshape(3)
    x, y = panel.element_positions()
    k = panel.wavenumber
    r1 = np.sqrt((x - src[0]) ** 2 + (y - src[1]) ** 2 + src[2] ** 2)
    amp = np.full(panel.n_elements, panel.amplitude)
    s = kernels.plane_wave_sum(x, y, amp, panel.phases - k * r1, k, dirs)
    cos_out = np.clip(dirs[:, 2], 0.0, None)
    g = np.abs(s) ** 2 * math.pi ** 2 * _obliquity(src)[0] * cos_out
    with np.errstate(divide="ignore"):
        return dirs, 10.0 * np.log10(g)


def quantization_loss_db(phase_bits: int | None) -> float:
    """Expected main-beam loss from uniform phase quantisation error."""
    if phase_bits is None or math.isinf(phase_bits):
        return 0.0
    if phase_bits < 1:
        raise ValueError("phase_bits must be >= 1")
    x = math.pi / 2 ** phase_bits
    return -20.0 * math.log10(math.sin(x) / x)


def phase_error_loss_db(sigma_rad: float) -> float:
    """Expected main-beam loss from i.i.d. Gaussian phase errors, -10*log10(exp(-sigma^2))."""
    if sigma_rad < 0:
        raise ValueError("sigma must be non-negative")
    return 10.0 * sigma_rad ** 2 / math.log(10.0)


def monte_carlo_main_beam_loss_db(panel: RisPanel, n_cases: int, seed=0,
                                  max_angle_rad: float = math.radians(60)) -> float:
    """Average main-beam loss from ``panel``'s phase impairments over random geometries.

    Each case draws incidence and steering directions and a global phase
    offset, phases the panel with a flat gradient, impairs it, and compares
    the far-field main-beam power with the ideal ``N**2``.
    """
    rng = np.random.default_rng(seed)
    x, y = panel.element_positions()
    k = panel.wavenumber
    amp = np.ones(panel.n_elements)
    ratios = np.empty(n_cases)
    for i in range(n_cases):
        th = np.arccos(rng.uniform(math.cos(max_angle_rad), 1.0, 2))
        ph = rng.uniform(0.0, TWO_PI, 2)
        s_dir, d_dir = direction(th[0], ph[0]), direction(th[1], ph[1])
        ideal = set_profile(panel, FlatGradient(s_dir, d_dir))
        ideal = replace(ideal, phases=ideal.phases + rng.uniform(0.0, TWO_PI))
        impaired = apply_impairments(ideal, rng)
        incident = impaired.phases + k * (s_dir[0] * x + s_dir[1] * y)
        s = kernels.plane_wave_sum(x, y, amp, incident, k, d_dir[None, :])
        ratios[i] = abs(s[0]) ** 2 / panel.n_elements ** 2
    return -10.0 * math.log10(ratios.mean())


def fraunhofer_distance_m(panel: RisPanel) -> float:
    """2 D^2 / lambda with D the panel diagonal."""
    d2 = (panel.nx ** 2 + panel.ny ** 2) * panel.pitch_m ** 2
    return 2.0 * d2 / panel.wavelength_m
