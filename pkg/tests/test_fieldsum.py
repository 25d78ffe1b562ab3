import math
from dataclasses import replace

import numpy as np
import pytest

from oracles import continuous_aperture_gain_db, hemisphere_mean_gain
from rislink import farfield as ff
from rislink import fieldsum as fs

LAM = 0.01
BORESIGHT = (0.0, 0.0, 1.0)


def flat_boresight(n):
    return fs.set_profile(fs.RisPanel(n, n, LAM), fs.FlatGradient(BORESIGHT, BORESIGHT))


def test_panel_lattice():
    p = fs.RisPanel(4, 3, LAM)
    x, y = p.element_positions()
    assert p.n_elements == 12 and p.area_m2 == pytest.approx(12 * LAM ** 2 / 4)
    assert np.allclose(np.unique(np.round(np.diff(np.unique(x)), 12)), LAM / 2)
    assert np.allclose(np.unique(np.round(np.diff(np.unique(y)), 12)), LAM / 2)
    assert x.mean() == pytest.approx(0.0, abs=1e-15) and y.mean() == pytest.approx(0.0, abs=1e-15)


def test_panel_validation():
    with pytest.raises(ValueError):
        fs.RisPanel(4, 4, LAM, phases=np.zeros(5))
    with pytest.raises(ValueError):
        fs.RisPanel(4, 4, LAM, phase_bits=0)
    with pytest.raises(ValueError):
        fs.RisPanel(4, 4, LAM, insertion_loss_db=-1)


def test_flat_boresight_phases_equal():
    p = flat_boresight(8)
    assert np.ptp(p.phases) == 0.0


def test_focusing_far_limit_matches_flat_gradient():
    p = fs.RisPanel(16, 16, LAM)
    s, d = fs.direction(0.3, 0.4), fs.direction(0.5, 2.0)
    far = 1e6 * LAM
    flat = fs.set_profile(p, fs.FlatGradient(s, d)).phases
    foc = fs.set_profile(p, fs.Focusing(s * far, d * far)).phases
    diff = np.angle(np.exp(1j * (foc - flat)))
    diff = np.angle(np.exp(1j * (diff - diff[0])))
    assert np.max(np.abs(diff)) < 1e-3


def test_custom_passthrough():
    vals = np.linspace(0.0, 6.0, 16)
    p = fs.set_profile(fs.RisPanel(4, 4, LAM), fs.Custom(tuple(vals)))
    assert np.array_equal(p.phases, vals)


def test_profile_rejects_bad_inputs():
    p = fs.RisPanel(4, 4, LAM)
    with pytest.raises(ValueError):
        fs.set_profile(p, fs.Focusing((0, 0, 1.0), (0.1, 0.0, 0.0)))
    with pytest.raises(ValueError):
        fs.set_profile(p, fs.FlatGradient((0, 0, 2.0), BORESIGHT))


def test_impairments_identity():
    p = fs.set_profile(fs.RisPanel(8, 8, LAM), fs.FlatGradient(fs.direction(0.4), BORESIGHT))
    assert np.array_equal(fs.apply_impairments(p, 3).phases, p.phases)


def test_one_bit_two_levels():
    p = fs.set_profile(fs.RisPanel(8, 8, LAM, phase_bits=1), fs.FlatGradient(fs.direction(0.4), BORESIGHT))
    assert set(np.round(fs.apply_impairments(p).phases, 12)) <= {0.0, round(math.pi, 12)}


def test_quantizer_half_up():
    q = fs.quantize_phases(np.array([math.pi / 2, math.pi / 2 - 1e-9, 3 * math.pi / 2]), 1)
    assert np.allclose(q, [math.pi, 0.0, 0.0])


def test_impairments_deterministic():
    p = replace(flat_boresight(8), phase_error_sigma_rad=0.3)
    a, b = fs.apply_impairments(p, 11), fs.apply_impairments(p, 11)
    assert np.array_equal(a.phases, b.phases)
    assert not np.array_equal(a.phases, fs.apply_impairments(p, 12).phases)


def test_insertion_loss_scales_gain():
    p = flat_boresight(8)
    lossy = replace(p, insertion_loss_db=2.5)
    src = dst = np.array([0, 0, 100.0])
    assert fs.field_sum_gain_db(p, src, dst) - fs.field_sum_gain_db(lossy, src, dst) == pytest.approx(2.5)


@pytest.mark.parametrize("n", [16, 32, 100])
def test_far_field_consistency(n):
    p = flat_boresight(n)
    r = 10 * fs.fraunhofer_distance_m(p)
    g = fs.field_sum_gain_db(p, (0, 0, r), (0, 0, r))
    assert abs(g - 2 * ff.aperture_gain_db(p.area_m2, LAM)) < 0.1


def test_far_field_consistency_oblique():
    p = fs.RisPanel(24, 24, LAM)
    ai, ao = math.radians(30), math.radians(50)
    s, d = fs.direction(ai, 0.3), fs.direction(ao, 2.0)
    p = fs.set_profile(p, fs.FlatGradient(s, d))
    r = 10 * fs.fraunhofer_distance_m(p)
    expected = ff.aperture_gain_db(p.area_m2, LAM, ai) + ff.aperture_gain_db(p.area_m2, LAM, ao)
    assert abs(fs.field_sum_gain_db(p, s * r, d * r) - expected) < 0.1


@pytest.mark.parametrize("n", [16, 32])
def test_near_field_matches_continuous_oracle_oblique(n):
    p = fs.RisPanel(n, n, LAM)
    s, d = fs.direction(0.2, 3.0), fs.direction(0.4, 1.0)
    p = fs.set_profile(p, fs.FlatGradient(s, d))
    src, dst = s * 10 * fs.fraunhofer_distance_m(p), d * 100 * LAM
    g = s + d
    k = 2 * math.pi / LAM
    oracle = continuous_aperture_gain_db(n, n, LAM, src, dst, lambda x, y: -k * (g[0] * x + g[1] * y))
    assert abs(fs.field_sum_gain_db(p, src, dst) - oracle) < 0.3


def test_case_1l_drop_and_focusing():
    p = fs.RisPanel(100, 100, LAM)
    src = np.array([0, 0, 10 * fs.fraunhofer_distance_m(p)])
    dst = np.array([0, 0, 100 * LAM])
    far = 2 * ff.aperture_gain_db(p.area_m2, LAM)
    flat = fs.field_sum_gain_db(fs.set_profile(p, fs.FlatGradient(BORESIGHT, BORESIGHT)), src, dst)
    foc = fs.field_sum_gain_db(fs.set_profile(p, fs.Focusing(src, dst)), src, dst)
    assert flat < far
    assert abs(foc - far) < 0.1


def test_gain_drop_monotone_in_distance():
    # Below about 0.06 * 2D^2/lambda the flat-gradient gain oscillates (Fresnel zones).
    p = flat_boresight(64)
    r_ff = fs.fraunhofer_distance_m(p)
    src = np.array([0, 0, 100 * r_ff])
    z = r_ff * np.linspace(0.08, 1.0, 60)
    g = fs.field_sum_gain_db(p, src, np.column_stack([0 * z, 0 * z, z]))
    assert np.all(np.diff(g) >= -1e-9)


@pytest.mark.parametrize("frac", [0.05, 0.1, 0.3, 1.0, 3.0, 30.0])
def test_focusing_dominates_flat(frac):
    p = fs.RisPanel(32, 32, LAM)
    r_ff = fs.fraunhofer_distance_m(p)
    s, d = fs.direction(0.3, 0.0), fs.direction(0.2, math.pi)
    src, dst = s * 50 * r_ff, d * frac * r_ff
    flat = fs.field_sum_gain_db(fs.set_profile(p, fs.FlatGradient(s, d)), src, dst)
    foc = fs.field_sum_gain_db(fs.set_profile(p, fs.Focusing(src, dst)), src, dst)
    assert foc >= flat - 1e-9
    if frac >= 30:
        assert foc - flat < 0.05


def test_point_on_panel_plane_rejected():
    p = flat_boresight(4)
    with pytest.raises(ValueError):
        fs.field_sum_gain_db(p, (0, 0, 1.0), (0.5, 0.5, 0.0))


def test_quantization_loss_values():
    # -20*log10(sinc(pi/2^b)), evaluated with mpmath
    assert fs.quantization_loss_db(1) == pytest.approx(3.922397540603053, abs=1e-12)
    assert fs.quantization_loss_db(2) == pytest.approx(0.912097583963241, abs=1e-12)
    assert fs.quantization_loss_db(None) == 0.0
    assert fs.quantization_loss_db(24) < 1e-12


def test_quantization_monte_carlo_tracks_analytic():
    for b, tol in ((1, 0.2), (2, 0.1), (3, 0.05)):
        mc = fs.monte_carlo_main_beam_loss_db(fs.RisPanel(16, 16, LAM, phase_bits=b), 3000, seed=b)
        assert abs(mc - fs.quantization_loss_db(b)) < tol


def test_phase_error_loss_monotone():
    sigmas = [0.0, 0.1, 0.2, 0.4, 0.8]
    analytic = [fs.phase_error_loss_db(s) for s in sigmas]
    assert analytic[0] == 0.0
    assert all(b > a for a, b in zip(analytic, analytic[1:]))
    mc = [fs.monte_carlo_main_beam_loss_db(fs.RisPanel(16, 16, LAM, phase_error_sigma_rad=s), 400, seed=1)
          for s in sigmas]
    assert mc[0] == pytest.approx(0.0, abs=1e-9)
    assert all(b > a for a, b in zip(mc, mc[1:]))
    assert mc[-1] == pytest.approx(analytic[-1], abs=0.2)


def test_metal_plate_peaks_at_specular():
    p = fs.set_profile(fs.RisPanel(16, 16, LAM), fs.Uniform())
    s = fs.direction(math.radians(35), 0.7)
    thetas = np.radians(np.linspace(0, 89, 179))
    phis = np.radians(np.linspace(0, 359, 360))
    dirs = np.array([fs.direction(t, f) for t in thetas for f in phis])
    dirs = np.vstack([dirs, fs.mirror_direction(s)])
    _, g = fs.radiation_pattern(p, s * 1e6 * LAM, dirs)
    assert np.argmax(g) == len(dirs) - 1


def test_pattern_empty_grid():
    with pytest.raises(ValueError):
        fs.radiation_pattern(flat_boresight(4), (0, 0, 1.0), np.empty((0, 3)))


def _image_direction(specular, steered):
    u = 2 * specular[:2] - steered[:2]
    return np.array([u[0], u[1], math.sqrt(1 - u @ u)])


def test_mirror_image_lobe_rises_with_coarser_phase():
    s = fs.direction(math.radians(20), 0.0)
    spec = fs.mirror_direction(s)
    steered = fs.direction(math.radians(10), 0.0)  # 30 degrees off specular
    probe = _image_direction(spec, steered)[None, :]
    src = s * 1e6 * LAM
    levels = []
    for bits in (4, 3, 2, 1):
        vals = []
        for seed in range(100):
            p = fs.set_profile(fs.RisPanel(32, 32, LAM, phase_bits=bits), fs.FlatGradient(s, steered))
            p = replace(p, phases=p.phases + np.random.default_rng(seed).uniform(0, 2 * math.pi))
            vals.append(10 ** (fs.radiation_pattern(fs.apply_impairments(p), src, probe)[1][0] / 10))
        levels.append(10 * math.log10(np.mean(vals)))
    # 4..2 bits sit on the sidelobe floor; averaged levels must not fall
    assert all(b >= a - 0.1 for a, b in zip(levels, levels[1:]))
    assert levels[-1] - levels[0] > 10


@pytest.mark.parametrize("n", [16, 24])
def test_hemisphere_power_matches_captured(n):
    ai = math.radians(20)
    s = fs.direction(ai, 0.0)
    p = fs.set_profile(fs.RisPanel(n, n, LAM), fs.FlatGradient(s, fs.direction(0.2, math.pi)))
    mean_gain = hemisphere_mean_gain(lambda d: 10 ** (fs.radiation_pattern(p, s * 1e6 * LAM, d)[1] / 10))
    captured = ff.aperture_gain_db(p.area_m2, LAM, ai)
    assert abs(10 * math.log10(mean_gain) - captured) < 0.5


def _half_power_width(p):
    s = np.array(BORESIGHT)
    th = np.radians(np.linspace(-30, 30, 6001))
    dirs = np.column_stack([np.sin(th), np.zeros_like(th), np.cos(th)])
    _, g = fs.radiation_pattern(p, s * 1e6 * LAM, dirs)
    above = th[g >= g.max() - 3.0103]
    return above.max() - above.min()


def test_pattern_beamwidth_matches_closed_form():
    widths = []
    for n in (16, 32, 64):
        p = flat_boresight(n)
        w = _half_power_width(p)
        expected = ff.BEAMWIDTH_CONSTANT * LAM / ff.equivalent_diameter_m(p.area_m2)
        assert w == pytest.approx(expected, rel=0.15)
        widths.append(w)
    assert widths[0] > widths[1] > widths[2]
