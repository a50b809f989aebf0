# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python bindings: each main operation runs end to end
and agrees with the physics on small cases."""

import math

import numpy as np
import pytest

import gaborodo as go


def scaled_sensor(view_px: int) -> "go.SensorConfig":
    cfg = go.SensorConfig()
    ratio = cfg.view_px / view_px
    cfg.view_px = view_px
    cfg.blur_sigma_px = cfg.blur_sigma_px / ratio
    cfg.gain = cfg.gain * ratio * ratio
    return cfg


def test_texture_generation_and_sampling():
    spec = go.TextureSpec(kind="bandlimited_noise", seed=7, resolution_px=128,
                          extent_m=0.5, low_cpm=20.0, high_cpm=100.0)
    field = go.generate_texture(spec)
    grid = field.grid
    assert grid.shape == (128, 128)
    assert grid.min() >= 0.0 and grid.max() <= 1.0
    # deterministic per seed
    again = go.generate_texture(spec).grid
    assert np.array_equal(grid, again)
    # tiling
    assert field.sample(0.1, 0.2) == pytest.approx(field.sample(0.1 + 0.5, 0.2), abs=1e-12)


def test_mask_reconstruction_and_range():
    params = go.GaborParams(xi0=6.0, sigma=1.0, alpha=1.0)
    assert go.eval_gabor_cos(params, 0.0) == 1.0
    assert go.eval_gabor_cos(params, 0.5) == pytest.approx(math.exp(-0.125))
    raster = go.rasterize(params, 64)
    signed = raster.cos_plus - raster.cos_minus
    u = (2.0 * np.arange(64) - 64) / 64.0
    expected = np.exp(-u**2 / 2.0) * np.cos(2.0 * np.pi * 6.0 * u)
    assert np.allclose(signed[0], expected, atol=1e-12)
    assert (raster.cos_plus * raster.cos_minus == 0.0).all()


def test_quadrature_tone_decodes_signed_speed():
    rate, n = 1000.0, 1000
    t = np.arange(n) / rate
    s_cos = np.cos(2 * np.pi * 30.0 * t)
    s_sin = np.sin(2 * np.pi * 30.0 * t)
    est = go.decode_window(s_cos, s_sin, 100.0)
    assert est.accepted
    assert est.v_hat == pytest.approx(0.30, abs=1e-3)
    rev = go.decode_window(s_cos, -s_sin, 100.0)
    assert rev.v_hat == pytest.approx(-0.30, abs=1e-3)


def test_simulation_to_decode_pipeline():
    cfg = scaled_sensor(48)
    params = go.GaborParams()
    masks = go.rasterize(params, 48)
    xi_g = go.ground_frequency(params, cfg, cfg.h_nom_m)
    tex = go.generate_texture(go.TextureSpec(kind="bandlimited_noise", seed=12,
                                             resolution_px=256, extent_m=0.5,
                                             low_cpm=60.0, high_cpm=240.0))
    path = go.generate_path(go.PathSpec(profile="straight", v=0.2, duration_s=1.3))
    sim = go.simulate(tex, masks, cfg, path, go.HeightProfile.nominal(), 42)
    assert len(sim.diff.t) == 1301
    est = go.decode_stream(sim.diff, 33, xi_g)
    assert len(est) >= 5
    for e in est:
        assert e.v_hat == pytest.approx(0.2, abs=0.02)


def test_odometry_closed_forms_and_scoring():
    t = np.arange(10001) / 1000.0
    v = np.full_like(t, 0.2)
    w = np.zeros_like(t)
    path = go.integrate_series(t, v, w)
    assert path.x[-1] == pytest.approx(2.0, abs=1e-6)
    assert go.ate(path, path) == 0.0

    ref = go.generate_path(go.PathSpec(profile="arc", v=0.2, omega=0.2, duration_s=5.0))
    score = go.score_trajectory(ref, ref)
    assert score.ate_m == 0.0 and score.drift_pct == 0.0


def test_objective_and_gyro():
    cfg = go.ObjectiveConfig()
    cfg.sensor = scaled_sensor(48)
    cfg.textures = [go.TextureSpec(kind="bandlimited_noise", seed=5, resolution_px=256,
                                   extent_m=0.5, low_cpm=60.0, high_cpm=240.0)]
    cfg.paths = [go.PathSpec(profile="straight", v=0.25, duration_s=1.2)]
    cfg.height_range_pct = 0.0
    cfg.windows_per_scenario = 2
    cfg.master_seed = 3
    ctx = go.ObjectiveContext(cfg)
    obj = ctx.evaluate(go.GaborParams())
    assert 0.0 <= obj < 0.1
    assert ctx.evaluate(go.GaborParams()) == obj  # common random numbers

    path = go.generate_path(go.PathSpec(profile="arc", v=0.2, omega=0.15, duration_s=2.0))
    gyro = go.GyroModel()
    gyro.bias = 0.01
    measured = go.gyro_measure(path, gyro)
    assert measured[100] == pytest.approx(0.15 + 0.01, abs=1e-12)
