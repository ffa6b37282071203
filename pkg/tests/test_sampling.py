import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import arc_length_mp, cardioid_length
from wheeltrace.sampling import (
    arc_length,
    default_window,
    radius_series,
    sample_trajectory,
    speed_series,
    surface_grid,
    velocity_phase,
)
from wheeltrace.wheel_model import ConvergenceError, PhaseBudgetError, SystemConfig, max_radius, max_speed, position, velocity

CARDIOID = SystemConfig(2, 2.0)


def test_unit_circle_trajectory():
    traj = sample_trajectory(SystemConfig(1, 2.0), 0.0, 2 * math.pi, 4)
    expected = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)]
    assert len(traj) == 5
    for s, (x, y) in zip(traj.samples, expected):
        assert s.position.x == pytest.approx(x, abs=1e-15)
        assert s.position.y == pytest.approx(y, abs=1e-15)


def test_uniform_grid_midpoint():
    traj = sample_trajectory(CARDIOID, 0.0, 0.5, 2)
    samples = list(traj.samples)
    assert len(samples) == 3
    assert samples[1].t == 0.25
    assert samples[1].position == position(CARDIOID, 0.25)


def test_first_sample_of_long_trace():
    traj = sample_trajectory(SystemConfig(20, 2.5), 0.0, 2 * math.pi, 10**5)
    assert traj.x[0] == pytest.approx(1.666666648341473, abs=1e-15)
    assert traj.y[0] == 0.0


def test_trajectory_agrees_with_pointwise_model():
    cfg = SystemConfig(12, 2.3, 2.31)
    traj = sample_trajectory(cfg, -1.0, 3.0, 400)
    for s in list(traj.samples)[::37]:
        p, v = position(cfg, s.t), velocity(cfg, s.t)
        assert abs(s.position - p) <= 1e-15
        assert abs(s.velocity - v) <= 1e-14


@pytest.mark.parametrize("args", [(0.0, 0.0, 10), (1.0, 0.5, 10), (0.0, 1.0, 1)])
def test_sampling_rejects_bad_windows(args):
    with pytest.raises(ValueError):
        sample_trajectory(CARDIOID, *args)


def test_sampling_rejects_phase_budget():
    with pytest.raises(PhaseBudgetError):
        sample_trajectory(SystemConfig(20, 5.0), 0.0, 62.8, 100)
    traj = sample_trajectory(SystemConfig(20, 5.0), 0.0, 62.8, 100, with_velocity=False)
    assert traj.vx is None


def test_default_window():
    assert default_window(SystemConfig(5, 3.0)) == (0.0, 2 * math.pi)
    assert default_window(SystemConfig.rational(3, 2, 2)) == (0.0, 4 * math.pi)
    assert default_window(SystemConfig(20, 2.5)) == (0.0, 20 * math.pi)


@pytest.mark.parametrize("cfg, t0, t1, expected, tol", [
    (SystemConfig(1, 2.0), 0.0, 2 * math.pi, 2 * math.pi, 1e-9),
    (CARDIOID, 0.0, 2 * math.pi, 8.0, 1e-6),
    (CARDIOID, 0.0, math.pi, 4.0, 1e-6),
])
def test_arc_length_examples(cfg, t0, t1, expected, tol):
    length, err = arc_length(cfg, t0, t1, tol=1e-8)
    assert length == pytest.approx(expected, abs=tol)
    assert err <= 1e-8


def test_arc_length_against_quadrature_oracle():
    for t0, t1 in [(0.3, 5.1), (1.0, 9.0), (-2.0, 0.5)]:
        length, _ = arc_length(CARDIOID, t0, t1, tol=1e-10)
        assert length == pytest.approx(cardioid_length(t0, t1), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.05, 0.95), st.floats(0.5, 4.0))
def test_arc_length_additive_and_above_chord(t0, frac, width):
    cfg = SystemConfig(4, 2.2)
    tol = 1e-7
    t1 = t0 + width
    tm = t0 + frac * width
    whole, _ = arc_length(cfg, t0, t1, tol)
    left, _ = arc_length(cfg, t0, tm, tol)
    right, _ = arc_length(cfg, tm, t1, tol)
    assert abs(whole - (left + right)) <= 2 * tol
    assert whole >= abs(position(cfg, t1) - position(cfg, t0))


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.floats(1.2, 3.0), st.floats(0.0, 3.0), st.floats(0.3, 4.0))
def test_arc_length_matches_high_precision_quadrature(n, q, t0, width):
    cfg = SystemConfig(n, q)
    tol = 1e-8
    length, _ = arc_length(cfg, t0, t0 + width, tol)
    assert length == pytest.approx(arc_length_mp(n, q, q, t0, t0 + width), abs=10 * tol)


def test_arc_length_depth_exhaustion():
    with pytest.raises(ConvergenceError):
        arc_length(SystemConfig(12, 2.5), 0.0, 6.0, tol=1e-12, max_depth=3)


def test_arc_length_preconditions():
    with pytest.raises(ValueError):
        arc_length(CARDIOID, 1.0, 1.0)
    with pytest.raises(ValueError):
        arc_length(CARDIOID, 0.0, 1.0, tol=0.0)


def test_radius_series_examples():
    assert all(v == pytest.approx(1.0, abs=1e-15) for _, v in radius_series(SystemConfig(1, 2.0), 0, 2 * math.pi, 33))
    rows = radius_series(CARDIOID, 0.0, 2 * math.pi, 2)
    assert rows[0] == (0.0, 1.5)
    assert rows[1][0] == math.pi and rows[1][1] == pytest.approx(0.5, abs=1e-15)


def test_speed_series_examples():
    rows = speed_series(CARDIOID, 0.0, 2 * math.pi, 2)
    assert rows[0][1] == 2.0
    assert rows[1][1] == pytest.approx(0.0, abs=1e-15)
    assert all(v == pytest.approx(1.0) for _, v in speed_series(SystemConfig(1, 3.0), 0, 9, 20))


def test_velocity_phase_examples():
    assert velocity_phase(CARDIOID, 0.0, 1.0, 2)[0] == (0.0, 2.0)
    pts = velocity_phase(SystemConfig(1, 2.0), 0.0, 2 * math.pi, 4)
    assert len(pts) == 5 and all(math.hypot(*p) == pytest.approx(1.0) for p in pts)
    assert velocity_phase(SystemConfig(20, 2.5), 0.0, 1.0, 2)[0] == (0.0, 20.0)


def test_series_within_bounds_and_consistent():
    cfg = SystemConfig(20, 2.5)
    radius = radius_series(cfg, 0.0, 20.0, 5000)
    speed = speed_series(cfg, 0.0, 20.0, 5000)
    assert all(0 <= v <= max_radius(cfg) for _, v in radius)
    assert all(0 <= v <= max_speed(cfg) + 1e-12 for _, v in speed)
    for i in (0, 1234, 5000):
        t = radius[i][0]
        assert radius[i][1] == pytest.approx(abs(position(cfg, t)), abs=1e-15)
        assert speed[i][1] == pytest.approx(abs(velocity(cfg, t)), abs=1e-13)


def test_integer_ratio_radius_series_repeats():
    cfg = SystemConfig(8, 3.0)
    a = np.array(radius_series(cfg, 0.0, 2 * math.pi, 1000))[:, 1]
    b = np.array(radius_series(cfg, 2 * math.pi, 4 * math.pi, 1000))[:, 1]
    assert np.max(np.abs(a - b)) <= 1e-12


def test_surface_grid():
    g = surface_grid(SystemConfig(20, 2.5), 0.0, 2 * math.pi, 50, 1, 20)
    assert g.magnitudes.shape == (51, 20)
    assert np.allclose(g.magnitudes[:, 0], 1.0)
    assert g.magnitudes[0, 19] == pytest.approx(1.666666648341473, abs=1e-15)
    assert surface_grid(CARDIOID, 0.0, 1.0, 4, 2, 2).magnitudes[0, 0] == 1.5
    single = surface_grid(SystemConfig(5, 2.0), 0.0, 3.0, 10, 1, 1)
    assert np.allclose(single.magnitudes, 1.0)
    for j, m in enumerate(g.n_values):
        assert np.all(g.magnitudes[:, j] <= max_radius(SystemConfig(m, 2.5)) + 1e-15)
    with pytest.raises(ValueError):
        surface_grid(CARDIOID, 0.0, 1.0, 4, 1, 3)
