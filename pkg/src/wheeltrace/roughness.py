"""Finite-n roughness of the velocity and sensitivity to the angle ratio.

The velocity of an n-wheel train is smooth below the angular scale
``q_phi**(1 - n)`` and looks discontinuous above it. ``roughness_scan``
measures velocity increments across a ladder of step sizes and
``crossover_scale`` locates the elbow between the two regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampling import time_grid
from .wheel_model import (
    SystemConfig,
    WheelError,
    _check_budget,
    _phases,
    max_radius,
    max_speed,
    positions,
    velocity_weights,
)

DEFAULT_PROBES = 64


@dataclass(frozen=True, eq=False)
class RoughnessScan:
    cfg: SystemConfig
    rows: list[tuple[float, float, float]]  # (delta_t, mean_increment, max_increment)


@dataclass(frozen=True, eq=False)
class DivergenceCurve:
    cfg_a: SystemConfig
    cfg_b: SystemConfig
    rows: list[tuple[float, float]]


def default_probe_times(count: int = DEFAULT_PROBES) -> np.ndarray:
    return np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)


def _increments(cfg: SystemConfig, t: np.ndarray, delta_t: float) -> np.ndarray:
    """|v(t + dt) - v(t)| evaluated without subtracting nearly equal sums.

    Each term changes by e^{i theta_k}(e^{i d_k} - 1) with d_k = q_phi**k * dt,
    and e^{i d} - 1 = 2i sin(d/2) e^{i d/2}, so small increments keep full
    relative precision even when the phases theta_k are huge.
    """
    t = np.asarray(t, dtype=float)
    w = velocity_weights(cfg)
    _check_budget(cfg, t + delta_t, np.maximum(w, 1.0))
    _check_budget(cfg, t, np.maximum(w, 1.0))
    dx = np.zeros_like(t)
    dy = np.zeros_like(t)
    for k in range(cfg.n - 1, -1, -1):
        d = float(_phases(cfg, k, np.array(delta_t)))
        amp = 2.0 * w[k] * math.sin(0.5 * d)
        ph = _phases(cfg, k, t) + 0.5 * d
        # i * i * amp * e^{i ph}; velocity carries an extra factor i
        dx -= amp * np.cos(ph)
        dy -= amp * np.sin(ph)
    return np.hypot(dx, dy)


def velocity_increment(cfg: SystemConfig, t: float, delta_t: float) -> float:
    if not delta_t > 0:
        raise ValueError(f"delta_t must be positive, got {delta_t!r}")
    return float(_increments(cfg, np.array([float(t)]), float(delta_t))[0])


def roughness_threshold(cfg: SystemConfig) -> float:
    return cfg.q_phi ** (1 - cfg.n)


def default_scales(cfg: SystemConfig, decades: float = 3.0, per_decade: int = 4) -> list[float]:
    """Geometric ladder of step sizes, ``decades`` either side of the threshold, decreasing."""
    center = math.log10(roughness_threshold(cfg))
    count = int(round(2 * decades * per_decade)) + 1
    return [10.0 ** e for e in np.linspace(center + decades, center - decades, count)]


def roughness_scan(cfg: SystemConfig, probe_times=None, delta_t_scales=None) -> RoughnessScan:
    probes = default_probe_times() if probe_times is None else np.asarray(probe_times, dtype=float)
    scales = default_scales(cfg) if delta_t_scales is None else [float(s) for s in delta_t_scales]
    if len(probes) == 0:
        raise ValueError("need at least one probe time")
    if not scales or any(s <= 0 for s in scales):
        raise ValueError("delta_t scales must be positive")
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ValueError("delta_t scales must be strictly decreasing")
    rows = []
    for dt in scales:
        inc = _increments(cfg, probes, dt)
        rows.append((dt, float(np.mean(inc)), float(np.max(inc))))
    return RoughnessScan(cfg, rows)


def _line_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sum((y - (slope * x + intercept)) ** 2))
    return float(slope), float(intercept), resid


def crossover_scale(scan: RoughnessScan, min_points: int = 3, min_slope_change: float = 0.5) -> float:
    """Step size where the increment law switches from flat to linear.

    Fits two straight lines to log(mean increment) vs log(delta_t), splitting
    the rows where the summed squared residual is smallest, and returns the
    delta_t at which the two lines intersect.
    """
    rows = [r for r in scan.rows if r[1] > 0]
    if len(rows) < 2 * min_points:
        raise WheelError(f"need at least {2 * min_points} rows with non-zero increments")
    lx = np.log10([r[0] for r in rows])
    ly = np.log10([r[1] for r in rows])
    span = lx.max() - lx.min()
    if span < 3.0 - 1e-9:
        raise WheelError(f"scan spans {span:.2f} decades of delta_t; need at least 3")
    order = np.argsort(lx)
    lx, ly = lx[order], ly[order]
    best = None
    for split in range(min_points, len(lx) - min_points + 1):
        small = _line_fit(lx[:split], ly[:split])
        large = _line_fit(lx[split:], ly[split:])
        total = small[2] + large[2]
        if best is None or total < best[0]:
            best = (total, split, small, large)
    _, split, small, large = best
    if small[0] - large[0] < min_slope_change:
        raise WheelError(
            f"no slope change in scan (small-step slope {small[0]:.3f}, large-step slope {large[0]:.3f})"
        )
    x_cross = (large[1] - small[1]) / (small[0] - large[0])
    # intersection outside the data means the fit is unreliable; fall back to the split point
    if not lx[0] <= x_cross <= lx[-1]:
        x_cross = 0.5 * (lx[split - 1] + lx[split])
    return float(10.0 ** x_cross)


def divergence(cfg_a: SystemConfig, cfg_b: SystemConfig, t0: float, t1: float, steps: int) -> DivergenceCurve:
    """Pointwise distance between the traces of two systems on a shared time grid."""
    t = time_grid(t0, t1, steps)
    xa, ya = positions(cfg_a, t)
    xb, yb = positions(cfg_b, t)
    dist = np.hypot(xa - xb, ya - yb)
    return DivergenceCurve(cfg_a, cfg_b, list(zip(t.tolist(), dist.tolist())))


def divergence_bound(cfg_a: SystemConfig, cfg_b: SystemConfig) -> float:
    return max_radius(cfg_a) + max_radius(cfg_b)


def increment_bound(cfg: SystemConfig) -> float:
    return 2.0 * max_speed(cfg)
