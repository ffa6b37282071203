"""Uniform trajectory sampling, figure series and arc length."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .wheel_model import (
    ConvergenceError,
    PlanarPoint,
    SystemConfig,
    period_of,
    positions,
    velocities,
    velocity,
)

DEFAULT_STEPS = 200_000
MAX_SEED_PANELS = 1 << 16
# halvings every panel gets before the error test may accept it
MIN_DEPTH = 4
FALLBACK_WINDOW = 2.0 * math.pi * 10


class TrajectorySample(NamedTuple):
    t: float
    position: PlanarPoint
    velocity: PlanarPoint | None


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Column-oriented samples of the scriber path.

    ``vx``/``vy`` are ``None`` for position-only traces.
    """

    cfg: SystemConfig
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray | None = None
    vy: np.ndarray | None = None

    def __post_init__(self):
        if len(self.t) < 2:
            raise ValueError("a trajectory needs at least 2 samples")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def samples(self) -> Iterator[TrajectorySample]:
        for i in range(len(self.t)):
            v = None if self.vx is None else PlanarPoint(float(self.vx[i]), float(self.vy[i]))
            yield TrajectorySample(float(self.t[i]), PlanarPoint(float(self.x[i]), float(self.y[i])), v)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    t_values: np.ndarray
    n_values: list[int]
    magnitudes: np.ndarray  # shape (len(t_values), len(n_values))


def time_grid(t0: float, t1: float, steps: int) -> np.ndarray:
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValueError("window bounds must be finite")
    if not t1 > t0:
        raise ValueError(f"t1 must exceed t0 (got t0={t0}, t1={t1})")
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    return np.linspace(t0, t1, int(steps) + 1)


def default_window(cfg: SystemConfig) -> tuple[float, float]:
    """One fundamental period when it is known and modest, else ten turns of the big wheel."""
    period = period_of(cfg)
    if period is not None and period <= FALLBACK_WINDOW:
        return 0.0, period
    return 0.0, FALLBACK_WINDOW


def sample_trajectory(cfg: SystemConfig, t0: float, t1: float, steps: int, with_velocity: bool = True) -> Trajectory:
    t = time_grid(t0, t1, steps)
    x, y = positions(cfg, t)
    if not with_velocity:
        return Trajectory(cfg, t, x, y)
    vx, vy = velocities(cfg, t)
    return Trajectory(cfg, t, x, y, vx, vy)


def radius_series(cfg: SystemConfig, t0: float, t1: float, steps: int) -> list[tuple[float, float]]:
    t = time_grid(t0, t1, steps)
    x, y = positions(cfg, t)
    return list(zip(t.tolist(), np.hypot(x, y).tolist()))


def speed_series(cfg: SystemConfig, t0: float, t1: float, steps: int) -> list[tuple[float, float]]:
    t = time_grid(t0, t1, steps)
    vx, vy = velocities(cfg, t)
    return list(zip(t.tolist(), np.hypot(vx, vy).tolist()))


def velocity_phase(cfg: SystemConfig, t0: float, t1: float, steps: int) -> list[tuple[float, float]]:
    t = time_grid(t0, t1, steps)
    vx, vy = velocities(cfg, t)
    return list(zip(vx.tolist(), vy.tolist()))


def surface_grid(cfg: SystemConfig, t0: float, t1: float, t_steps: int, n_min: int, n_max: int) -> SurfaceGrid:
    """|R| over a (t, n) grid, each column truncating the train to n wheels."""
    if not 1 <= n_min <= n_max <= cfg.n:
        raise ValueError(f"need 1 <= n_min <= n_max <= n, got n_min={n_min}, n_max={n_max}, n={cfg.n}")
    t = time_grid(t0, t1, t_steps)
    n_values = list(range(n_min, n_max + 1))
    mags = np.empty((len(t), len(n_values)))
    for j, m in enumerate(n_values):
        x, y = positions(cfg.with_n(m), t)
        mags[:, j] = np.hypot(x, y)
    return SurfaceGrid(t, n_values, mags)


def _speed(cfg: SystemConfig, t: float) -> float:
    return abs(velocity(cfg, t))


def arc_length(cfg: SystemConfig, t0: float, t1: float, tol: float = 1e-8, max_depth: int = 40) -> tuple[float, float]:
    """Length of the trace over [t0, t1] by adaptive Simpson quadrature of the speed.

    Returns ``(length, error_estimate)``. The tolerance is halved on each
    split; a subinterval that is still unresolved at ``max_depth`` raises
    :class:`ConvergenceError`.
    """
    if not t1 > t0:
        raise ValueError(f"t1 must exceed t0 (got t0={t0}, t1={t1})")
    if not tol > 0:
        raise ValueError("tol must be positive")

    def f(t):
        return _speed(cfg, t)

    def simpson(a, fa, b, fb):
        m = 0.5 * (a + b)
        fm = f(m)
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def refine(a, fa, b, fb, m, fm, whole, eps, depth):
        lm, flm, left = simpson(a, fa, m, fm)
        rm, frm, right = simpson(m, fm, b, fb)
        delta = left + right - whole
        if depth >= MIN_DEPTH and abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth:
            raise ConvergenceError(f"arc_length did not converge on [{a}, {b}] within depth {max_depth}")
        l_val, l_err = refine(a, fa, m, fm, lm, flm, left, eps / 2.0, depth + 1)
        r_val, r_err = refine(m, fm, b, fb, rm, frm, right, eps / 2.0, depth + 1)
        return l_val + r_val, l_err + r_err

    fa, fb = f(t0), f(t1)
    # seed with about four panels per turn of the fastest wheel, so no panel
    # spans a whole oscillation and fools the first Simpson comparison
    fastest = cfg.q_phi ** (cfg.n - 1)
    panels = int(min(max(8, math.ceil(4 * (t1 - t0) * fastest / (2 * math.pi))), MAX_SEED_PANELS))
    edges = np.linspace(t0, t1, panels + 1).tolist()
    vals = [fa] + [f(e) for e in edges[1:-1]] + [fb]
    total, err = 0.0, 0.0
    for i in range(panels):
        a, b = edges[i], edges[i + 1]
        m, fm, whole = simpson(a, vals[i], b, vals[i + 1])
        v, e = refine(a, vals[i], b, vals[i + 1], m, fm, whole, tol / panels, 1)
        total += v
        err += e
    return total, err
