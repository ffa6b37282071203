"""Pointwise kinematics of the nested wheel system.

Every wheel ``k`` has radius ``q_r**-k`` and turns through ``q_phi**k * t``,
so the scriber sits at

    R(t) = sum_{k<n} q_r**-k * exp(i * q_phi**k * t)

in units of the largest radius ``r0``. All functions here work in those
normalized units; ``r0`` is carried on the config and only applied by the
exporters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

#: Largest per-term absolute phase error (in units of eps) we accept.
PHASE_BUDGET = 2.0**40


class WheelError(ValueError):
    """Numerical failure inside a computation (maps to CLI exit code 2)."""


class PhaseBudgetError(WheelError):
    """Raised when q_phi**k * t is too large to evaluate in double precision."""


class ConvergenceError(WheelError):
    """Raised when an iterative scheme runs out of refinement depth."""


class PlanarPoint(NamedTuple):
    x: float
    y: float

    def __abs__(self) -> float:
        return math.hypot(self.x, self.y)

    def __sub__(self, other):
        return PlanarPoint(self.x - other[0], self.y - other[1])

    def __add__(self, other):
        return PlanarPoint(self.x + other[0], self.y + other[1])


@dataclass(frozen=True)
class SystemConfig:
    """Parameterization of the wheel train.

    ``q_phi`` defaults to ``q_r``. When ``q_phi_rational=(a, b)`` is given the
    rational is authoritative and ``q_phi`` is set to ``a / b``.
    """

    n: int
    q_r: float
    q_phi: float | None = None
    r0: float = 1.0
    q_phi_rational: tuple[int, int] | None = field(default=None)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.q_phi_rational is not None:
            a, b = (int(v) for v in self.q_phi_rational)
            if a < 1 or b < 1 or math.gcd(a, b) != 1:
                raise ValueError(f"q_phi_rational must be coprime positive integers, got {a}/{b}")
            exact = a / b
            if self.q_phi is not None and self.q_phi != exact:
                raise ValueError(f"q_phi={self.q_phi!r} disagrees with q_phi_rational={a}/{b}")
            object.__setattr__(self, "q_phi_rational", (a, b))
            object.__setattr__(self, "q_phi", exact)
        elif self.q_phi is None:
            object.__setattr__(self, "q_phi", self.q_r)
        for name in ("q_r", "q_phi", "r0"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not self.q_r > 1.0:
            raise ValueError(f"q_r must exceed 1, got {self.q_r!r}")
        if not self.q_phi > 1.0:
            raise ValueError(f"q_phi must exceed 1, got {self.q_phi!r}")
        if not self.r0 > 0.0:
            raise ValueError(f"r0 must be positive, got {self.r0!r}")

    @classmethod
    def rational(cls, a: int, b: int, n: int, q_r: float | None = None, r0: float = 1.0):
        """Config with an exact angle ratio a/b; ``q_r`` defaults to a/b too."""
        return cls(n=n, q_r=a / b if q_r is None else q_r, r0=r0, q_phi_rational=(a, b))

    def with_n(self, n: int) -> "SystemConfig":
        return replace(self, n=n)

    @property
    def integer_ratio(self) -> bool:
        if self.q_phi_rational is not None:
            return self.q_phi_rational[1] == 1
        return float(self.q_phi).is_integer()


def _phases(cfg: SystemConfig, k: int, t: np.ndarray) -> np.ndarray:
    if cfg.q_phi_rational is not None:
        a, b = cfg.q_phi_rational
        return (float(a**k) * t) / float(b**k)
    return cfg.q_phi**k * t


def _check_budget(cfg: SystemConfig, t: np.ndarray, weights: np.ndarray) -> None:
    t = np.asarray(t, dtype=float)
    if t.size == 0:
        return
    if not np.all(np.isfinite(t)):
        raise ValueError("t must be finite")
    tmax = float(np.max(np.abs(t)))
    k = np.arange(cfg.n)
    # absolute rounding error a term can inject ~ eps * weight * |phase|
    exposure = weights * cfg.q_phi**k * tmax
    worst = float(np.max(exposure))
    if worst >= PHASE_BUDGET:
        raise PhaseBudgetError(
            f"phase budget exceeded: weighted phase {worst:.3g} >= 2^40 "
            f"(n={cfg.n}, q_phi={cfg.q_phi}, |t|max={tmax:.6g})"
        )


def within_budget(cfg: SystemConfig, t, for_velocity: bool = True) -> bool:
    """True if ``position`` (and, with ``for_velocity``, ``velocity``) accept every angle in ``t``."""
    try:
        _check_budget(cfg, t, position_weights(cfg))
        if for_velocity:
            _check_budget(cfg, t, np.maximum(velocity_weights(cfg), 1.0))
    except PhaseBudgetError:
        return False
    return True


def position_weights(cfg: SystemConfig) -> np.ndarray:
    return cfg.q_r ** -np.arange(cfg.n, dtype=float)


def velocity_weights(cfg: SystemConfig) -> np.ndarray:
    return (cfg.q_phi / cfg.q_r) ** np.arange(cfg.n, dtype=float)


def _weighted_sum(cfg, t, weights, rotate):
    t = np.asarray(t, dtype=float)
    x = np.zeros_like(t)
    y = np.zeros_like(t)
    # smallest terms first
    for k in range(cfg.n - 1, -1, -1):
        ph = _phases(cfg, k, t)
        x += weights[k] * np.cos(ph)
        y += weights[k] * np.sin(ph)
    if rotate:
        # multiply by i
        return 0.0 - y, x
    return x, y


def positions(cfg: SystemConfig, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``position``: returns arrays ``(x, y)`` for an array of angles."""
    w = position_weights(cfg)
    _check_budget(cfg, t, w)
    return _weighted_sum(cfg, t, w, rotate=False)


def velocities(cfg: SystemConfig, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``velocity``: returns arrays ``(vx, vy)``."""
    w = velocity_weights(cfg)
    _check_budget(cfg, t, np.maximum(w, 1.0))
    return _weighted_sum(cfg, t, w, rotate=True)


def position(cfg: SystemConfig, t: float) -> PlanarPoint:
    x, y = positions(cfg, np.array([float(t)]))
    return PlanarPoint(float(x[0]), float(y[0]))


def velocity(cfg: SystemConfig, t: float) -> PlanarPoint:
    vx, vy = velocities(cfg, np.array([float(t)]))
    return PlanarPoint(float(vx[0]), float(vy[0]))


def max_radius(cfg: SystemConfig) -> float:
    """Triangle-inequality bound on |R|: the geometric sum of the radii."""
    return (1.0 - cfg.q_r ** -cfg.n) / (1.0 - 1.0 / cfg.q_r)


def max_speed(cfg: SystemConfig) -> float:
    ratio = cfg.q_phi / cfg.q_r
    if ratio == 1.0:
        return float(cfg.n)
    return math.fsum(ratio**k for k in range(cfg.n))


def self_similarity_residual(cfg: SystemConfig, t: float) -> float:
    """Defect of the identity R_n(q_phi t) = q_r (R_{n+1}(t) - e^{it})."""
    lhs = position(cfg, cfg.q_phi * t)
    grown = position(cfg.with_n(cfg.n + 1), t)
    rhs = PlanarPoint(cfg.q_r * (grown.x - math.cos(t)), cfg.q_r * (grown.y - math.sin(t)))
    return abs(lhs - rhs)


def fundamental_period(q_phi_rational: tuple[int, int], n: int) -> float:
    """Smallest T > 0 with (a/b)**k * T a multiple of 2*pi for every k < n."""
    a, b = q_phi_rational
    if math.gcd(a, b) != 1 or b < 1:
        raise ValueError(f"expected coprime a/b with b >= 1, got {a}/{b}")
    if a <= b:
        raise ValueError(f"q_phi = {a}/{b} must exceed 1")
    if n < 1:
        raise ValueError("n must be positive")
    return 2.0 * math.pi * b ** (n - 1)


def period_of(cfg: SystemConfig) -> float | None:
    """Fundamental period of the trajectory when the angle ratio is known to be rational."""
    if cfg.q_phi_rational is not None:
        return fundamental_period(cfg.q_phi_rational, cfg.n)
    if cfg.integer_ratio:
        return 2.0 * math.pi
    frac = Fraction(cfg.q_phi).limit_denominator(1000)
    if float(frac) == cfg.q_phi and frac.denominator > 1:
        return fundamental_period((frac.numerator, frac.denominator), cfg.n)
    return None
