"""Shannon entropy of the radius-magnitude distribution and its q dependence."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .wheel_model import SystemConfig, max_radius, positions

DEFAULT_HORIZON = 2**16
DEFAULT_BINS = 64
DEFAULT_WINDOW = (0.0, 2.0 * math.pi * 50)


@dataclass(frozen=True, eq=False)
class RadiusHistogram:
    bin_edges: np.ndarray
    probabilities: np.ndarray
    sample_count: int


@dataclass(frozen=True)
class EntropyEstimate:
    q: float
    n: int
    bins: int
    horizon: int
    entropy_bits: float | None
    error: str | None = None

    @property
    def is_gap(self) -> bool:
        return self.entropy_bits is None


def radius_histogram(cfg: SystemConfig, horizon: int = DEFAULT_HORIZON, bins: int = DEFAULT_BINS,
                     t_window: tuple[float, float] = DEFAULT_WINDOW) -> RadiusHistogram:
    """Empirical distribution of |R| over ``horizon`` evenly spaced angles.

    The window is sampled half-open so a full period is not double counted.
    Bins span ``[0, max_radius(cfg)]`` regardless of the data, which keeps
    histograms for different q on a common footing.
    """
    if bins < 2 or horizon < bins:
        raise ValueError(f"need horizon >= bins >= 2, got horizon={horizon}, bins={bins}")
    t0, t1 = t_window
    if not (math.isfinite(t0) and math.isfinite(t1)) or not t1 > t0:
        raise ValueError(f"degenerate window [{t0}, {t1}]")
    t = np.linspace(t0, t1, int(horizon), endpoint=False)
    x, y = positions(cfg, t)
    radius = np.hypot(x, y)
    counts, edges = np.histogram(radius, bins=int(bins), range=(0.0, max_radius(cfg)))
    return RadiusHistogram(edges, counts / counts.sum(), int(horizon))


def entropy_bits(hist) -> float:
    """-sum p log2 p over the non-empty bins.

    Accepts a :class:`RadiusHistogram` or a bare probability vector.
    """
    p = np.asarray(getattr(hist, "probabilities", hist), dtype=float)
    p = p[p > 0]
    if p.size <= 1:
        return 0.0
    return float(max(0.0, -np.sum(p * np.log2(p))))


def q_grid(q_min: float, q_max: float, q_step: float) -> list[float]:
    if not 1.0 < q_min <= q_max:
        raise ValueError(f"need 1 < q_min <= q_max, got q_min={q_min}, q_max={q_max}")
    if not q_step > 0:
        raise ValueError("q_step must be positive")
    count = int(math.floor((q_max - q_min) / q_step + 1e-9)) + 1
    # rounding keeps grid values like 1.8 exact in decimal form
    return [round(q_min + i * q_step, 12) for i in range(count)]


def entropy_sweep(q_min: float, q_max: float, q_step: float, n: int = 20, horizon: int = DEFAULT_HORIZON,
                  bins: int = DEFAULT_BINS, t_window: tuple[float, float] = DEFAULT_WINDOW):
    """Entropy for q_r = q_phi = q over a q grid.

    Returns ``(estimates, argmax_q)``. A q that fails is kept as a gap
    (``entropy_bits is None``) and is skipped when picking the argmax.
    """
    estimates = []
    for q in q_grid(q_min, q_max, q_step):
        try:
            hist = radius_histogram(SystemConfig(n=n, q_r=q), horizon, bins, t_window)
            estimates.append(EntropyEstimate(q, n, bins, horizon, entropy_bits(hist)))
        except ValueError as exc:
            estimates.append(EntropyEstimate(q, n, bins, horizon, None, str(exc)))
    valid = [e for e in estimates if not e.is_gap]
    argmax_q = max(valid, key=lambda e: e.entropy_bits).q if valid else None
    return estimates, argmax_q
