"""Box-counting dimension and zoom-window self-similarity of point sets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .wheel_model import PlanarPoint


@dataclass(frozen=True, eq=False)
class BoxCountEstimate:
    scales: list[float]
    counts: list[int]
    dimension: float
    fit_r2: float


@dataclass(frozen=True, eq=False)
class ZoomWindow:
    center: PlanarPoint
    width: float
    points: np.ndarray  # (m, 2), inside the unit square


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        arr = arr.reshape(-1, 2)
    if len(arr) == 0:
        raise ValueError("point set is empty")
    return arr


def box_count(points, scale: float) -> int:
    """Occupied cells of a grid with side ``scale`` anchored at the bounding-box corner."""
    pts = _as_points(points)
    if not scale > 0:
        raise ValueError("scale must be positive")
    cells = np.floor((pts - pts.min(axis=0)) / scale).astype(np.int64)
    width = int(cells[:, 1].max()) + 1
    return int(np.unique(cells[:, 0] * width + cells[:, 1]).size)


def default_box_scales(points, count: int = 12) -> list[float]:
    """Geometric ladder from width/4 down to width/4096, width being the larger bbox side."""
    pts = _as_points(points)
    width = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    if width <= 0:
        raise ValueError("point set has zero extent")
    return np.geomspace(width / 4, width / 4096, count).tolist()


def box_dimension(points, scales=None) -> BoxCountEstimate:
    pts = _as_points(points)
    scales = default_box_scales(pts) if scales is None else sorted((float(s) for s in scales), reverse=True)
    if len(scales) < 4:
        raise ValueError("need at least 4 scales")
    if math.log10(scales[0] / scales[-1]) < 2.0 - 1e-9:
        raise ValueError("scales must span at least two decades")
    counts = [box_count(pts, s) for s in scales]
    x = np.log(1.0 / np.asarray(scales))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return BoxCountEstimate(list(scales), counts, float(slope), min(1.0, max(0.0, r2)))


def zoom_window(traj, center, width: float, resample: int = 5000) -> ZoomWindow:
    """Points of ``traj`` inside the square window, mapped so the window becomes [0, 1]^2.

    ``traj`` may be a Trajectory or an (m, 2) array. When more than
    ``resample`` points fall inside, an evenly spaced subset is kept.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    pts = traj.points if hasattr(traj, "points") else _as_points(traj)
    cx, cy = center
    lo = np.array([cx - width / 2, cy - width / 2])
    inside = np.all((pts >= lo) & (pts <= lo + width), axis=1)
    sel = pts[inside]
    if len(sel) == 0:
        raise ValueError("zoom window does not intersect the trajectory")
    if resample and len(sel) > resample:
        sel = sel[np.linspace(0, len(sel) - 1, resample).round().astype(int)]
    norm = np.clip((sel - lo) / width, 0.0, 1.0)
    return ZoomWindow(PlanarPoint(float(cx), float(cy)), float(width), norm)


def hausdorff_distance(a, b) -> float:
    a, b = _as_points(a), _as_points(b)
    d_ab = cKDTree(b).query(a)[0].max()
    d_ba = cKDTree(a).query(b)[0].max()
    return float(max(d_ab, d_ba))


def similarity_score(a: ZoomWindow, b: ZoomWindow) -> float:
    """1 - d_H / sqrt(2) for the normalized point sets; 1 means identical."""
    pa = getattr(a, "points", a)
    pb = getattr(b, "points", b)
    return float(min(1.0, max(0.0, 1.0 - hausdorff_distance(pa, pb) / math.sqrt(2.0))))
