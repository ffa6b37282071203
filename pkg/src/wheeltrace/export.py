"""Deterministic CSV and SVG writers."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    # repr gives the shortest string that round-trips (at most 17 significant digits)
    v = float(value)
    if v == 0.0:
        v = 0.0
    return repr(v)


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file and rename, with LF line endings."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.chmod(tmp, 0o644)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def export_csv(header: Sequence[str], rows: Iterable[Sequence], path) -> None:
    atomic_write(path, csv_text(header, rows))


def _svg_num(v: float) -> str:
    s = f"{v:.10g}"
    return "0" if s == "-0" else s


def svg_text(points, stroke: str = "black", flip_y: bool = True) -> str:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("SVG export needs at least 2 points")
    if flip_y:
        # SVG's y axis points down
        pts = pts * np.array([1.0, -1.0])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = hi - lo
    span = np.where(span > 0, span, 1.0)
    pad = 0.05 * span
    vb_lo = lo - pad
    vb_size = span + 2 * pad
    stroke_width = 0.001 * float(vb_size.max())
    coords = " ".join(f"{_svg_num(x)},{_svg_num(y)}" for x, y in pts)
    viewbox = " ".join(_svg_num(v) for v in (*vb_lo, *vb_size))
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{viewbox}">\n'
        f'<polyline fill="none" stroke="{stroke}" stroke-width="{_svg_num(stroke_width)}" '
        f'stroke-linejoin="round" points="{coords}"/>\n'
        "</svg>\n"
    )


def export_svg(points, path, stroke: str = "black", flip_y: bool = True) -> None:
    """Write a single-polyline SVG whose viewBox is the data bounds plus 5% per side.

    ``points`` is a Trajectory (its x, y columns) or any sequence of pairs,
    e.g. a ``(t, value)`` series.
    """
    if hasattr(points, "points"):
        points = points.points
    atomic_write(path, svg_text(points, stroke=stroke, flip_y=flip_y))
