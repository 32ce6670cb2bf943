"""Output helpers: atomic file writes, JSON/CSV tables and the convergence SVG."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import TooFewPoints


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temp file in the same directory plus rename.

    A crash before the rename leaves the target untouched.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


CONVERGENCE_COLUMNS = ("level", "n_points", "h", "re", "im", "diff", "order")


def convergence_csv(results) -> str:
    """One row per (level, grid); ``diff`` is |lambda(N_i) - lambda(N_{i+1})| (blank on the finest grid)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CONVERGENCE_COLUMNS)
    for r in results:
        diffs = r.errors()
        order = "" if r.degenerate else _fmt(r.order)
        for i, (n, h, v) in enumerate(zip(r.n_points, r.steps, r.values)):
            d = _fmt(diffs[i]) if i < len(diffs) else ""
            w.writerow([r.level, n, _fmt(h), _fmt(v.real), _fmt(v.imag), d, order])
    return buf.getvalue()


def convergence_points(result):
    """(h, error-proxy) pairs of a convergence result: coarse step against successive difference."""
    return list(zip(result.steps[:-1], result.errors()))


def _series(data):
    if isinstance(data, dict):
        return [(str(k), list(v)) for k, v in data.items()]
    return [("", list(data))]


def emit_svg_convergence(data, width=480, height=360) -> str:
    """Log-log plot of error against h with a fitted-slope annotation.

    ``data`` is a sequence of (h, error) pairs, or a mapping label -> such a
    sequence for one polyline per label. Output depends only on the input.
    """
    series = _series(data)
    pts_all = [p for _, pts in series for p in pts]
    if not series or any(len(pts) < 2 for _, pts in series):
        raise TooFewPoints("a convergence plot needs at least 2 points per series")
    arr = np.asarray(pts_all, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise ValueError("h and error must be positive and finite for a log-log plot")
    lx, ly = np.log10(arr[:, 0]), np.log10(arr[:, 1])
    x0, x1 = math.floor(lx.min()), math.ceil(lx.max())
    y0, y1 = math.floor(ly.min()), math.ceil(ly.max())
    x1, y1 = max(x1, x0 + 1), max(y1, y0 + 1)
    left, right, top, bottom = 70, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (math.log10(v) - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - math.log10(v)) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in range(x0, x1 + 1):
        x = left + (d - x0) / (x1 - x0) * pw
        out.append(f'<text x="{x:.2f}" y="{top + ph + 16}" font-size="11" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1):
        y = top + (y1 - d) / (y1 - y0) * ph
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" font-size="11" text-anchor="end">1e{d}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 8}" font-size="12" text-anchor="middle">h</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.2f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.2f})">error</text>'
    )
    for k, (label, pts) in enumerate(series):
        p = np.asarray(pts, dtype=float)
        slope = float(np.polyfit(np.log(p[:, 0]), np.log(p[:, 1]), 1)[0])
        coords = " ".join(f"{sx(h):.2f},{sy(e):.2f}" for h, e in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>')
        name = f"{label}: " if label else ""
        out.append(
            f'<text x="{left + 8}" y="{top + 16 + 14 * k}" font-size="11">{name}slope {slope:.2f}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
