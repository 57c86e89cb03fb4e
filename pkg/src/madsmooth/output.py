"""Artifact emission: lossless CSV/JSON and a standalone SVG figure.

Floats are written with repr (shortest exact round-trip), so reloading a
CSV reproduces the values bit for bit.  Files are written to a temporary
sibling and renamed into place, so readers never observe a partial
artifact.
"""
from __future__ import annotations

import json
import os
import tempfile
from typing import Optional, Sequence

import numpy as np


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def atomic_write(path: str, data) -> None:
    """Write text/bytes to a sibling temp file and rename into place."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-madsmooth-")
    os.close(fd)
    try:
        with open(tmp, mode) as f:
            f.write(data)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def render_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, header, rows) -> None:
    atomic_write(path, render_csv(header, rows))


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and obj != obj:  # NaN
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_json(path: str, obj) -> None:
    atomic_write(path, render_json(obj))


# ---------------------------------------------------------------------------
# SVG rendering: two stacked panels, CDF with its band on top, PDF below.

_W, _H = 900, 640
_MARGIN = 55
_PANEL_GAP = 45
_PANEL_H = (_H - 2 * _MARGIN - _PANEL_GAP) // 2


def _fmt(v: float) -> str:
    return f"{v:.3f}"


class _Panel:
    def __init__(self, top: int, x_range, y_range):
        self.top = top
        self.x0, self.x1 = float(x_range[0]), float(x_range[1])
        self.y0, self.y1 = float(y_range[0]), float(y_range[1])
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0

    def px(self, x):
        return _MARGIN + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * (_W - 2 * _MARGIN)

    def py(self, y):
        frac = (np.asarray(y) - self.y0) / (self.y1 - self.y0)
        return self.top + _PANEL_H - frac * _PANEL_H

    def polyline(self, x, y, color, width=1.5):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(self.px(x), self.py(y)))
        return (f'<polyline fill="none" stroke="{color}" '
                f'stroke-width="{width}" points="{pts}"/>')

    def polygon(self, x, y, fill):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(self.px(x), self.py(y)))
        return f'<polygon fill="{fill}" stroke="none" points="{pts}"/>'

    def vline(self, x, color):
        p = float(self.px(x))
        return (f'<line x1="{_fmt(p)}" y1="{_fmt(self.top)}" x2="{_fmt(p)}" '
                f'y2="{_fmt(self.top + _PANEL_H)}" stroke="{color}" '
                f'stroke-width="1" stroke-dasharray="4,3"/>')

    def frame(self, title: str):
        parts = [
            f'<rect x="{_MARGIN}" y="{self.top}" width="{_W - 2 * _MARGIN}" '
            f'height="{_PANEL_H}" fill="none" stroke="#444" stroke-width="1"/>',
            f'<text x="{_MARGIN}" y="{self.top - 8}" font-size="14" '
            f'fill="#222">{title}</text>',
            f'<text x="{_MARGIN}" y="{self.top + _PANEL_H + 16}" font-size="11" '
            f'fill="#555">{_fmt(self.x0)}</text>',
            f'<text x="{_W - _MARGIN - 40}" y="{self.top + _PANEL_H + 16}" '
            f'font-size="11" fill="#555">{_fmt(self.x1)}</text>',
        ]
        return "\n".join(parts)


def render_svg(x: np.ndarray, cdf: np.ndarray, pdf: np.ndarray,
               lower: np.ndarray, upper: np.ndarray,
               modes: Optional[Sequence[float]] = None,
               kernel_cdf: Optional[np.ndarray] = None,
               kernel_pdf: Optional[np.ndarray] = None,
               title: str = "madsmooth fit") -> str:
    """Standalone SVG: CDF with shaded band and mode markers, PDF below.

    The band polygon walks the upper limit left to right then the lower
    limit back, so it always has exactly 2 * len(x) vertices.  Output is
    byte-deterministic for identical inputs.
    """
    x = np.asarray(x, dtype=float)
    modes = list(modes) if modes is not None else []

    top1 = _MARGIN
    top2 = _MARGIN + _PANEL_H + _PANEL_GAP
    p1 = _Panel(top1, (x[0], x[-1]), (0.0, 1.0))
    pdfs = [pdf] + ([kernel_pdf] if kernel_pdf is not None else [])
    pdf_hi = max(float(np.max(p)) for p in pdfs) or 1.0
    p2 = _Panel(top2, (x[0], x[-1]), (0.0, 1.05 * pdf_hi))

    band_x = np.concatenate([x, x[::-1]])
    band_y = np.concatenate([upper, lower[::-1]])

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_MARGIN}" y="28" font-size="16" fill="#000">{title}</text>',
        p1.polygon(band_x, band_y, "#c8dcf0"),
        p1.polyline(x, cdf, "#1f4e99", 2.0),
    ]
    if kernel_cdf is not None:
        parts.append(p1.polyline(x, kernel_cdf, "#999999", 1.2))
    for m in modes:
        parts.append(p1.vline(m, "#b04030"))
    parts.append(p1.frame("CDF with pointwise band"))

    parts.append(p2.polyline(x, pdf, "#1f4e99", 2.0))
    if kernel_pdf is not None:
        parts.append(p2.polyline(x, kernel_pdf, "#999999", 1.2))
    for m in modes:
        parts.append(p2.vline(m, "#b04030"))
    parts.append(p2.frame("PDF"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
