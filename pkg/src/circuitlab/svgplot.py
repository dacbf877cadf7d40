"""Minimal self-contained SVG 1.1 plotting: lines, scatter, heatmap.

No external renderer; output is deterministic for identical inputs, which
keeps figure artifacts reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SvgPlot", "heatmap_svg"]

_MARGIN = 56.0
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 2.5 * mag, 5 * mag, 10 * mag) if s >= raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out or [lo, hi]


@dataclass
class SvgPlot:
    title: str
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 440
    _series: list = field(default_factory=list)

    def line(self, x, y, label: str = "", color: str | None = None) -> "SvgPlot":
        self._series.append(("line", np.asarray(x, float), np.asarray(y, float),
                             label, color))
        return self

    def scatter(self, x, y, label: str = "", color: str | None = None) -> "SvgPlot":
        self._series.append(("scatter", np.asarray(x, float), np.asarray(y, float),
                             label, color))
        return self

    def render(self) -> str:
        xs = np.concatenate([s[1] for s in self._series]) if self._series else np.array([0.0, 1.0])
        ys = np.concatenate([s[2] for s in self._series]) if self._series else np.array([0.0, 1.0])
        finite = np.isfinite(xs) & np.isfinite(ys)
        xs, ys = xs[finite], ys[finite]
        x_lo, x_hi = (float(xs.min()), float(xs.max())) if xs.size else (0.0, 1.0)
        y_lo, y_hi = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad_x = 0.03 * (x_hi - x_lo)
        pad_y = 0.06 * (y_hi - y_lo)
        x_lo, x_hi = x_lo - pad_x, x_hi + pad_x
        y_lo, y_hi = y_lo - pad_y, y_hi + pad_y
        iw = self.width - 2 * _MARGIN
        ih = self.height - 2 * _MARGIN

        def px(v):
            return _MARGIN + (v - x_lo) / (x_hi - x_lo) * iw

        def py(v):
            return self.height - _MARGIN - (v - y_lo) / (y_hi - y_lo) * ih

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">',
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>',
            f'<text x="{self.width / 2}" y="24" text-anchor="middle" '
            f'font-family="monospace" font-size="14">{self.title}</text>',
            f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{iw}" height="{ih}" '
            'fill="none" stroke="#404040" stroke-width="1"/>',
        ]
        for t in _ticks(x_lo, x_hi):
            if x_lo <= t <= x_hi:
                parts.append(
                    f'<line x1="{px(t):.1f}" y1="{self.height - _MARGIN}" '
                    f'x2="{px(t):.1f}" y2="{self.height - _MARGIN + 5}" stroke="#404040"/>'
                    f'<text x="{px(t):.1f}" y="{self.height - _MARGIN + 18}" '
                    f'text-anchor="middle" font-family="monospace" font-size="10">{_fmt(t)}</text>')
        for t in _ticks(y_lo, y_hi):
            if y_lo <= t <= y_hi:
                parts.append(
                    f'<line x1="{_MARGIN - 5}" y1="{py(t):.1f}" x2="{_MARGIN}" '
                    f'y2="{py(t):.1f}" stroke="#404040"/>'
                    f'<text x="{_MARGIN - 8}" y="{py(t):.1f}" text-anchor="end" '
                    f'dominant-baseline="middle" font-family="monospace" font-size="10">{_fmt(t)}</text>')
        if self.xlabel:
            parts.append(f'<text x="{self.width / 2}" y="{self.height - 12}" '
                         f'text-anchor="middle" font-family="monospace" font-size="12">{self.xlabel}</text>')
        if self.ylabel:
            parts.append(f'<text x="16" y="{self.height / 2}" text-anchor="middle" '
                         f'font-family="monospace" font-size="12" '
                         f'transform="rotate(-90 16 {self.height / 2})">{self.ylabel}</text>')
        for idx, (kind, x, y, label, color) in enumerate(self._series):
            col = color or _PALETTE[idx % len(_PALETTE)]
            ok = np.isfinite(x) & np.isfinite(y)
            if kind == "line":
                pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
                parts.append(f'<polyline points="{pts}" fill="none" '
                             f'stroke="{col}" stroke-width="1.2"/>')
            else:
                for a, b in zip(x[ok], y[ok]):
                    parts.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" '
                                 f'r="2" fill="{col}"/>')
            if label:
                parts.append(
                    f'<text x="{self.width - _MARGIN - 6}" y="{_MARGIN + 16 + 14 * idx}" '
                    f'text-anchor="end" font-family="monospace" font-size="11" '
                    f'fill="{col}">{label}</text>')
        parts.append("</svg>")
        return "\n".join(parts)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())


def heatmap_svg(values: np.ndarray, x_edges, y_edges, title: str,
                xlabel: str = "", ylabel: str = "",
                width: int = 560, height: int = 480) -> str:
    """Grid heatmap with a blue-to-red ramp; values indexed (row=y, col=x)."""
    vals = np.asarray(values, dtype=float)
    ny, nx = vals.shape
    v_lo, v_hi = float(np.nanmin(vals)), float(np.nanmax(vals))
    if v_hi == v_lo:
        v_hi = v_lo + 1.0
    iw = width - 2 * _MARGIN
    ih = height - 2 * _MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
    ]
    for iy in range(ny):
        for ix in range(nx):
            frac = (vals[iy, ix] - v_lo) / (v_hi - v_lo)
            r = int(255 * frac)
            b = int(255 * (1.0 - frac))
            g = int(90 + 60 * (1 - abs(2 * frac - 1)))
            x0 = _MARGIN + ix / nx * iw
            y0 = height - _MARGIN - (iy + 1) / ny * ih
            parts.append(
                f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{iw / nx:.1f}" '
                f'height="{ih / ny:.1f}" fill="rgb({r},{g},{b})"/>')
    parts.append(f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{iw}" height="{ih}" '
                 'fill="none" stroke="#404040"/>')
    if xlabel:
        parts.append(f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle" '
                     f'font-family="monospace" font-size="12">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{height / 2}" text-anchor="middle" '
                     f'font-family="monospace" font-size="12" '
                     f'transform="rotate(-90 16 {height / 2})">{ylabel}</text>')
    parts.append(
        f'<text x="{width - _MARGIN}" y="{_MARGIN - 8}" text-anchor="end" '
        f'font-family="monospace" font-size="10">[{_fmt(v_lo)}, {_fmt(v_hi)}]</text>')
    parts.append("</svg>")
    return "\n".join(parts)
