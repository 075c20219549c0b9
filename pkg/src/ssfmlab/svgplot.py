"""Tiny dependency-free SVG renderer for line and scatter plots.

Figures are conveniences, not artifacts of record: every command writes its
data as CSV first, and these helpers exist so a quick look needs no plotting
stack.  Only a small subset of plotting features is supported on purpose.
"""

from __future__ import annotations

import math
from html import escape

__all__ = ["line_plot", "scatter_plot"]

_W, _H = 760, 480
_ML, _MR, _MT, _MB = 72, 24, 40, 56  # margins
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    if not math.isfinite(lo) or not math.isfinite(hi) or hi <= lo:
        return [lo]
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out or [lo]


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e6:
        return str(int(v))
    return f"{v:.4g}"


class _Frame:
    """Maps data coordinates to pixel coordinates inside the axes box."""

    def __init__(self, xlo, xhi, ylo, yhi, logx=False):
        self.logx = logx
        if logx:
            xlo, xhi = math.log10(xlo), math.log10(xhi)
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        pad_y = 0.05 * (yhi - ylo)
        self.xlo, self.xhi = xlo, xhi
        self.ylo, self.yhi = ylo - pad_y, yhi + pad_y

    def x(self, v: float) -> float:
        if self.logx:
            v = math.log10(v)
        return _ML + (v - self.xlo) / (self.xhi - self.xlo) * (_W - _ML - _MR)

    def y(self, v: float) -> float:
        return _H - _MB - (v - self.ylo) / (self.yhi - self.ylo) * (_H - _MT - _MB)


def _axes(frame: _Frame, title: str, xlabel: str, ylabel: str) -> list[str]:
    parts = [
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        'fill="white" stroke="#888"/>',
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="{(_ML + _W - _MR) / 2:.0f}" y="{_H - 14}" text-anchor="middle" '
        f'font-size="12">{escape(xlabel)}</text>',
        f'<text x="18" y="{(_MT + _H - _MB) / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {(_MT + _H - _MB) / 2:.0f})">{escape(ylabel)}</text>',
    ]
    xticks = (
        [10.0**t for t in _ticks(frame.xlo, frame.xhi)] if frame.logx else _ticks(frame.xlo, frame.xhi)
    )
    for t in xticks:
        px = frame.x(t)
        if px < _ML - 0.5 or px > _W - _MR + 0.5:
            continue
        parts.append(f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" y2="{_H - _MB + 5}" stroke="#444"/>')
        parts.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 18}" text-anchor="middle" font-size="11">{_fmt(t)}</text>'
        )
    for t in _ticks(frame.ylo, frame.yhi):
        py = frame.y(t)
        if py < _MT - 0.5 or py > _H - _MB + 0.5:
            continue
        parts.append(f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" y2="{py:.1f}" stroke="#444"/>')
        parts.append(
            f'<text x="{_ML - 8}" y="{py + 4:.1f}" text-anchor="end" font-size="11">{_fmt(t)}</text>'
        )
    return parts


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif">'
    )
    return head + "".join(body) + "</svg>\n"


def line_plot(
    x,
    series: dict[str, list],
    path: str,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
) -> None:
    """Write a multi-series line plot; ``series`` maps label -> y values."""
    xs = [float(v) for v in x]
    finite = [v for ys in series.values() for v in ys if math.isfinite(v)]
    if not xs or not finite:
        raise ValueError("nothing to plot")
    frame = _Frame(min(xs), max(xs), min(finite), max(finite), logx=logx)
    body = _axes(frame, title, xlabel, ylabel)
    for i, (label, ys) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{frame.x(px):.1f},{frame.y(float(py)):.1f}"
            for px, py in zip(xs, ys)
            if math.isfinite(float(py))
        )
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"/>')
        body.append(
            f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 15 * i}" text-anchor="end" '
            f'font-size="12" fill="{color}">{escape(label)}</text>'
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(body))


def scatter_plot(
    groups: dict[str, list[complex]],
    path: str,
    title: str = "",
    xlabel: str = "Re",
    ylabel: str = "Im",
    max_points: int = 4000,
) -> None:
    """Write a scatter plot of complex points; ``groups`` maps label -> points."""
    pts_all = [p for pts in groups.values() for p in pts]
    if not pts_all:
        raise ValueError("nothing to plot")
    re = [p.real for p in pts_all]
    im = [p.imag for p in pts_all]
    frame = _Frame(min(re), max(re), min(im), max(im))
    body = _axes(frame, title, xlabel, ylabel)
    for i, (label, pts) in enumerate(groups.items()):
        color = _COLORS[i % len(_COLORS)]
        step = max(1, len(pts) // max_points)
        for p in pts[::step]:
            body.append(
                f'<circle cx="{frame.x(p.real):.1f}" cy="{frame.y(p.imag):.1f}" r="1.6" '
                f'fill="{color}" fill-opacity="0.45"/>'
            )
        body.append(
            f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 15 * i}" text-anchor="end" '
            f'font-size="12" fill="{color}">{escape(label)}</text>'
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(body))
