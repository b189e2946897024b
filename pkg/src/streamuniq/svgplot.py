"""Minimal deterministic SVG line plots; no plotting dependency needed.

Output is a plain string: fixed canvas, linear axes, five ticks per axis,
one polyline per series with small circular markers, legend in the top-right
corner.  Identical inputs produce byte-identical files.
"""

from __future__ import annotations

import html

from .errors import DomainError

_PALETTE = ("#1f6feb", "#d1242f", "#1a7f37", "#9a6700", "#8250df")
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 40, 56


def _bounds(values):
    lo = min(values)
    hi = max(values)
    if lo == hi:
        lo -= 1.0
        hi += 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo, hi, count=5):
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def line_plot(series, title: str, xlabel: str, ylabel: str) -> str:
    """series: iterable of (label, xs, ys) with equal-length numeric sequences."""
    series = [(str(label), [float(x) for x in xs], [float(y) for y in ys])
              for label, xs, ys in series]
    if not series:
        raise DomainError("need at least one series")
    for label, xs, ys in series:
        if len(xs) != len(ys) or not xs:
            raise DomainError(f"series {label!r} needs matching nonempty x/y")
    x_lo, x_hi = _bounds([x for _, xs, _ in series for x in xs])
    y_lo, y_hi = _bounds([y for _, _, ys in series for y in ys])
    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _MT + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="monospace" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-size="14">'
        f"{html.escape(title)}</text>",
    ]
    for xt in _ticks(x_lo, x_hi):
        x = px(xt)
        out.append(f'<line x1="{x:.2f}" y1="{_MT}" x2="{x:.2f}" y2="{_MT + plot_h}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{x:.2f}" y="{_MT + plot_h + 18}" text-anchor="middle">'
                   f"{xt:.4g}</text>")
    for yt in _ticks(y_lo, y_hi):
        y = py(yt)
        out.append(f'<line x1="{_ML}" y1="{y:.2f}" x2="{_ML + plot_w}" y2="{y:.2f}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{_ML - 6}" y="{y + 4:.2f}" text-anchor="end">{yt:.4g}</text>')
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
               'fill="none" stroke="#333333"/>')
    out.append(f'<text x="{_ML + plot_w / 2:.1f}" y="{_H - 12}" text-anchor="middle">'
               f"{html.escape(xlabel)}</text>")
    out.append(f'<text x="18" y="{_MT + plot_h / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_MT + plot_h / 2:.1f})">{html.escape(ylabel)}</text>')
    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{points}" fill="none" stroke="{color}" '
                   'stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{color}"/>')
        ly = _MT + 16 + 16 * idx
        out.append(f'<line x1="{_ML + plot_w - 120}" y1="{ly - 4}" x2="{_ML + plot_w - 100}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{_ML + plot_w - 94}" y="{ly}">{html.escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
