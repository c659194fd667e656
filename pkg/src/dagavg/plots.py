"""Minimal hand-rolled SVG line charts for the simulation figures.

One chart per metric per (p, rho) cell: sample size on the x axis,
log10 of the mean metric on the y axis, one polyline per method. No
plotting dependency; output bytes are deterministic for fixed input.
"""

from __future__ import annotations

import math
from pathlib import Path

__all__ = ["series_points", "write_line_chart"]

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#17becf"]

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 150, 40, 48


def series_points(records, metric: str, p: int, rho: float) -> dict[str, list[tuple[int, float]]]:
    """Per-method (n, log10 mean metric) points for one (p, rho) cell.

    Failed records are excluded; a point whose mean metric is not
    strictly positive cannot be drawn on a log axis and is dropped.
    """
    sums: dict[tuple[str, int], list[float]] = {}
    for r in records:
        if r.error or r.p != p or r.rho != rho:
            continue
        sums.setdefault((r.method, r.n), []).append(getattr(r.metrics, metric))
    series: dict[str, list[tuple[int, float]]] = {}
    for (method, n), values in sorted(sums.items()):
        mean = sum(values) / len(values)
        if mean > 0.0:
            series.setdefault(method, []).append((n, math.log10(mean)))
    for pts in series.values():
        pts.sort()
    return series


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def write_line_chart(series: dict[str, list[tuple[int, float]]], title: str, ylabel: str, path) -> None:
    """Render the series as a fixed-size SVG with axes, ticks and legend."""
    xs = sorted({x for pts in series.values() for x, _ in pts})
    ys = [y for pts in series.values() for _, y in pts]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        if x_hi == x_lo:
            return MARGIN_L + plot_w / 2
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" x2="{WIDTH - MARGIN_R}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>',
    ]
    for x in xs:
        px = sx(x)
        out.append(
            f'<line x1="{px:.2f}" y1="{HEIGHT - MARGIN_B}" x2="{px:.2f}" '
            f'y2="{HEIGHT - MARGIN_B + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{HEIGHT - MARGIN_B + 18}" text-anchor="middle">{x}</text>'
        )
    for y in _ticks(y_lo, y_hi):
        py = sy(y)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{py:.2f}" x2="{MARGIN_L}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{py + 4:.2f}" text-anchor="end">{y:.2f}</text>')
    out.append(
        f'<text x="16" y="{HEIGHT / 2:.1f}" transform="rotate(-90 16 {HEIGHT / 2:.1f})" '
        f'text-anchor="middle">{ylabel}</text>'
    )
    out.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">n</text>'
    )
    for i, (method, pts) in enumerate(sorted(series.items())):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 16 * i
        lx = WIDTH - MARGIN_R + 12
        out.append(f'<line x1="{lx}" y1="{ly + 4}" x2="{lx + 18}" y2="{ly + 4}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 24}" y="{ly + 8}">{method}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
