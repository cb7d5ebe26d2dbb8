"""Minimal static SVG charts for reports.

Plots are decoration only; every number they show is also emitted as CSV
by the callers.  Hand-built SVG keeps the package free of rendering
dependencies.
"""

from __future__ import annotations

import html
from pathlib import Path

__all__ = ["bar_chart", "write_csv"]


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def bar_chart(path, labels, values, title: str = "", width: int = 900,
              height: int = 360, errors=None) -> None:
    """Write a vertical bar chart (optionally with error whiskers) as SVG."""
    if len(labels) != len(values):
        raise ValueError("labels and values must have equal length")
    n = len(values)
    margin_l, margin_r, margin_t, margin_b = 60, 20, 40, 80
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    vmax = max([abs(v) for v in values] +
               ([max(abs(e[0]), abs(e[1])) for e in errors] if errors else []) +
               [1e-12])
    vmin = min(min(values), 0.0)
    if errors:
        vmin = min([vmin] + [e[0] for e in errors])
    span = vmax - vmin if vmax > vmin else 1.0

    def ypix(v: float) -> float:
        return margin_t + plot_h * (1 - (v - vmin) / span)

    bw = plot_w / max(n, 1)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" font-family="sans-serif" font-size="11">',
             f'<text x="{width / 2}" y="20" text-anchor="middle" '
             f'font-size="14">{html.escape(title)}</text>']
    # axis + zero line
    y0 = ypix(max(vmin, 0.0))
    parts.append(f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" '
                 f'y2="{margin_t + plot_h}" stroke="black"/>')
    parts.append(f'<line x1="{margin_l}" y1="{y0:.1f}" '
                 f'x2="{width - margin_r}" y2="{y0:.1f}" stroke="black"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = vmin + frac * span
        y = ypix(v)
        parts.append(f'<line x1="{margin_l - 4}" y1="{y:.1f}" '
                     f'x2="{margin_l}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{margin_l - 8}" y="{y + 4:.1f}" '
                     f'text-anchor="end">{_fmt(v)}</text>')
    for k, (lab, v) in enumerate(zip(labels, values)):
        x = margin_l + k * bw + 0.15 * bw
        y_top = ypix(max(v, 0.0))
        h = abs(ypix(v) - y0)
        parts.append(f'<rect x="{x:.1f}" y="{min(y_top, y0):.1f}" '
                     f'width="{0.7 * bw:.1f}" height="{h:.1f}" '
                     f'fill="#4878a8"/>')
        if errors:
            lo, hi = errors[k]
            cx = x + 0.35 * bw
            parts.append(f'<line x1="{cx:.1f}" y1="{ypix(lo):.1f}" '
                         f'x2="{cx:.1f}" y2="{ypix(hi):.1f}" '
                         f'stroke="black" stroke-width="1.5"/>')
        lx = margin_l + (k + 0.5) * bw
        parts.append(f'<text x="{lx:.1f}" y="{margin_t + plot_h + 12}" '
                     f'text-anchor="end" transform="rotate(-45 {lx:.1f} '
                     f'{margin_t + plot_h + 12})">{html.escape(str(lab))}</text>')
    parts.append("</svg>")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("\n".join(parts))


def write_csv(path, header: list[str], rows) -> None:
    """Write rows of plain values as CSV (UTF-8, comma-separated)."""
    import csv

    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
