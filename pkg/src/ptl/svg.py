"""Tiny hand-rolled SVG charts (lines, scatter, bars).

Convenience views of the CSV outputs; the CSVs are the normative artifacts.
Coordinates are formatted to fixed precision so output is byte-stable.
"""

from __future__ import annotations

WIDTH, HEIGHT = 640, 420
MARGIN = 56
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _f(x: float) -> str:
    return f"{x:.2f}"


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>',
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 8}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xlabel}</text>',
            f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" '
            f'transform="rotate(-90 14 {HEIGHT / 2})">{ylabel}</text>',
        ]

    def finish(self) -> str:
        self.parts.append("</svg>")
        return "\n".join(self.parts) + "\n"


def _axes(canvas: _Canvas, xlo, xhi, ylo, yhi):
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0

    def to_x(v):
        return MARGIN + (v - xlo) / (xhi - xlo) * (WIDTH - 2 * MARGIN)

    def to_y(v):
        return HEIGHT - MARGIN - (v - ylo) / (yhi - ylo) * (HEIGHT - 2 * MARGIN)

    x0, y0 = _f(MARGIN), _f(HEIGHT - MARGIN)
    canvas.parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{_f(WIDTH - MARGIN)}" y2="{y0}" '
        f'stroke="black"/>'
    )
    canvas.parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{_f(MARGIN)}" stroke="black"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = xlo + frac * (xhi - xlo)
        yv = ylo + frac * (yhi - ylo)
        canvas.parts.append(
            f'<text x="{_f(to_x(xv))}" y="{_f(HEIGHT - MARGIN + 16)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">'
            f"{xv:.3g}</text>"
        )
        canvas.parts.append(
            f'<text x="{_f(MARGIN - 6)}" y="{_f(to_y(yv) + 3)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="10">'
            f"{yv:.3g}</text>"
        )
    return to_x, to_y


def _legend(canvas: _Canvas, labels):
    for k, label in enumerate(labels):
        y = MARGIN + 16 * k
        canvas.parts.append(
            f'<rect x="{WIDTH - MARGIN - 110}" y="{_f(y - 8)}" width="10" '
            f'height="10" fill="{PALETTE[k % len(PALETTE)]}"/>'
        )
        canvas.parts.append(
            f'<text x="{WIDTH - MARGIN - 96}" y="{_f(y + 1)}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )


def line_chart(title, xlabel, ylabel, series: dict[str, list[tuple[float, float]]]) -> str:
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    canvas = _Canvas(title, xlabel, ylabel)
    to_x, to_y = _axes(canvas, min(xs), max(xs), min(ys), max(ys))
    for k, (label, pts) in enumerate(series.items()):
        path = " ".join(f"{_f(to_x(x))},{_f(to_y(y))}" for x, y in pts)
        canvas.parts.append(
            f'<polyline points="{path}" fill="none" '
            f'stroke="{PALETTE[k % len(PALETTE)]}" stroke-width="1.5"/>'
        )
    _legend(canvas, series.keys())
    return canvas.finish()


def scatter_chart(title, xlabel, ylabel,
                  series: dict[str, list[tuple[float, float]]],
                  overlay: list[tuple[float, float]] | None = None) -> str:
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    canvas = _Canvas(title, xlabel, ylabel)
    to_x, to_y = _axes(canvas, min(xs), max(xs), min(ys), max(ys))
    for k, (label, pts) in enumerate(series.items()):
        for x, y in pts:
            canvas.parts.append(
                f'<circle cx="{_f(to_x(x))}" cy="{_f(to_y(y))}" r="2.5" '
                f'fill="{PALETTE[k % len(PALETTE)]}" fill-opacity="0.6"/>'
            )
    if overlay:
        pts = sorted(overlay)
        path = " ".join(f"{_f(to_x(x))},{_f(to_y(y))}" for x, y in pts)
        canvas.parts.append(
            f'<polyline points="{path}" fill="none" stroke="black" '
            f'stroke-width="1.2" stroke-dasharray="4 3"/>'
        )
    _legend(canvas, series.keys())
    return canvas.finish()


def bar_chart(title, xlabel, ylabel, categories: list[str],
              series: dict[str, list[float]]) -> str:
    peak = max((v for vals in series.values() for v in vals), default=1.0)
    canvas = _Canvas(title, xlabel, ylabel)
    to_x, to_y = _axes(canvas, 0, len(categories), 0, peak)
    groups = len(series)
    slot = (WIDTH - 2 * MARGIN) / max(1, len(categories))
    bar_w = slot / (groups + 1)
    for k, (label, values) in enumerate(series.items()):
        for c, v in enumerate(values):
            x = MARGIN + c * slot + (k + 0.5) * bar_w
            y = to_y(v)
            h = HEIGHT - MARGIN - y
            canvas.parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_w * 0.9)}" '
                f'height="{_f(h)}" fill="{PALETTE[k % len(PALETTE)]}"/>'
            )
    for c, name in enumerate(categories):
        x = MARGIN + (c + 0.5) * slot
        canvas.parts.append(
            f'<text x="{_f(x)}" y="{_f(HEIGHT - MARGIN + 28)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">'
            f"{name}</text>"
        )
    _legend(canvas, series.keys())
    return canvas.finish()
