"""Self-contained SVG heatmaps of similarity matrices.

Output is plain text built here rather than through a plotting library, so
identical matrices always give identical bytes.
"""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .similarity import SimilarityMatrix

# cold (0) -> hot (1)
RAMP = (
    (0.00, (49, 54, 149)),
    (0.25, (116, 173, 209)),
    (0.50, (255, 255, 191)),
    (0.75, (244, 109, 67)),
    (1.00, (165, 0, 38)),
)
NEUTRAL = "#b0b0b0"
LEVELS = 256


def color(value: float) -> str:
    """Hex colour for a value in [0, 1]; values outside are clipped, nan is neutral."""
    if value is None or math.isnan(value):
        return NEUTRAL
    v = round(min(1.0, max(0.0, float(value))) * (LEVELS - 1)) / (LEVELS - 1)
    for (x0, c0), (x1, c1) in zip(RAMP, RAMP[1:]):
        if v <= x1:
            f = (v - x0) / (x1 - x0)
            rgb = [round(a + f * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*RAMP[-1][1])


def _tick_positions(n: int, max_ticks: int = 8) -> list[int]:
    if n <= max_ticks:
        return list(range(n))
    step = math.ceil(n / max_ticks)
    return list(range(0, n, step))


def render_heatmap(m: SimilarityMatrix, title: str | None = None, size: int = 480,
                   label=str) -> str:
    """SVG document for ``m``; ``label`` formats window starts for the axes."""
    n = len(m)
    if n == 0 or m.values.size == 0:
        raise ValueError("cannot render an empty matrix")
    cell = size / n
    left, top = 90.0, 40.0
    legend_x = left + size + 30
    width = legend_x + 70
    height = top + size + 80
    title = title if title is not None else m.measure.upper()

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}" font-family="sans-serif" font-size="11">',
        '<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">',
    ]
    for x, rgb in RAMP:
        out.append(f'<stop offset="{x:g}" stop-color="#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"/>')
    out.append("</linearGradient></defs>")
    out.append(f'<text x="{left + size / 2:.2f}" y="{top - 15:.2f}" text-anchor="middle" '
               f'font-size="14">{escape(title)}</text>')

    out.append('<g shape-rendering="crispEdges">')
    colors = [[color(v) for v in row] for row in m.values]
    for i in range(n):
        j = 0
        while j < n:
            c = colors[i][j]
            k = j + 1
            while k < n and colors[i][k] == c:
                k += 1
            out.append(f'<rect x="{left + j * cell:.3f}" y="{top + i * cell:.3f}" '
                       f'width="{(k - j) * cell:.3f}" height="{cell:.3f}" fill="{c}"/>')
            j = k
    out.append("</g>")

    for i in _tick_positions(n):
        lab = escape(label(m.windows[i]))
        cx = left + (i + 0.5) * cell
        cy = top + (i + 0.5) * cell
        out.append(f'<text x="{left - 6:.2f}" y="{cy + 4:.2f}" text-anchor="end">{lab}</text>')
        out.append(f'<text x="{cx:.2f}" y="{top + size + 14:.2f}" text-anchor="end" '
                   f'transform="rotate(-45 {cx:.2f} {top + size + 14:.2f})">{lab}</text>')

    out.append(f'<rect x="{legend_x:.2f}" y="{top:.2f}" width="16" height="{size:.2f}" fill="url(#ramp)"/>')
    out.append(f'<text x="{legend_x + 22:.2f}" y="{top + 8:.2f}">1</text>')
    out.append(f'<text x="{legend_x + 22:.2f}" y="{top + size:.2f}">0</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_heatmap(path, m: SimilarityMatrix, manifest_ref: str | None = None, **kwargs) -> Path:
    """Write the SVG; ``manifest_ref`` goes into a comment after the XML declaration."""
    text = render_heatmap(m, **kwargs)
    if manifest_ref:
        decl, _, rest = text.partition("\n")
        text = f"{decl}\n<!-- manifest: {escape(manifest_ref).replace('--', '- -')} -->\n{rest}"
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
