"""Static SVG scatter plot with entropy heat coloring and the fitted parabola."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .fitting import QuadraticFit

# viridis samples, low to high
_STOPS = ("#440154", "#3b528b", "#21918c", "#5ec962", "#fde725")

WIDTH, HEIGHT = 640, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 110, 30, 60


def _hex_to_rgb(h: str) -> tuple[int, int, int]:
    return tuple(int(h[i : i + 2], 16) for i in (1, 3, 5))


def heat_color(value: float, vmax: float) -> str:
    """Linear map of ``value`` in ``[0, vmax]`` onto the color scale."""
    t = 0.0 if vmax <= 0 else min(max(value / vmax, 0.0), 1.0)
    pos = t * (len(_STOPS) - 1)
    k = min(int(pos), len(_STOPS) - 2)
    frac = pos - k
    lo, hi = _hex_to_rgb(_STOPS[k]), _hex_to_rgb(_STOPS[k + 1])
    rgb = (round(a + (b - a) * frac) for a, b in zip(lo, hi))
    return "#" + "".join(f"{c:02x}" for c in rgb)


def max_channel_entropy(m: int) -> float:
    return math.log2(math.factorial(m))


def scatter_svg(x, y, entropy, vmax: float, fit: QuadraticFit | None = None, title: str = "") -> str:
    """Render discord (y) against distortion (x); one circle per channel."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x_hi = max(1e-9, float(x.max())) * 1.05
    y_hi = max(1e-9, float(y.max())) * 1.05
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v):
        return MARGIN_L + pw * v / x_hi

    def sy(v):
        return MARGIN_T + ph * (1.0 - v / y_hi)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" y2="{MARGIN_T + ph}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + ph}" stroke="black"/>',
    ]
    for k in range(6):
        vx, vy = x_hi * k / 5, y_hi * k / 5
        out.append(f'<text x="{sx(vx):.2f}" y="{MARGIN_T + ph + 18}" font-size="11" text-anchor="middle">{vx:.2f}</text>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{sy(vy) + 4:.2f}" font-size="11" text-anchor="end">{vy:.2f}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 15}" font-size="13" text-anchor="middle">average distortion</text>')
    out.append(
        f'<text x="18" y="{MARGIN_T + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph / 2})">average discord (bits)</text>'
    )
    if title:
        out.append(f'<text x="{MARGIN_L + pw / 2}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>')

    for xi, yi, hi in zip(x, y, entropy):
        out.append(f'<circle cx="{sx(xi):.2f}" cy="{sy(yi):.2f}" r="2.5" fill="{heat_color(hi, vmax)}"/>')

    if fit is not None:
        xs = np.linspace(0.0, float(x.max()), 101)
        ys = fit.predict(xs)
        d = " ".join(f"{'M' if i == 0 else 'L'}{sx(a):.2f},{sy(b):.2f}" for i, (a, b) in enumerate(zip(xs, ys)))
        out.append(f'<path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>')

    # color bar
    bx, bw = WIDTH - MARGIN_R + 25, 16
    n = 50
    for k in range(n):
        v = vmax * (n - 1 - k) / (n - 1)
        out.append(
            f'<rect x="{bx}" y="{MARGIN_T + ph * k / n:.2f}" width="{bw}" height="{ph / n + 0.5:.2f}" '
            f'fill="{heat_color(v, vmax)}"/>'
        )
    out.append(f'<text x="{bx + bw + 4}" y="{MARGIN_T + 10}" font-size="11">{vmax:.3f}</text>')
    out.append(f'<text x="{bx + bw + 4}" y="{MARGIN_T + ph}" font-size="11">0</text>')
    out.append(f'<text x="{bx}" y="{MARGIN_T + ph + 18}" font-size="11">H(w) bits</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
