"""Minimal deterministic scatter-plot SVG writer."""

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 480, 400
MARGIN = {"left": 60, "right": 20, "top": 40, "bottom": 50}


def _fmt(v):
    # fixed precision keeps the bytes stable across platforms
    return f"{v:.2f}".rstrip("0").rstrip(".") if v != int(v) else str(int(v))


def _range(vals):
    if not vals:
        return 0.0, 1.0
    lo, hi = min(vals), max(vals)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def nice_ticks(lo, hi, target=5):
    """Round tick positions covering ``[lo, hi]``."""
    span = hi - lo
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(round(k * step, 12))
        k += 1
    return ticks


def scatter_svg(xs, ys, x_label, y_label, radius=2.5):
    """Standalone SVG document with one circle per ``(x, y)`` point.

    Axis ranges fit the data with 5% padding on each side; an empty input
    gives axes only.
    """
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    x0, x1 = _range(xs)
    y0, y1 = _range(ys)
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN["top"] + (y1 - y) / (y1 - y0) * ph

    left, right = MARGIN["left"], MARGIN["left"] + pw
    top, bottom = MARGIN["top"], MARGIN["top"] + ph
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="{MARGIN["top"] / 2 + 5:.2f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(y_label)} vs {escape(x_label)}</text>',
        f'<g stroke="black" stroke-width="1"><line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/></g>',
    ]
    tick = ['<g font-family="sans-serif" font-size="10">']
    for t in nice_ticks(x0, x1):
        x = px(t)
        tick.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" stroke="black"/>')
        tick.append(f'<text x="{x:.2f}" y="{bottom + 17}" text-anchor="middle">{_fmt(t)}</text>')
    for t in nice_ticks(y0, y1):
        y = py(t)
        tick.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        tick.append(f'<text x="{left - 8}" y="{y + 3:.2f}" text-anchor="end">{_fmt(t)}</text>')
    tick.append("</g>")
    out.extend(tick)
    out.append(
        f'<text x="{(left + right) / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="15" y="{(top + bottom) / 2:.2f}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 15 {(top + bottom) / 2:.2f})">{escape(y_label)}</text>'
    )
    out.append('<g fill="steelblue" fill-opacity="0.6">')
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{px(x):.3f}" cy="{py(y):.3f}" r="{radius}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
