"""Dependency-free SVG line chart: one polyline, labeled axes, fixed layout.

Output is deterministic text (fixed formatting, LF line endings) so chart
files can be compared byte for byte across runs.
"""

from __future__ import annotations

VIEW_WIDTH = 800
VIEW_HEIGHT = 500
_MARGIN_LEFT = 80
_MARGIN_RIGHT = 25
_MARGIN_TOP = 30
_MARGIN_BOTTOM = 55
_DIVISIONS = 5


def _span(values):
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = 0.5 if lo == 0.0 else 0.05 * abs(lo)
        lo, hi = lo - pad, hi + pad
    return lo, hi


def _fmt(x: float) -> str:
    return format(x, ".6g")


def line_chart(xs, ys, x_label: str, y_label: str, title: str = "") -> str:
    """Render one data series as an SVG document string."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two equal-length series of at least 2 points")
    x_lo, x_hi = _span(list(xs))
    y_lo, y_hi = _span(list(ys))
    plot_w = VIEW_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = VIEW_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x):
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW_WIDTH} {VIEW_HEIGHT}">',
        f'<rect x="0" y="0" width="{VIEW_WIDTH}" height="{VIEW_HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{VIEW_WIDTH / 2:.1f}" y="20" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="14">{title}</text>')

    x_axis_y = _MARGIN_TOP + plot_h
    out.append(f'<line x1="{_MARGIN_LEFT}" y1="{x_axis_y}" '
               f'x2="{_MARGIN_LEFT + plot_w}" y2="{x_axis_y}" stroke="black"/>')
    out.append(f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" '
               f'x2="{_MARGIN_LEFT}" y2="{x_axis_y}" stroke="black"/>')

    for k in range(_DIVISIONS + 1):
        frac = k / _DIVISIONS
        x_val = x_lo + frac * (x_hi - x_lo)
        x_px = px(x_val)
        out.append(f'<line x1="{x_px:.2f}" y1="{x_axis_y}" '
                   f'x2="{x_px:.2f}" y2="{x_axis_y + 5}" stroke="black"/>')
        out.append(f'<text x="{x_px:.2f}" y="{x_axis_y + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{_fmt(x_val)}</text>')
        y_val = y_lo + frac * (y_hi - y_lo)
        y_px = py(y_val)
        out.append(f'<line x1="{_MARGIN_LEFT - 5}" y1="{y_px:.2f}" '
                   f'x2="{_MARGIN_LEFT}" y2="{y_px:.2f}" stroke="black"/>')
        out.append(f'<text x="{_MARGIN_LEFT - 8}" y="{y_px + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{_fmt(y_val)}</text>')

    out.append(f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" y="{VIEW_HEIGHT - 12}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="13">'
               f'{x_label}</text>')
    out.append(f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" '
               f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.1f})">{y_label}</text>')

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    out.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="2" '
               f'points="{points}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
