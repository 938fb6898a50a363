"""Minimal SVG line plots (linear x, log y) with vertical markers.

Just enough for the CLI's convergence figures: no external plotting
dependency, deterministic output except for an optional timestamp
comment.
"""

import math
import time

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f"]

WIDTH, HEIGHT = 760, 480
ML, MR, MT, MB = 80, 24, 44, 56  # margins


def _fmt(v):
    return f"{v:.2f}"


def _tick_values(lo, hi, target=6):
    """Nice linear tick positions covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


class LinePlot:
    """Collect series and markers, then render() to an SVG string."""

    def __init__(self, title="", xlabel="", ylabel="", logy=True):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.logy = logy
        self.series = []
        self.vlines = []

    def add_series(self, xs, ys, label="", color=None):
        pts = [(float(x), float(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y)
               and (not self.logy or y > 0.0)]
        if pts:
            self.series.append((pts, label, color))

    def add_vline(self, x, label="", color="#444444"):
        if math.isfinite(x):
            self.vlines.append((float(x), label, color))

    def _ranges(self):
        xs = [p[0] for pts, _, _ in self.series for p in pts]
        ys = [p[1] for pts, _, _ in self.series for p in pts]
        xs += [v for v, _, _ in self.vlines]
        if not xs:
            xs = [0.0, 1.0]
        if not ys:
            ys = [1e-1, 1.0]
        x_lo, x_hi = min(xs), max(xs)
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0
        if self.logy:
            y_lo = math.floor(math.log10(min(ys)))
            y_hi = math.ceil(math.log10(max(ys)))
            if y_hi <= y_lo:
                y_hi = y_lo + 1
        else:
            y_lo, y_hi = min(ys), max(ys)
            if y_hi <= y_lo:
                y_hi = y_lo + 1.0
        return x_lo, x_hi, y_lo, y_hi

    def render(self, timestamp=True):
        x_lo, x_hi, y_lo, y_hi = self._ranges()
        pw = WIDTH - ML - MR
        ph = HEIGHT - MT - MB

        def px(x):
            return ML + pw * (x - x_lo) / (x_hi - x_lo)

        def py(y):
            if self.logy:
                y = math.log10(y)
            return MT + ph * (1.0 - (y - y_lo) / (y_hi - y_lo))

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]
        if timestamp:
            stamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            out.append(f"<!-- generated {stamp} -->")
        out.append(
            f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" '
            f'fill="none" stroke="#333333"/>')
        if self.title:
            out.append(
                f'<text x="{WIDTH // 2}" y="{MT - 16}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="15">{self.title}</text>')

        # y axis: decade ticks when log, nice values otherwise
        if self.logy:
            decades = list(range(int(y_lo), int(y_hi) + 1))
            stride = max(1, (len(decades) + 9) // 10)
            for d in decades[::stride]:
                yy = py(10.0 ** d)
                out.append(f'<line x1="{ML}" y1="{_fmt(yy)}" x2="{WIDTH - MR}" '
                           f'y2="{_fmt(yy)}" stroke="#dddddd"/>')
                out.append(f'<text x="{ML - 6}" y="{_fmt(yy + 4)}" '
                           f'text-anchor="end" font-family="sans-serif" '
                           f'font-size="11">1e{d}</text>')
        else:
            for tv in _tick_values(y_lo, y_hi):
                yy = py(tv)
                out.append(f'<line x1="{ML}" y1="{_fmt(yy)}" x2="{WIDTH - MR}" '
                           f'y2="{_fmt(yy)}" stroke="#dddddd"/>')
                out.append(f'<text x="{ML - 6}" y="{_fmt(yy + 4)}" '
                           f'text-anchor="end" font-family="sans-serif" '
                           f'font-size="11">{tv:g}</text>')
        for tv in _tick_values(x_lo, x_hi):
            xx = px(tv)
            out.append(f'<line x1="{_fmt(xx)}" y1="{MT + ph}" x2="{_fmt(xx)}" '
                       f'y2="{MT + ph + 5}" stroke="#333333"/>')
            out.append(f'<text x="{_fmt(xx)}" y="{MT + ph + 20}" '
                       f'text-anchor="middle" font-family="sans-serif" '
                       f'font-size="11">{tv:g}</text>')
        if self.xlabel:
            out.append(f'<text x="{ML + pw // 2}" y="{HEIGHT - 12}" '
                       f'text-anchor="middle" font-family="sans-serif" '
                       f'font-size="12">{self.xlabel}</text>')
        if self.ylabel:
            out.append(f'<text x="18" y="{MT + ph // 2}" text-anchor="middle" '
                       f'font-family="sans-serif" font-size="12" transform='
                       f'"rotate(-90 18 {MT + ph // 2})">{self.ylabel}</text>')

        for x, label, color in self.vlines:
            xx = px(x)
            out.append(f'<line x1="{_fmt(xx)}" y1="{MT}" x2="{_fmt(xx)}" '
                       f'y2="{MT + ph}" stroke="{color}" '
                       f'stroke-dasharray="5,4"/>')
            if label:
                out.append(f'<text x="{_fmt(xx + 4)}" y="{MT + 14}" '
                           f'font-family="sans-serif" font-size="11" '
                           f'fill="{color}">{label}</text>')

        legend_y = MT + 16
        for i, (pts, label, color) in enumerate(self.series):
            col = color or PALETTE[i % len(PALETTE)]
            coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
            out.append(f'<polyline points="{coords}" fill="none" '
                       f'stroke="{col}" stroke-width="1.5"/>')
            if label:
                lx = WIDTH - MR - 150
                out.append(f'<line x1="{lx}" y1="{legend_y - 4}" '
                           f'x2="{lx + 22}" y2="{legend_y - 4}" '
                           f'stroke="{col}" stroke-width="2"/>')
                out.append(f'<text x="{lx + 28}" y="{legend_y}" '
                           f'font-family="sans-serif" font-size="11">'
                           f'{label}</text>')
                legend_y += 16
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def write(self, path, timestamp=True):
        with open(path, "w") as fh:
            fh.write(self.render(timestamp=timestamp))
