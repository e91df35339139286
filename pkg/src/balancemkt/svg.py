"""Minimal deterministic SVG charts (grouped bars and boxplots).

Numbers are written with a fixed number of decimals and nothing depends on
the clock or the environment, so identical input gives identical bytes.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .stats import BoxplotStats

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
W, H = 720, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 60


def _f(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if not np.isfinite(lo) or not np.isfinite(hi):
        return np.array([0.0])
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    return np.arange(np.ceil(lo / step) * step, hi + 0.5 * step, step)


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str, y_range: tuple[float, float]):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" '
            f'font-family="sans-serif" font-size="11">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>',
            f'<text x="16" y="{H / 2}" text-anchor="middle" transform="rotate(-90 16 {H / 2})">{escape(ylabel)}</text>',
        ]
        lo, hi = y_range
        if hi <= lo:
            hi = lo + 1.0
        ticks = _nice_ticks(lo, hi)
        self.y0, self.y1 = min(lo, float(ticks[0])), max(hi, float(ticks[-1]))
        for v in ticks:
            y = self.y(v)
            self.parts.append(f'<line x1="{LEFT}" y1="{_f(y)}" x2="{W - RIGHT}" y2="{_f(y)}" stroke="#ddd"/>')
            self.parts.append(f'<text x="{LEFT - 6}" y="{_f(y + 4)}" text-anchor="end">{v:g}</text>')
        self.parts.append(f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{H - BOTTOM}" stroke="black"/>')
        self.parts.append(f'<line x1="{LEFT}" y1="{H - BOTTOM}" x2="{W - RIGHT}" y2="{H - BOTTOM}" stroke="black"/>')

    def y(self, v: float) -> float:
        span = self.y1 - self.y0
        return (H - BOTTOM) - (v - self.y0) / span * (H - BOTTOM - TOP)

    def add(self, s: str):
        self.parts.append(s)

    def legend(self, labels):
        for k, lab in enumerate(labels):
            x = W - RIGHT - 120
            y = TOP + 6 + 16 * k
            self.add(f'<rect x="{x}" y="{y}" width="10" height="10" fill="{PALETTE[k % len(PALETTE)]}"/>')
            self.add(f'<text x="{x + 14}" y="{y + 9}">{escape(lab)}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def grouped_bars(categories, series: dict, title: str, xlabel: str, ylabel: str, max_labels: int = 12) -> str:
    """Bars for each category, one colour per series (``name -> values``)."""
    names = list(series)
    vals = np.array([np.asarray(series[n], dtype=float) for n in names]) if names else np.zeros((0, 0))
    finite = vals[np.isfinite(vals)] if vals.size else np.zeros(0)
    lo = min(0.0, float(finite.min())) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    c = _Canvas(title, xlabel, ylabel, (lo, hi))
    n_cat = max(1, len(categories))
    slot = (W - LEFT - RIGHT) / n_cat
    bar = 0.8 * slot / max(1, len(names))
    label_every = max(1, int(np.ceil(n_cat / max_labels)))
    for i, cat in enumerate(categories):
        x0 = LEFT + i * slot + 0.1 * slot
        for k in range(len(names)):
            v = vals[k, i]
            if not np.isfinite(v):
                continue
            top, base = c.y(max(v, 0.0)), c.y(min(v, 0.0))
            c.add(f'<rect x="{_f(x0 + k * bar)}" y="{_f(top)}" width="{_f(bar)}" height="{_f(base - top)}" '
                  f'fill="{PALETTE[k % len(PALETTE)]}"/>')
        if i % label_every == 0:
            c.add(f'<text x="{_f(LEFT + (i + 0.5) * slot)}" y="{H - BOTTOM + 14}" text-anchor="middle">'
                  f'{escape(str(cat))}</text>')
    c.legend(names)
    return c.render()


def boxplots(labels, stats: list, title: str, xlabel: str, ylabel: str) -> str:
    """Tukey boxplots side by side; ``stats`` holds a BoxplotStats (or
    None for an empty group) per label."""
    present = [s for s in stats if s is not None]
    lo = min((min([s.whisker_low, *s.outliers]) for s in present), default=0.0)
    hi = max((max([s.whisker_high, *s.outliers]) for s in present), default=1.0)
    c = _Canvas(title, xlabel, ylabel, (lo, hi))
    slot = (W - LEFT - RIGHT) / max(1, len(labels))
    for i, (lab, s) in enumerate(zip(labels, stats)):
        cx = LEFT + (i + 0.5) * slot
        half = 0.25 * slot
        c.add(f'<text x="{_f(cx)}" y="{H - BOTTOM + 14}" text-anchor="middle">{escape(str(lab))}</text>')
        if s is None:
            continue
        s: BoxplotStats
        c.add(f'<line x1="{_f(cx)}" y1="{_f(c.y(s.whisker_low))}" x2="{_f(cx)}" y2="{_f(c.y(s.q1))}" stroke="black"/>')
        c.add(f'<line x1="{_f(cx)}" y1="{_f(c.y(s.q3))}" x2="{_f(cx)}" y2="{_f(c.y(s.whisker_high))}" stroke="black"/>')
        for w in (s.whisker_low, s.whisker_high):
            c.add(f'<line x1="{_f(cx - half / 2)}" y1="{_f(c.y(w))}" x2="{_f(cx + half / 2)}" y2="{_f(c.y(w))}" '
                  f'stroke="black"/>')
        top = c.y(s.q3)
        c.add(f'<rect x="{_f(cx - half)}" y="{_f(top)}" width="{_f(2 * half)}" height="{_f(c.y(s.q1) - top)}" '
              f'fill="{PALETTE[0]}" fill-opacity="0.35" stroke="black"/>')
        c.add(f'<line x1="{_f(cx - half)}" y1="{_f(c.y(s.median))}" x2="{_f(cx + half)}" y2="{_f(c.y(s.median))}" '
              f'stroke="red" stroke-width="2"/>')
        for o in s.outliers:
            c.add(f'<circle cx="{_f(cx)}" cy="{_f(c.y(o))}" r="2" fill="none" stroke="black"/>')
    return c.render()
