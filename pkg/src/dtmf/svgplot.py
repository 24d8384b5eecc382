"""Static SVG scatter plots of two-dimensional coordinates."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

SIZE = 800
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def scatter_svg(
    ids: Sequence[str],
    xy,
    labels: Mapping[str, str] | None = None,
    title: str = "",
) -> str:
    """One labelled circle per point, with an axis cross through the origin.

    The scale is equal on both axes and always keeps the origin in view,
    so the average profile of a CA map sits on the cross.
    """
    xy = np.asarray(xy, dtype=np.float64)
    if xy.ndim != 2 or xy.shape[1] < 2 or xy.shape[0] != len(ids):
        raise ValueError("need one (x, y) pair per id")
    xy = xy[:, :2]
    lo = np.minimum(xy.min(axis=0), 0.0)
    hi = np.maximum(xy.max(axis=0), 0.0)
    span = float(max((hi - lo).max(), 1e-12))
    scale = (SIZE - 2 * MARGIN) / span
    centre = (lo + hi) / 2

    def to_px(p):
        x = SIZE / 2 + (p[0] - centre[0]) * scale
        y = SIZE / 2 - (p[1] - centre[1]) * scale
        return x, y

    categories = sorted(set(labels.get(i, "") for i in ids)) if labels else [""]
    colour = {c: PALETTE[n % len(PALETTE)] for n, c in enumerate(categories)}
    ox, oy = to_px((0.0, 0.0))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<line class="axis" x1="0" y1="{oy:.2f}" x2="{SIZE}" y2="{oy:.2f}" stroke="#999"/>',
        f'<line class="axis" x1="{ox:.2f}" y1="0" x2="{ox:.2f}" y2="{SIZE}" stroke="#999"/>',
    ]
    if title:
        out.append(f'<text x="{SIZE / 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')
    for doc, p in zip(ids, xy):
        x, y = to_px(p)
        fill = colour[labels.get(doc, "")] if labels else PALETTE[0]
        out.append(f'<circle class="point" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{fill}"/>')
        out.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="11">{escape(doc)}</text>')
    if labels:
        for n, c in enumerate(categories):
            y = 40 + 18 * n
            out.append(f'<circle cx="{SIZE - 140}" cy="{y}" r="5" fill="{colour[c]}"/>')
            out.append(f'<text x="{SIZE - 128}" y="{y + 4}" font-size="12">{escape(c)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
