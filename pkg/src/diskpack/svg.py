"""SVG rendering of instances and solutions.

One <g> per point: the disk (or 2m-gon, matching the metric) when its
radius is positive, plus a small centre marker and an optional label.
Coordinates are emitted in problem units with a flipped y-axis so the
picture matches the usual math orientation.
"""

import numpy as np

from .geometry import Instance, Metric, polygon_vertices

_PALETTE = {"red": "#c62828", "green": "#2e7d32", "blue": "#1565c0", None: "#37474f"}


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def render_svg(
    instance: Instance,
    radii=None,
    labels: bool = False,
    colors=None,
    stroke_scale: float = 1.0,
) -> str:
    """Render a planar instance (dimension 1 points are lifted to y = 0)."""
    pts = np.asarray(instance.points, dtype=float)
    if pts.shape[1] == 1:
        pts = np.stack([pts[:, 0], np.zeros(len(pts))], axis=1)
    if pts.shape[1] != 2:
        raise ValueError("SVG rendering is limited to 1-D and 2-D instances")
    radii = np.zeros(len(pts)) if radii is None else np.asarray(radii, dtype=float)
    reach = np.maximum(radii, 0.0)
    lo = (pts - reach[:, None]).min(axis=0)
    hi = (pts + reach[:, None]).max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * float(span.max()) + 0.5
    lo -= margin
    hi += margin
    width, height = hi - lo
    stroke = stroke_scale * max(width, height) / 400.0
    marker = 1.5 * stroke

    def sx(x):
        return _fmt(x - lo[0])

    def sy(y):
        return _fmt(hi[1] - y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        f'width="720" height="{_fmt(720 * height / width)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]

    polygon_metric = instance.metric.kind == "even_polygon"
    for i, (p, r) in enumerate(zip(pts, radii)):
        color = _PALETTE[colors[i] if colors is not None else None]
        out.append(f'<g id="p{i}">')
        if r > 0:
            if polygon_metric:
                verts = polygon_vertices(instance.metric, p, r)
                path = " ".join(f"{sx(v[0])},{sy(v[1])}" for v in verts)
                out.append(
                    f'<polygon points="{path}" fill="{color}" fill-opacity="0.25" '
                    f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>'
                )
            else:
                out.append(
                    f'<circle cx="{sx(p[0])}" cy="{sy(p[1])}" r="{_fmt(r)}" fill="{color}" '
                    f'fill-opacity="0.25" stroke="{color}" stroke-width="{_fmt(stroke)}"/>'
                )
        out.append(
            f'<circle cx="{sx(p[0])}" cy="{sy(p[1])}" r="{_fmt(marker)}" fill="{color}"/>'
        )
        if labels:
            out.append(
                f'<text x="{sx(p[0] + 2 * marker)}" y="{sy(p[1] + 2 * marker)}" '
                f'font-size="{_fmt(8 * stroke)}" fill="#263238">{i}</text>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
