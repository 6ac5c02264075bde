"""SVG rendering of planar Steiner trees."""
from __future__ import annotations

import math

import numpy as np

from .errors import InvariantError
from .geometry import as_gauge


def _outline(gauge, center, scale=1.0):
    if gauge.kind == "euclidean":
        t = np.linspace(0.0, 2 * math.pi, 73)
        return center + scale * np.column_stack([np.cos(t), np.sin(t)])
    pts = gauge.body.vertices.points
    order = np.argsort(np.arctan2(pts[:, 1], pts[:, 0]))
    ring = pts[order]
    return center + scale * np.vstack([ring, ring[:1]])


def render_tree(tree, gauge, size=480, margin=30) -> str:
    """SVG with the unit ball, the tree edges, terminals and Steiner points."""
    gauge = as_gauge(gauge)
    P = tree.positions
    if P.shape[1] != 2:
        raise InvariantError("SVG output is only available for d=2", "dimension")
    ball = _outline(gauge, np.zeros(2))
    allpts = np.vstack([P, ball])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    k = (size - 2 * margin) / span

    def xy(p):
        return margin + k * (p[0] - lo[0]), size - margin - k * (p[1] - lo[1])

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    path = " ".join("%.3f,%.3f" % xy(p) for p in ball)
    out.append(f'<polyline points="{path}" fill="none" stroke="#999" '
               'stroke-dasharray="4 3"/>')
    for (u, v), L in zip(tree.topology.edges, tree.edge_lengths):
        if L <= 1e-12:
            continue
        (x1, y1), (x2, y2) = xy(P[u]), xy(P[v])
        out.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                   'stroke="black" stroke-width="2"/>')
    n = tree.topology.n_terminals
    for i, p in enumerate(P):
        x, y = xy(p)
        if i < n:
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="black"/>')
        else:
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3.5" fill="white" '
                       'stroke="#c00" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
