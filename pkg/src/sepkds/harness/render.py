"""Standalone SVG drawings of hierarchies, mixed tilings, inflated envelopes and paths."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence

from ..geometry import ConvexPolygon
from ..hierarchy import BoomerangHierarchy
from ..hysteresis import InflatedHierarchy, KappaDecomposition
from ..mixed import MixedHierarchy

SIZE = 640
PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
           "#9c755f", "#bab0ac")


class _Canvas:
    def __init__(self, points: Sequence, size: int = SIZE, pad: float = 0.06):
        xs = [float(p[0]) for p in points] or [0.0]
        ys = [float(p[1]) for p in points] or [0.0]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-12)
        self.pad = pad * size
        self.k = (size - 2 * self.pad) / span
        self.size = size
        self.items: list[str] = []
        self.stroke = span * self.k / 400

    def xy(self, p):
        return (self.pad + (float(p[0]) - self.x0) * self.k, self.pad + (self.y1 - float(p[1])) * self.k)

    def _pts(self, pts):
        return " ".join("%.3f,%.3f" % self.xy(p) for p in pts)

    def polygon(self, pts, fill="none", stroke="#222", width=1.0, cls="", opacity=1.0):
        self.items.append(f'<polygon class="{cls}" points="{self._pts(pts)}" fill="{fill}" '
                          f'fill-opacity="{opacity:g}" stroke="{stroke}" stroke-width="{width:g}"/>')

    def polyline(self, pts, stroke="#222", width=1.0, cls=""):
        self.items.append(f'<polyline class="{cls}" points="{self._pts(pts)}" fill="none" '
                          f'stroke="{stroke}" stroke-width="{width:g}"/>')

    def line(self, a, b, stroke="#222", width=1.0, cls=""):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(f'<line class="{cls}" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                          f'stroke="{stroke}" stroke-width="{width:g}"/>')

    def circle(self, c, r, stroke="#555", fill="none", cls=""):
        x, y = self.xy(c)
        self.items.append(f'<circle class="{cls}" cx="{x:.3f}" cy="{y:.3f}" r="{r * self.k:.3f}" '
                          f'fill="{fill}" stroke="{stroke}" stroke-width="0.7"/>')

    def legend(self, entries):
        for i, (color, text) in enumerate(entries):
            y = 14 + 14 * i
            self.items.append(f'<rect x="6" y="{y - 9}" width="10" height="10" fill="{color}"/>'
                              f'<text x="20" y="{y}" font-size="11" font-family="sans-serif">{text}</text>')

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">')
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + self.items + ["</svg>", ""])


def _color(level: int) -> str:
    return PALETTE[level % len(PALETTE)]


def _ticks(cv: _Canvas, P: ConvexPolygon, length: float):
    """Zero-length edges drawn as short ticks along their outward normals."""
    for a, b, n, _ in P.augmented_edges():
        if a != b:
            continue
        ln = math.hypot(float(n[0]), float(n[1]))
        tip = (float(a[0]) + length * float(n[0]) / ln, float(a[1]) + length * float(n[1]) / ln)
        cv.line(a, tip, stroke="#c00", width=1.2, cls="degenerate")


def hierarchy_svg(H: BoomerangHierarchy) -> str:
    cv = _Canvas(H.rectangle.vertices)
    cv.polygon(H.rectangle.vertices, stroke="#888", cls="rectangle")
    levels = sorted({t.level for t in H.nodes})
    for t in sorted(H.nodes, key=lambda t: (t.level, t.id)):
        cv.polygon(t.vertices, fill=_color(t.level), stroke="#333", width=0.6,
                   cls=f"triangle level-{t.level}", opacity=0.55)
    cv.polygon(H.polygon.vertices, fill="#ddd", stroke="#000", width=1.2, cls="polygon")
    coords = [float(c) for v in H.rectangle.vertices for c in v]
    span = max(coords) - min(coords)
    _ticks(cv, _augmented(H), span / 40)
    cv.legend([(_color(l), f"level {l}") for l in levels])
    return cv.svg()


def _augmented(H: BoomerangHierarchy) -> ConvexPolygon:
    return H.envelope(H.depth).polygon() if H.nodes else H.polygon


def mixed_svg(M: MixedHierarchy) -> str:
    cv = _Canvas(M.outer.vertices)
    cv.polygon(M.outer.vertices, stroke="#888", cls="outer")
    fills = {"triangle": "#4e79a7", "parallelogram": "#f28e2b"}
    for c in M.alive():
        cv.polygon(c.vertices, fill=fills[c.kind], stroke="#333", width=0.5, cls=c.kind, opacity=0.5)
    cv.polygon(M.inner.vertices, fill="#ddd", stroke="#000", width=1.2, cls="sum")
    counts = M.counts()
    cv.legend([(fills[k], f"{k} ({counts.get(k, 0)})") for k in ("triangle", "parallelogram")])
    return cv.svg()


def inflated_svg(IH: InflatedHierarchy) -> str:
    H = IH.base
    cv = _Canvas([v for P in IH.envelopes for v in P.vertices])
    for i in range(IH.depth + 1):
        cv.polygon(IH.inflated(i).vertices, stroke=_color(i), width=1.0, cls=f"inflated level-{i}")
        cv.polygon(H.envelope(i).polygon().vertices, stroke=_color(i), width=0.5, cls=f"envelope level-{i}")
    cv.polygon(H.polygon.vertices, fill="#ddd", stroke="#000", width=1.2, cls="polygon")
    cv.legend([(_color(i), f"level {i}, eps {IH.eps[i]:.3g}") for i in range(IH.depth + 1)])
    return cv.svg()


def path_svg(path: Sequence, Q: ConvexPolygon, decomposition: Optional[KappaDecomposition] = None) -> str:
    pts = [(float(x), float(y)) for x, y in path] + list(Q.vertices)
    if decomposition is not None:
        for p in decomposition.pieces:
            pts += [(p.center[0] - p.radius, p.center[1] - p.radius), (p.center[0] + p.radius, p.center[1] + p.radius)]
    cv = _Canvas(pts)
    cv.polygon(Q.vertices, fill="#ddd", stroke="#000", width=1.2, cls="polygon")
    if decomposition is not None:
        for p in decomposition.pieces:
            cv.circle(p.center, p.radius, cls="disk")
    cv.polyline(path, stroke="#e15759", width=1.2, cls="path")
    return cv.svg()


def render_svg(obj, out, *, path: Optional[Sequence] = None, polygon: Optional[ConvexPolygon] = None) -> Path:
    """Write a drawing of a hierarchy, mixed tiling, inflated hierarchy or decomposed path."""
    if isinstance(obj, BoomerangHierarchy):
        text = hierarchy_svg(obj)
    elif isinstance(obj, MixedHierarchy):
        text = mixed_svg(obj)
    elif isinstance(obj, InflatedHierarchy):
        text = inflated_svg(obj)
    elif isinstance(obj, KappaDecomposition) or obj is None:
        if path is None or polygon is None:
            raise ValueError("path drawings need the path and the polygon")
        text = path_svg(path, polygon, obj)
    else:
        raise TypeError(f"cannot render {type(obj).__name__}")
    out = Path(out)
    out.write_text(text)
    return out
