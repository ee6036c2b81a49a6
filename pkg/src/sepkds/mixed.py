"""Mixed hierarchy: a tiling of (P0 + Q0) minus (P + Q) by translated triangles and parallelograms.

The two per-polygon hierarchies are replayed level by level (all cuts of
P at level i, then all cuts of Q at level i).  A cut of P at apex v with
bounding lines a, b and new line e meets the chain of Q-envelope lines
whose normals fall between a and b.  The chain is split by the slope of
e: the part before e is pushed in along a, the rest along b, and the
triangle of P lands at the Q vertex where the two parts meet.

Every cell remembers the body-frame points it was summed from, so that a
moving pair can rebuild its geometry at any rotation.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .geometry import (
    ConvexPolygon,
    GeometryError,
    add,
    angle_key,
    cross,
    dot,
    line_intersection,
    minkowski_sum,
    orient,
    point_in_convex,
    polygon_area,
    sub,
)
from .hierarchy import BoomerangHierarchy
from .kinetics.poly import next_root, sign_at_root

IDENTITY = (Fraction(1), Fraction(0))


class IncompatibleHierarchies(GeometryError):
    pass


class NotOnBoundary(GeometryError):
    pass


class NotAdjacent(GeometryError):
    pass


class NotDegenerate(NotAdjacent):
    pass


def rotate(p, rot):
    c, s = rot
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


@dataclass(frozen=True)
class Line:
    """A supporting line of some envelope, in body coordinates."""

    id: int
    point: tuple
    normal: tuple
    inserted: int


@dataclass
class MixedCell:
    id: int
    kind: str  # "triangle" | "parallelogram"
    origin: str  # "P" | "Q": polygon whose cut created the cell
    node: int  # triangle node id in the origin hierarchy
    level: int
    p_pts: tuple  # body points of P, one per vertex
    q_pts: tuple  # body points of Q, one per vertex
    vertices: tuple  # p + q at the build rotation, counterclockwise
    own_line: Optional[int] = None  # parallelogram: origin's bounding line (a or b)
    other_line: Optional[int] = None  # parallelogram: chain line of the other polygon
    other_vertex: tuple = ()  # triangle: the two other-polygon lines meeting at its translate
    side: Optional[str] = None  # parallelogram: "lo" (pushed along a) or "hi" (along b)
    # triangle: (apex, A, B, w); parallelogram: (apex, X, w_from, w_to), origin points first
    roles: tuple = ()
    cut_lines: tuple = ()  # (a, e, b) line ids of the creating cut, in the origin's line list
    neighbors: list = field(default_factory=list)  # per edge: list of cell ids
    alive: bool = True

    def area(self) -> Fraction:
        return polygon_area(self.vertices)

    def contains(self, c, strict=False) -> bool:
        return point_in_convex(self.vertices, c, strict)

    def edges(self):
        v = self.vertices
        return [(v[k], v[(k + 1) % len(v)]) for k in range(len(v))]


@dataclass(frozen=True)
class MixedLocation:
    kind: str  # "cell" | "outside" | "inside"
    cell: Optional[MixedCell] = None
    steps: int = 0


@dataclass
class _Cut:
    """One corner cut replayed in the mixed construction."""

    origin: str
    node: int
    level: int
    a: Line
    e: Line
    b: Line
    apex: tuple
    A: tuple
    B: tuple
    degenerate: bool


class _View:
    """A hierarchy's lines and cuts, with normals rotated for slope comparisons."""

    def __init__(self, H: BoomerangHierarchy, rot):
        self.H = H
        self.rot = rot
        self.lines: list[Line] = []
        by_dir = {}
        self.line_of_edge = []
        for e in H.edges:
            key = angle_key(e.normal)
            if key not in by_dir:
                by_dir[key] = len(self.lines)
                self.lines.append(Line(len(self.lines), e.start, e.normal, H.inserted[e.index]))
            else:
                ln = self.lines[by_dir[key]]
                if H.inserted[e.index] < ln.inserted:
                    self.lines[ln.id] = Line(ln.id, ln.point, ln.normal, H.inserted[e.index])
            self.line_of_edge.append(by_dir[key])
        self.keys = [angle_key(rotate(ln.normal, rot)) for ln in self.lines]
        n = len(H.edges)
        self.cuts = []
        for t in H.nodes:
            bm = H.boomerangs[t.boomerang]
            la = self.lines[self.line_of_edge[bm.left % n]]
            lb = self.lines[self.line_of_edge[bm.right % n]]
            le = self.lines[self.line_of_edge[t.cut[0] % n]]
            self.cuts.append(_Cut("", t.id, t.level, la, le, lb, t.apex, t.A, t.B, t.degenerate))

    def present(self, below: int):
        """Lines inserted before level ``below``, sorted by rotated key."""
        ids = sorted((ln.id for ln in self.lines if ln.inserted < below), key=lambda i: self.keys[i])
        return ids, [self.keys[i] for i in ids]


@dataclass
class MixedHierarchy:
    P: BoomerangHierarchy
    Q: BoomerangHierarchy
    rot_p: tuple
    rot_q: tuple
    cells: list[MixedCell]
    order: list  # cut sequence as (origin, node id)
    outer: ConvexPolygon
    inner: ConvexPolygon
    lines_p: list[Line]
    lines_q: list[Line]
    _grid: Optional[tuple] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return sum(1 for c in self.cells if c.alive)

    def alive(self):
        return [c for c in self.cells if c.alive]

    def counts(self) -> dict:
        out = {"triangle": 0, "parallelogram": 0}
        for c in self.alive():
            out[c.kind] += 1
        return out

    def tiling_area(self) -> Fraction:
        return sum((c.area() for c in self.alive()), Fraction(0))

    def gap_area(self) -> Fraction:
        return polygon_area(self.outer.vertices) - polygon_area(self.inner.vertices)

    def sum_point(self, p, q):
        return add(rotate(p, self.rot_p), rotate(q, self.rot_q))

    def to_json(self) -> dict:
        def fp(p):
            return [float(p[0]), float(p[1])]

        return {
            "outer": [fp(v) for v in self.outer.vertices],
            "inner": [fp(v) for v in self.inner.vertices],
            "cells": [
                {"id": c.id, "kind": c.kind, "origin": c.origin, "node": c.node, "level": c.level,
                 "vertices": [fp(v) for v in c.vertices], "neighbors": c.neighbors}
                for c in self.alive()
            ],
        }


def _rotated_polygon(P: ConvexPolygon, rot) -> ConvexPolygon:
    if rot == IDENTITY:
        return P
    ext = tuple(tuple(rotate(d, rot) for d in ds) for ds in P.support_directions) \
        if P.support_directions else ()
    return ConvexPolygon(tuple(rotate(v, rot) for v in P.vertices), ext)


def build_mixed(HP: BoomerangHierarchy, HQ: BoomerangHierarchy, rot_p=IDENTITY, rot_q=IDENTITY,
                link: bool = True) -> MixedHierarchy:
    """Replay both hierarchies' cuts interleaved by level.

    ``rot_p`` and ``rot_q`` are exact rational rotations (cos, sin) applied
    to the two bodies; the hierarchies themselves stay in body coordinates.
    """
    if HP.kind != HQ.kind:
        raise IncompatibleHierarchies(f"cannot mix {HP.kind} with {HQ.kind}")
    rot_p = tuple(Fraction(x) for x in rot_p)
    rot_q = tuple(Fraction(x) for x in rot_q)
    for r in (rot_p, rot_q):
        if r[0] * r[0] + r[1] * r[1] != 1:
            raise GeometryError("rotation must be a rational unit vector")
    vp, vq = _View(HP, rot_p), _View(HQ, rot_q)
    outer = minkowski_sum(_rotated_polygon(HP.rectangle, rot_p), _rotated_polygon(HQ.rectangle, rot_q))
    inner = minkowski_sum(_rotated_polygon(HP.polygon, rot_p), _rotated_polygon(HQ.polygon, rot_q))
    M = MixedHierarchy(HP, HQ, rot_p, rot_q, [], [], outer, inner, vp.lines, vq.lines)
    depth = max(HP.depth, HQ.depth)
    by_level_p = {}
    for c in vp.cuts:
        by_level_p.setdefault(c.level, []).append(c)
    by_level_q = {}
    for c in vq.cuts:
        by_level_q.setdefault(c.level, []).append(c)
    for lvl in range(depth):
        q_ids, q_keys = vq.present(lvl)
        for cut in by_level_p.get(lvl, ()):
            _replay(M, "P", cut, vp, vq, q_ids, q_keys)
        p_ids, p_keys = vp.present(lvl + 1)
        for cut in by_level_q.get(lvl, ()):
            _replay(M, "Q", cut, vq, vp, p_ids, p_keys)
    if link:
        link_cells(M)
    return M


def _chain(own: _View, other: _View, cut: _Cut, ids, keys, origin: str):
    """Other-polygon lines between a and b in merged slope order, and the split count."""
    ka = own.keys[cut.a.id]
    kb = (own.keys[cut.b.id] - ka) % 4
    ke = (own.keys[cut.e.id] - ka) % 4
    m = len(ids)
    # P wins ties: for a P cut a Q line parallel to a is inside the chain, for a Q cut it is not
    start = bisect.bisect_left(keys, ka) if origin == "P" else bisect.bisect_right(keys, ka)
    chain = []
    j = 0
    for step in range(m):
        idx = (start + step) % m
        rel = (keys[idx] - ka) % 4
        if origin == "Q" and rel == 0:
            break
        inside = rel < kb if origin == "P" else rel <= kb
        if not inside:
            break
        chain.append(ids[idx])
        before_e = rel < ke if origin == "P" else rel <= ke
        if before_e:
            j += 1
    prev = ids[(start - 1) % m]
    nxt = ids[(start + len(chain)) % m]
    return prev, chain, nxt, j


def _replay(M: MixedHierarchy, origin: str, cut: _Cut, own: _View, other: _View, ids, keys):
    M.order.append((origin, cut.node))
    prev, chain, nxt, j = _chain(own, other, cut, ids, keys, origin)
    seq = [prev] + chain + [nxt]
    L = other.lines
    w = [line_intersection(L[seq[k]].point, L[seq[k]].normal, L[seq[k + 1]].point, L[seq[k + 1]].normal)
         for k in range(len(seq) - 1)]

    def emit(kind, own_pts, other_pts, **kw):
        p_pts, q_pts = (own_pts, other_pts) if origin == "P" else (other_pts, own_pts)
        verts = [M.sum_point(p, q) for p, q in zip(p_pts, q_pts)]
        if polygon_area(verts) == 0:
            return
        if _signed_area2(verts) < 0:
            verts.reverse()
            p_pts = tuple(reversed(p_pts))
            q_pts = tuple(reversed(q_pts))
        M.cells.append(MixedCell(len(M.cells), kind, origin, cut.node, cut.level, tuple(p_pts),
                                 tuple(q_pts), tuple(verts), cut_lines=(cut.a.id, cut.e.id, cut.b.id), **kw))

    if not cut.degenerate:
        emit("triangle", (cut.apex, cut.A, cut.B), (w[j],) * 3, other_vertex=(seq[j], seq[j + 1]),
             roles=(cut.apex, cut.A, cut.B, w[j]))
    for k in range(1, len(chain) + 1):
        lo = k <= j
        X = cut.A if lo else cut.B
        emit("parallelogram", (cut.apex, X, X, cut.apex), (w[k - 1], w[k - 1], w[k], w[k]),
             own_line=(cut.a if lo else cut.b).id, other_line=seq[k], side="lo" if lo else "hi",
             roles=(cut.apex, X, w[k - 1], w[k]))


def _signed_area2(verts):
    s = Fraction(0)
    for k in range(len(verts)):
        s += cross(verts[k], verts[(k + 1) % len(verts)])
    return s


# ---------------------------------------------------------------------------
# adjacency


def _line_key(a, b):
    """Canonical undirected line through a, b and the edge's orientation along it."""
    d = sub(b, a)
    nx, ny = d[1], -d[0]
    f = nx if nx != 0 else ny
    sgn = 1 if f > 0 else -1
    f = abs(f)
    key = (nx / f * sgn, ny / f * sgn, dot((nx, ny), a) / f * sgn)
    return key, sgn


def link_cells(M: MixedHierarchy) -> None:
    """Fill per-edge neighbor lists: cells sharing a positive-length piece of an edge."""
    groups: dict = {}
    for c in M.alive():
        c.neighbors = [[] for _ in c.vertices]
        for k, (a, b) in enumerate(c.edges()):
            key, sgn = _line_key(a, b)
            tdir = (-key[1], key[0])
            ta, tb = dot(a, tdir), dot(b, tdir)
            groups.setdefault(key, []).append((min(ta, tb), max(ta, tb), sgn, c.id, k))
    for items in groups.values():
        if len(items) < 2:
            continue
        items.sort()
        active = []
        for lo, hi, sgn, cid, k in items:
            active = [x for x in active if x[1] > lo]
            for lo2, hi2, sgn2, cid2, k2 in active:
                if sgn2 != sgn and min(hi, hi2) > max(lo, lo2):
                    M.cells[cid].neighbors[k].append(cid2)
                    M.cells[cid2].neighbors[k2].append(cid)
            active.append((lo, hi, sgn, cid, k))


# ---------------------------------------------------------------------------
# queries


def _float_index(M: MixedHierarchy):
    if M._grid is None:
        cells = M.alive()
        V = np.zeros((len(cells), 4, 2))
        for r, c in enumerate(cells):
            vs = list(c.vertices) + [c.vertices[-1]] * (4 - len(c.vertices))
            V[r] = [[float(x), float(y)] for x, y in vs]
        M._grid = (cells, V)
    return M._grid


def _candidates(M: MixedHierarchy, c):
    cells, V = _float_index(M)
    if not cells:
        return []
    p = np.array([float(c[0]), float(c[1])])
    W = np.roll(V, -1, axis=1)
    e = W - V
    r = p - V
    cr = e[:, :, 0] * r[:, :, 1] - e[:, :, 1] * r[:, :, 0]
    scale = np.abs(V).max() + np.abs(p).max() + 1.0
    ok = np.all(cr >= -1e-9 * scale * scale, axis=1)
    return [cells[i] for i in np.nonzero(ok)[0]]


def locate_configuration(M: MixedHierarchy, c) -> MixedLocation:
    """Cell containing configuration point c; ties go to the deeper level, then the lower id."""
    if not point_in_convex(M.outer.vertices, c):
        return MixedLocation("outside", None, 1)
    if point_in_convex(M.inner.vertices, c):
        return MixedLocation("inside", None, 1)
    hits = [x for x in _candidates(M, c) if x.contains(c)]
    if not hits:
        # a gap here would break the tiling; the area identity tests rule it out
        raise GeometryError(f"configuration {c} not covered by any cell")
    best = min(hits, key=lambda x: (-x.level, x.id))
    return MixedLocation("cell", best, len(hits))


def nudge_amount(M: MixedHierarchy) -> Fraction:
    xs = [v[0] for v in M.outer.vertices] + [v[1] for v in M.outer.vertices]
    span = max(xs) - min(xs)
    return Fraction(span) / (1 << 40) if span else Fraction(1, 1 << 40)


def nudged(M: MixedHierarchy, cell: MixedCell, p):
    """p pushed off ``cell`` across the boundary edge containing it."""
    for a, b in cell.edges():
        if orient(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            d = sub(b, a)
            nrm = (d[1], -d[0])
            delta = nudge_amount(M) / max(abs(nrm[0]), abs(nrm[1]))
            return (p[0] + nrm[0] * delta, p[1] + nrm[1] * delta), (a, b)
    raise NotOnBoundary(f"{p} is not on the boundary of cell {cell.id}")


def neighbor_cell(M: MixedHierarchy, cell: MixedCell, p) -> MixedLocation:
    """Cell across the boundary of ``cell`` at p, using the adjacency links only."""
    q, (a, b) = nudged(M, cell, p)
    k = next(i for i, e in enumerate(cell.edges()) if e == (a, b))
    steps = 1
    hits = []
    for cid in cell.neighbors[k]:
        steps += 1
        other = M.cells[cid]
        if other.alive and other.contains(q):
            hits.append(other)
    if hits:
        return MixedLocation("cell", min(hits, key=lambda x: (-x.level, x.id)), steps)
    if not point_in_convex(M.outer.vertices, q):
        return MixedLocation("outside", None, steps)
    if point_in_convex(M.inner.vertices, q):
        return MixedLocation("inside", None, steps)
    # p sits on a vertex shared by cells not linked through this edge
    loc = locate_configuration(M, q)
    return MixedLocation(loc.kind, loc.cell, steps + loc.steps)


# ---------------------------------------------------------------------------
# rotation: slope events, page turns, collapses


def next_slope_event(frame_p, frame_q, dir_p, dir_q, t_now, t_end=None):
    """Earliest time >= t_now at which the rotated body directions point the same way.

    Returns t_now itself when they already do, a :class:`Root` for a later
    event, or None when it never happens before ``t_end`` (default: the end
    of P's horizon).
    """
    dp = frame_p.direction(*dir_p)
    dq = frame_q.direction(*dir_q)
    f = dp[0] * dq[1] - dp[1] * dq[0]
    g = dp[0] * dq[0] + dp[1] * dq[1]
    t_now = Fraction(t_now)
    if f(t_now) == 0 and g(t_now) > 0:
        return t_now
    t_end = frame_p.t1 if t_end is None else Fraction(t_end)
    t = t_now
    while True:
        r = next_root(f, t, t_end)
        if r is None:
            return None
        if sign_at_root(g, f, r) > 0:
            return r
        t = r.hi


def reposition(M: MixedHierarchy, rot_p=None, rot_q=None) -> None:
    """Recompute every cell's vertices at new rotations, keeping the combinatorics."""
    if rot_p is not None:
        M.rot_p = tuple(Fraction(x) for x in rot_p)
    if rot_q is not None:
        M.rot_q = tuple(Fraction(x) for x in rot_q)
    for c in M.cells:
        c.vertices = tuple(M.sum_point(p, q) for p, q in zip(c.p_pts, c.q_pts))
    M.outer = minkowski_sum(_rotated_polygon(M.P.rectangle, M.rot_p), _rotated_polygon(M.Q.rectangle, M.rot_q))
    M.inner = minkowski_sum(_rotated_polygon(M.P.polygon, M.rot_p), _rotated_polygon(M.Q.polygon, M.rot_q))
    M._grid = None


def apply_page_turn(M: MixedHierarchy, cell: MixedCell, partner: MixedCell):
    """Swap a triangle with the parallelogram beside it once its chain edge is parallel to the cut.

    Returns the replacement cells.  The union of the pair is preserved
    exactly.
    """
    tri, par = (cell, partner) if cell.kind == "triangle" else (partner, cell)
    if tri.kind != "triangle" or par.kind != "parallelogram" or (tri.origin, tri.node) != (par.origin, par.node):
        raise NotAdjacent("page turns swap a triangle with a parallelogram of the same cut")
    if not (tri.alive and par.alive):
        raise NotAdjacent("cell already replaced")
    apex, A, B, w = tri.roles
    _, X, w0, w1 = par.roles
    if w not in (w0, w1):
        raise NotAdjacent("parallelogram chain edge does not touch the triangle's translate")
    w_new = w1 if w == w0 else w0
    rot_own, rot_oth = (M.rot_p, M.rot_q) if tri.origin == "P" else (M.rot_q, M.rot_p)
    if cross(rotate(sub(B, A), rot_own), rotate(sub(w_new, w), rot_oth)) != 0:
        raise NotDegenerate("chain edge is not parallel to the triangle's inner edge")
    X_new = A if X == B else B
    before = tri.area() + par.area()
    tri.alive = par.alive = False
    new_cells = []
    specs = (
        ("triangle", (apex, A, B), (w_new,) * 3,
         {"roles": (apex, A, B, w_new)}),  # other_vertex is not tracked across turns
        ("parallelogram", (apex, X_new, X_new, apex), (w, w, w_new, w_new),
         {"own_line": par.own_line, "other_line": par.other_line,
          "side": "lo" if par.side == "hi" else "hi", "roles": (apex, X_new, w, w_new)}),
    )
    for kind, own_pts, oth_pts, kw in specs:
        p_pts, q_pts = (own_pts, oth_pts) if tri.origin == "P" else (oth_pts, own_pts)
        verts = [M.sum_point(p, q) for p, q in zip(p_pts, q_pts)]
        if _signed_area2(verts) < 0:
            verts.reverse()
            p_pts, q_pts = tuple(reversed(p_pts)), tuple(reversed(q_pts))
        c = MixedCell(len(M.cells), kind, tri.origin, tri.node, tri.level, tuple(p_pts), tuple(q_pts),
                      tuple(verts), cut_lines=tri.cut_lines, **kw)
        if c.area() == 0:
            continue
        M.cells.append(c)
        new_cells.append(c)
    after = sum((c.area() for c in new_cells), Fraction(0))
    if after != before:
        raise GeometryError(f"page turn changed area: {before} -> {after}")
    M._grid = None
    link_cells(M)
    return tuple(new_cells)


def apply_collapse(M: MixedHierarchy, cell: MixedCell) -> None:
    """Remove a parallelogram that has shrunk to a segment and relink its neighbours."""
    if cell.kind != "parallelogram":
        raise NotAdjacent("only parallelograms collapse")
    if cell.area() != 0:
        raise NotDegenerate(f"cell {cell.id} still has area {cell.area()}")
    cell.alive = False
    M._grid = None
    link_cells(M)


# ---------------------------------------------------------------------------
# full-rotation sweep


def _angle(v) -> float:
    return math.atan2(float(v[1]), float(v[0]))


def _envelope_lengths(view: _View, below: int) -> dict:
    """Positive-length envelope edges at the stage where lines inserted before ``below`` exist."""
    ids = sorted((ln.id for ln in view.lines if ln.inserted < below), key=lambda i: angle_key(view.lines[i].normal))
    out = {}
    L = view.lines
    m = len(ids)
    for k in range(m):
        p, c, n = L[ids[k - 1]], L[ids[k]], L[ids[(k + 1) % m]]
        s = line_intersection(p.point, p.normal, c.point, c.normal)
        t = line_intersection(c.point, c.normal, n.point, n.normal)
        out[c.id] = s != t
    return out


def rotation_sweep(HP: BoomerangHierarchy, HQ: BoomerangHierarchy, samples_per_gap: int = 1) -> dict:
    """Count page turns, collapses and expands over one full turn of Q relative to P.

    For every cut the slope events (an other-polygon line becoming parallel
    to a, e or b) are collected, the cut's chain is sampled between
    consecutive events, and the differences between samples are tallied.
    """
    vp, vq = _View(HP, IDENTITY), _View(HQ, IDENTITY)
    totals = {"page_turn": 0, "collapse": 0, "expand": 0, "slope_events": 0}
    per_level: dict = {}
    for origin, own, other, below_of in (("P", vp, vq, lambda l: l), ("Q", vq, vp, lambda l: l + 1)):
        length_cache = {}
        for cut in own.cuts:
            if cut.degenerate:
                continue
            below = below_of(cut.level)
            if below not in length_cache:
                length_cache[below] = _envelope_lengths(other, below)
            lens = length_cache[below]
            lines = [ln for ln in other.lines if ln.inserted < below and lens.get(ln.id)]
            if not lines:
                continue
            counts = _sweep_cut(origin, cut, lines)
            for k, v in counts.items():
                totals[k] += v
            lv = per_level.setdefault(cut.level, {"page_turn": 0, "collapse": 0, "expand": 0})
            for k in lv:
                lv[k] += counts[k]
    totals["per_level"] = per_level
    return totals


def _sweep_cut(origin: str, cut: _Cut, lines) -> dict:
    two_pi = 2 * math.pi
    aa, ae, ab = (_angle(cut.a.normal), _angle(cut.e.normal), _angle(cut.b.normal))
    ae = aa + (ae - aa) % two_pi
    ab = aa + (ab - aa) % two_pi
    beta = np.array([_angle(ln.normal) for ln in lines])
    # relative rotation theta turns Q; a Q cut sees P lines turning by -theta
    sgn = 1.0 if origin == "P" else -1.0
    events = []
    for x in (aa, ae, ab):
        events.extend(((x - beta) * sgn) % two_pi)
    events = np.unique(np.round(np.array(events), 12))
    ev = np.sort(events)
    mids = (ev + np.roll(ev, -1)) / 2
    mids[-1] = (ev[-1] + ev[0] + two_pi) / 2
    prev = None
    first = None
    counts = {"page_turn": 0, "collapse": 0, "expand": 0, "slope_events": len(ev)}
    for th in mids:
        rel = (beta + sgn * th - aa) % two_pi
        inside = rel < (ab - aa)
        lo = frozenset(np.nonzero(inside & (rel < ae - aa))[0].tolist())
        hi = frozenset(np.nonzero(inside & (rel >= ae - aa))[0].tolist())
        sig = (lo, hi)
        if prev is not None:
            _tally(prev, sig, counts)
        else:
            first = sig
        prev = sig
    _tally(prev, first, counts)
    return counts


def _tally(a, b, counts):
    lo0, hi0 = a
    lo1, hi1 = b
    in0, in1 = lo0 | hi0, lo1 | hi1
    counts["collapse"] += len(in0 - in1)
    counts["expand"] += len(in1 - in0)
    counts["page_turn"] += len(lo0 & hi1) + len(hi0 & lo1)


def page_turn_count_closed_form(HP: BoomerangHierarchy, HQ: BoomerangHierarchy) -> int:
    """Each positive-length chain line passes each cut's slope once per turn."""
    vp, vq = _View(HP, IDENTITY), _View(HQ, IDENTITY)
    total = 0
    for own, other, shift in ((vp, vq, 0), (vq, vp, 1)):
        cache = {}
        for cut in own.cuts:
            if cut.degenerate:
                continue
            below = cut.level + shift
            if below not in cache:
                cache[below] = sum(1 for v in _envelope_lengths(other, below).values() if v)
            total += cache[below]
    return total
