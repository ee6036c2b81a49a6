"""Boomerang hierarchies: binary forests of triangles tiling P0 minus P.

Two builders are provided.  The compass hierarchy adds zero-length edges in
a doubling set of fixed directions and cuts boomerangs along the direction
bisecting their angular range; the Dudley hierarchy adds zero-length edges
and degenerate vertices at nearest-point projections of samples on a large
circle and cuts every boomerang at its median edge.
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
    angle_key,
    bounding_rectangle,
    cross,
    diameter,
    dist2,
    dot,
    line_intersection,
    orient,
    point_in_convex,
    point_segment_dist2,
    polygon_area,
    rational_on_circle,
    same_direction,
    sub,
    symmetric_circle_point,
)

AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


class LevelOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class AugEdge:
    """One edge of the augmented polygon; zero-length when start == end."""

    index: int
    start: tuple
    end: tuple
    normal: tuple
    real: bool
    # True for pieces of a real edge split at a degenerate vertex
    split: bool = False

    @property
    def zero_length(self) -> bool:
        return self.start == self.end


@dataclass
class Boomerang:
    id: int
    apex: tuple
    left: int  # augmented edge index bounding the ccw-start side
    right: int  # bounding edge on the other side (may equal len(edges) for wrap)
    level: int
    height2: Fraction = Fraction(0)
    node: Optional[int] = None  # triangle cut from this boomerang
    parent: Optional[int] = None  # triangle whose removal created it
    compass: Optional[tuple] = None  # (ja, jb) interval of compass indices

    def chain(self):
        return range(self.left + 1, self.right)


@dataclass
class TriangleNode:
    """Triangle (apex, A, B): inner edge AB on the cut line, outer edges on the bounding lines."""

    id: int
    level: int
    boomerang: int
    apex: tuple
    A: tuple
    B: tuple
    cut: tuple  # (lo, hi) augmented edge indices removed together
    children: tuple = ()
    parent: Optional[int] = None

    @property
    def vertices(self):
        return (self.apex, self.A, self.B)

    @property
    def inner_edge(self):
        return (self.A, self.B)

    @property
    def outer_edges(self):
        return ((self.A, self.apex), (self.apex, self.B))

    def area(self) -> Fraction:
        return abs(Fraction(orient(self.apex, self.A, self.B))) / 2

    @property
    def degenerate(self) -> bool:
        return orient(self.apex, self.A, self.B) == 0


@dataclass(frozen=True)
class Location:
    kind: str  # "triangle" | "outside" | "inside"
    node: Optional[TriangleNode] = None
    steps: int = 0

    @property
    def level(self):
        return self.node.level if self.node is not None else None


@dataclass
class EnvelopeEdge:
    normal: tuple
    start: tuple
    end: tuple
    ids: tuple  # augmented edge indices on this line
    inserted: int  # level of the cut that introduced the line (-1 for P0)


class Envelope:
    """Envelope P_i as a cyclic list of edges on augmented-edge lines.

    Vertex k is the start of edge k.  Zero-length edges are kept so the
    envelope at full depth is the augmented polygon itself.
    """

    def __init__(self, level: int, edges: list[EnvelopeEdge]):
        self.level = level
        self.edges = edges
        self._keys = [angle_key(e.normal) for e in edges]
        self._by_id = {}
        for k, e in enumerate(edges):
            for i in e.ids:
                self._by_id[i] = k

    def __len__(self):
        return len(self.edges)

    @property
    def vertices(self):
        return [e.start for e in self.edges]

    def vertex(self, k):
        return self.edges[k % len(self.edges)].start

    def edge_of(self, aug_index: int) -> Optional[int]:
        """Position of the envelope edge lying on augmented edge ``aug_index``'s line."""
        return self._by_id.get(aug_index)

    def extreme_vertex(self, d) -> int:
        """Index of a vertex maximizing <v, d> (exact, by normal-angle search)."""
        key = angle_key(d)
        k = bisect.bisect_left(self._keys, key)
        return k % len(self.edges)

    def polygon(self) -> ConvexPolygon:
        pts = []
        extra = []
        for e in self.edges:
            if pts and pts[-1] == e.start:
                extra[-1].append(e.normal)
                continue
            pts.append(e.start)
            extra.append([])
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
            extra[0] = extra.pop() + extra[0]
        # edges that end where they start contribute a zero-length normal at that vertex
        return ConvexPolygon(tuple(pts), tuple(tuple(x) for x in extra) if any(extra) else ())


@dataclass
class BoomerangHierarchy:
    polygon: ConvexPolygon
    edges: list[AugEdge]
    rectangle: ConvexPolygon
    kind: str
    boomerangs: list[Boomerang] = field(default_factory=list)
    nodes: list[TriangleNode] = field(default_factory=list)
    roots: tuple = ()
    inserted: list[int] = field(default_factory=list)  # per augmented edge
    compass_k: int = 0
    _envelopes: dict = field(default_factory=dict, repr=False)

    @property
    def depth(self) -> int:
        return max((t.level for t in self.nodes), default=-1) + 1

    @property
    def n(self) -> int:
        return self.polygon.n

    def triangles_at(self, level):
        return [t for t in self.nodes if t.level == level]

    def boomerangs_at(self, level):
        return [b for b in self.boomerangs if b.level == level]

    # -- envelopes -------------------------------------------------------

    def envelope(self, i: int) -> Envelope:
        if i < 0:
            raise LevelOutOfRange(i)
        i = min(i, self.depth)
        env = self._envelopes.get(i)
        if env is None:
            env = self._make_envelope(i)
            self._envelopes[i] = env
        return env

    def _make_envelope(self, i: int) -> Envelope:
        present = [e for e in self.edges if self.inserted[e.index] < i]
        groups: list[list[AugEdge]] = []
        for e in present:
            if groups and same_direction(groups[-1][-1].normal, e.normal):
                groups[-1].append(e)
            else:
                groups.append([e])
        if len(groups) > 1 and same_direction(groups[0][0].normal, groups[-1][-1].normal):
            groups[0] = groups.pop() + groups[0]
        k = len(groups)
        out = []
        for j, g in enumerate(groups):
            prev, nxt = groups[j - 1], groups[(j + 1) % k]
            s = line_intersection(prev[-1].start, prev[-1].normal, g[0].start, g[0].normal)
            t = line_intersection(g[-1].start, g[-1].normal, nxt[0].start, nxt[0].normal)
            out.append(EnvelopeEdge(g[0].normal, s, t, tuple(x.index for x in g),
                                    min(self.inserted[x.index] for x in g)))
        return Envelope(i, out)

    def cut_edge_line(self, node: TriangleNode):
        e = self.edges[node.cut[0] % len(self.edges)]
        return e.start, e.normal

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        def fp(p):
            return [float(p[0]), float(p[1])]

        return {
            "kind": self.kind,
            "n": self.n,
            "depth": self.depth,
            "rectangle": [fp(v) for v in self.rectangle.vertices],
            "polygon": [fp(v) for v in self.polygon.vertices],
            "edges": [
                {"id": e.index, "start": fp(e.start), "end": fp(e.end),
                 "normal": fp(e.normal), "real": e.real, "inserted": self.inserted[e.index]}
                for e in self.edges
            ],
            "boomerangs": [
                {"id": b.id, "level": b.level, "apex": fp(b.apex),
                 "height": math.sqrt(b.height2), "node": b.node, "parent": b.parent}
                for b in self.boomerangs
            ],
            "nodes": [
                {"id": t.id, "level": t.level, "apex": fp(t.apex), "A": fp(t.A), "B": fp(t.B),
                 "cut": list(t.cut), "children": list(t.children), "parent": t.parent}
                for t in self.nodes
            ],
        }


# ---------------------------------------------------------------------------
# construction


def compass_count(n: int) -> int:
    """Smallest power of two >= max(4, n)."""
    return 1 << max(2, math.ceil(math.log2(max(4, n))))


def compass_directions(k: int) -> list[tuple]:
    """k rational directions near angles 2*pi*j/k; the diagonals are exactly (1, 1) etc."""
    return [symmetric_circle_point(k, 2 * j, Fraction(1), diagonal=Fraction(1)) for j in range(k)]


def _edges_from(P: ConvexPolygon, splits=None) -> list[AugEdge]:
    """Augmented edge list, cyclically rotated to start at the first east-facing edge."""
    raw = []
    splits = splits or {}
    verts = P.vertices
    n = len(verts)
    for i in range(n):
        v = verts[i]
        for d in P.extra_directions(i):
            raw.append((v, v, d, False, False))
        if n > 1:
            a, b = v, verts[(i + 1) % n]
            d = sub(b, a)
            nrm = (d[1], -d[0])
            pts = [a] + sorted(splits.get(i, ()), key=lambda p: dot(sub(p, a), d)) + [b]
            for s, t in zip(pts, pts[1:]):
                raw.append((s, t, nrm, True, len(pts) > 2))
    keys = [angle_key(r[2]) for r in raw]
    low = min(keys)
    m = len(raw)
    # first element of the (cyclic) run of minimal keys
    start = next(j for j in range(m) if keys[j] == low and keys[j - 1] != low) if m > 1 else 0
    order = raw[start:] + raw[:start]
    return [AugEdge(i, *r) for i, r in enumerate(order)]


def _axis_group(edges, d):
    idx = [e.index for e in edges if same_direction(e.normal, d)]
    if not idx:
        raise GeometryError(f"no edge with normal {d}")
    # contiguous run, possibly wrapping past index 0 for east
    n = len(edges)
    if 0 in idx and (n - 1) in idx:
        lo = min(i for i in idx if (i - 1) % n not in idx)
        hi = max(i for i in idx if (i + 1) % n not in idx)
        return lo - n, hi
    return min(idx), max(idx)


def _chain_height2(edges, bm: Boomerang) -> Fraction:
    n = len(edges)
    chain = list(bm.chain())
    if not chain:
        p = edges[bm.left % n].end
        return Fraction(dist2(bm.apex, p))
    best = None
    for j in chain:
        e = edges[j % n]
        d = point_segment_dist2(bm.apex, e.start, e.end)
        if best is None or d < best:
            best = d
    return Fraction(best)


def _build(P: ConvexPolygon, edges: list[AugEdge], kind: str, compass_k: int = 0,
           compass_index: Optional[dict] = None) -> BoomerangHierarchy:
    n = len(edges)
    rect = bounding_rectangle(P)
    H = BoomerangHierarchy(P, edges, rect, kind, compass_k=compass_k)
    H.inserted = [None] * n
    groups = [_axis_group(edges, d) for d in AXES]
    for lo, hi in groups:
        for j in range(lo, hi + 1):
            H.inserted[j % n] = -1
    corners = [(rect.vertices[2]), rect.vertices[3], rect.vertices[0], rect.vertices[1]]
    queue = []
    roots = []
    for q in range(4):
        a = groups[q][1]
        b = groups[(q + 1) % 4][0]
        if q == 3:
            b += n
        cmp = (q * compass_k // 4, (q + 1) * compass_k // 4) if compass_k else None
        bm = Boomerang(len(H.boomerangs), corners[q], a, b, 0, compass=cmp)
        H.boomerangs.append(bm)
        roots.append(bm.id)
        queue.append(bm.id)
    H.roots = tuple(roots)
    head = 0
    while head < len(queue):
        bm = H.boomerangs[queue[head]]
        head += 1
        bm.height2 = _chain_height2(edges, bm)
        chain = list(bm.chain())
        if not chain:
            continue
        child_cmp = (None, None)
        if bm.compass and bm.compass[1] - bm.compass[0] >= 2:
            mid = (bm.compass[0] + bm.compass[1]) // 2
            m = compass_index[mid % compass_k]
            # indices in the chain are unwrapped; match modulo n
            m = next(j for j in chain if j % n == m)
            child_cmp = ((bm.compass[0], mid), (mid, bm.compass[1]))
        else:
            m = chain[(len(chain) - 1) // 2]
        lo = hi = m
        e = edges[m % n]
        while lo - 1 > bm.left and same_direction(edges[(lo - 1) % n].normal, e.normal):
            lo -= 1
        while hi + 1 < bm.right and same_direction(edges[(hi + 1) % n].normal, e.normal):
            hi += 1
        ea, eb = edges[bm.left % n], edges[bm.right % n]
        A = line_intersection(ea.start, ea.normal, e.start, e.normal)
        B = line_intersection(e.start, e.normal, eb.start, eb.normal)
        node = TriangleNode(len(H.nodes), bm.level, bm.id, bm.apex, A, B, (lo, hi), parent=bm.parent)
        H.nodes.append(node)
        bm.node = node.id
        for j in range(lo, hi + 1):
            H.inserted[j % n] = bm.level
        left = Boomerang(len(H.boomerangs), A, bm.left, lo, bm.level + 1, parent=node.id,
                         compass=child_cmp[0])
        H.boomerangs.append(left)
        right = Boomerang(len(H.boomerangs), B, hi, bm.right, bm.level + 1, parent=node.id,
                          compass=child_cmp[1])
        H.boomerangs.append(right)
        node.children = (left.id, right.id)
        queue.extend((left.id, right.id))
    if any(x is None for x in H.inserted):
        raise GeometryError("augmented edge never inserted")
    return H


def build_compass(P: ConvexPolygon) -> BoomerangHierarchy:
    """Compass hierarchy: zero-length edges in k = 2^ceil(log2 max(4, n)) fixed directions."""
    k = compass_count(P.n)
    dirs = compass_directions(k)
    aug = P.with_support(dirs)
    edges = _edges_from(aug)
    by_key = {angle_key(e.normal): e.index for e in edges}
    index = {j: by_key[angle_key(d)] for j, d in enumerate(dirs)}
    return _build(P, edges, "compass", compass_k=k, compass_index=index)


def ceil_sqrt(x: Fraction) -> Fraction:
    """A rational r with r*r >= x, within a relative 2^-20 of sqrt(x)."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    r = Fraction(math.sqrt(x)).limit_denominator(1 << 20)
    step = max(r, Fraction(1)) / (1 << 20)
    while r * r < x:
        r += step
    return r


def _near_edges(P: ConvexPolygon, x):
    """Edges whose float distance to x is within rounding slack of the minimum."""
    V = np.array([[float(c) for c in v] for v in P.vertices])
    W = np.roll(V, -1, axis=0)
    X = np.array([float(x[0]), float(x[1])])
    ab = W - V
    den = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", X - V, ab) / den, 0.0, 1.0)
    d = X - (V + ab * t[:, None])
    d2 = np.einsum("ij,ij->i", d, d)
    scale = float(np.max(np.abs(V)) + np.max(np.abs(X))) ** 2
    return np.nonzero(d2 <= d2.min() + 1e-9 * scale)[0].tolist()


def nearest_feature(P: ConvexPolygon, x):
    """Exact nearest boundary point of P to x, with its feature.

    Returns (dist2, point, ("vertex", i) | ("edge", i)); ties go to the
    lexicographically smallest feature tuple.
    """
    best = None
    n = P.n
    edges = P.edges()
    for i in _near_edges(P, x):
        a, b = edges[i]
        ab = sub(b, a)
        den = dot(ab, ab)
        t = Fraction(dot(sub(x, a), ab)) / den
        if t <= 0:
            cand = (Fraction(dist2(x, a)), ("vertex", i), a)
        elif t >= 1:
            cand = (Fraction(dist2(x, b)), ("vertex", (i + 1) % n), b)
        else:
            y = (a[0] + ab[0] * t, a[1] + ab[1] * t)
            cand = (Fraction(dist2(x, y)), ("edge", i), y)
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand
    return best[0], best[2], best[1]


def dudley_samples(P: ConvexPolygon):
    """n rational points on a circle of radius 2*D (D rounded up) around the box center."""
    rect = bounding_rectangle(P)
    c = ((rect.vertices[0][0] + rect.vertices[2][0]) / 2, (rect.vertices[0][1] + rect.vertices[2][1]) / 2)
    R = 2 * ceil_sqrt(diameter(P))
    out = []
    for j in range(P.n):
        x, y = rational_on_circle(2 * math.pi * j / P.n, R)
        out.append((c[0] + x, c[1] + y))
    return out


def build_dudley(P: ConvexPolygon) -> BoomerangHierarchy:
    """Dudley hierarchy seeded by nearest points of circle samples."""
    if P.n < 3:
        raise GeometryError("Dudley hierarchy needs n >= 3")
    base = P.with_support(AXES)
    extra = [list(base.extra_directions(i)) for i in range(P.n)]
    splits: dict[int, list] = {}
    normals_at = []
    for i in range(P.n):
        a_prev = P.vertices[i - 1]
        v = P.vertices[i]
        b = P.vertices[(i + 1) % P.n]
        d1 = sub(v, a_prev)
        d2 = sub(b, v)
        normals_at.append(((d1[1], -d1[0]), (d2[1], -d2[0])))
    for x in dudley_samples(P):
        _, y, feat = nearest_feature(P, x)
        if feat[0] == "vertex":
            i = feat[1]
            d = sub(x, y)
            n_in, n_out = normals_at[i]
            # only strictly inside the vertex's normal cone; boundary means an edge normal
            if not (cross(n_in, d) > 0 and cross(d, n_out) > 0):
                continue
            if any(same_direction(d, q) for q in extra[i]):
                continue
            extra[i].append(d)
        else:
            i = feat[1]
            if y not in splits.setdefault(i, []):
                splits[i].append(y)
    for i, ds in enumerate(extra):
        P.sort_at_vertex(i, ds)
    aug = ConvexPolygon(P.vertices, tuple(tuple(ds) for ds in extra))
    edges = _edges_from(aug, splits)
    return _build(P, edges, "dudley")


# ---------------------------------------------------------------------------
# queries


def envelope_of(H: BoomerangHierarchy, i: int) -> ConvexPolygon:
    """P_i: P0 with all triangles of level < i removed."""
    if i < 0:
        raise LevelOutOfRange(f"level {i} < 0")
    return H.envelope(i).polygon()


def _in_triangle(p, a, b, c) -> bool:
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


def locate_point(H: BoomerangHierarchy, p) -> Location:
    """Tile of the hierarchy containing p, by descent from the root boomerangs."""
    if not _in_degenerate_rect(H.rectangle, p):
        return Location("outside", None, 1)
    if H.polygon.contains(p):
        return Location("inside", None, 1)
    edges = H.edges
    n = len(edges)
    steps = 1
    bm = None
    for r in H.roots:
        b = H.boomerangs[r]
        if _in_triangle(p, b.apex, edges[b.left % n].end, edges[b.right % n].start):
            bm = b
            break
    while bm is not None and bm.node is not None:
        steps += 1
        t = H.nodes[bm.node]
        s, nrm = H.cut_edge_line(t)
        if dot(sub(p, s), nrm) > 0 and not t.degenerate:
            return Location("triangle", t, steps)
        left = H.boomerangs[t.children[0]]
        lo = edges[left.left % n].end
        hi = edges[left.right % n].start
        if _in_triangle(p, left.apex, lo, hi):
            bm = left
        else:
            bm = H.boomerangs[t.children[1]]
    # boundary corner cases: fall back to the exhaustive scan
    return locate_point_bruteforce(H, p)


def _in_degenerate_rect(rect, p):
    xs = [v[0] for v in rect.vertices]
    ys = [v[1] for v in rect.vertices]
    return min(xs) <= p[0] <= max(xs) and min(ys) <= p[1] <= max(ys)


def locate_point_bruteforce(H: BoomerangHierarchy, p) -> Location:
    """Scan every tile; deepest level wins, then the lower node id."""
    if not _in_degenerate_rect(H.rectangle, p):
        return Location("outside", None, len(H.nodes))
    if H.polygon.contains(p):
        return Location("inside", None, len(H.nodes))
    hits = [t for t in H.nodes if not t.degenerate and _in_triangle(p, *t.vertices)]
    if not hits:
        return Location("inside", None, len(H.nodes))
    best = min(hits, key=lambda t: (-t.level, t.id))
    return Location("triangle", best, len(H.nodes))


def level_height_profile(H: BoomerangHierarchy) -> list[float]:
    """Max boomerang height at each level (levels with any boomerang)."""
    by = {}
    for b in H.boomerangs:
        by[b.level] = max(by.get(b.level, Fraction(0)), b.height2)
    return [math.sqrt(by[i]) for i in sorted(by)]


def tall_boomerang_count(H: BoomerangHierarchy, s) -> tuple[list[int], int]:
    """Boomerangs of height >= s per level, and their total."""
    if s <= 0:
        raise ValueError("s must be positive")
    s2 = Fraction(s) ** 2
    levels = max((b.level for b in H.boomerangs), default=-1) + 1
    counts = [0] * levels
    for b in H.boomerangs:
        if b.height2 >= s2:
            counts[b.level] += 1
    return counts, sum(counts)


def tiling_area(H: BoomerangHierarchy) -> Fraction:
    return sum((t.area() for t in H.nodes), Fraction(0))


def gap_area(H: BoomerangHierarchy) -> Fraction:
    """Area of P0 minus P, exactly."""
    return polygon_area(H.rectangle.vertices) - polygon_area(H.polygon.vertices)
