"""Exact convex polygon primitives.

Coordinates are :class:`fractions.Fraction` throughout; predicates never round.
The only floating-point outputs are offset polygons (unit normals are
irrational) and the reporting helpers that take square roots.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple  # (x, y) pair of Fractions (or floats for offset polygons)

# Safety margin for float offsets, relative to sqrt(D).
OFFSET_MARGIN = 2.0 ** -40


class GeometryError(ValueError):
    pass


class NonConvex(GeometryError):
    pass


class Empty(GeometryError):
    pass


def to_fraction(value) -> Fraction:
    """Parse a scalar literal exactly.

    Accepts ints, Fractions, ``[num, den]`` pairs and decimal strings
    (``"1.25"`` becomes 5/4).  Floats are converted exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, bool):
        raise GeometryError(f"not a scalar: {value!r}")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise GeometryError(f"non-finite scalar: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"bad scalar literal {value!r}") from exc
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise GeometryError(f"bad rational literal {value!r}")
        return Fraction(num, den)
    raise GeometryError(f"not a scalar: {value!r}")


def to_point(value) -> tuple[Fraction, Fraction]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise GeometryError(f"bad point literal {value!r}")
    return (to_fraction(value[0]), to_fraction(value[1]))


# ---------------------------------------------------------------------------
# vector helpers


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def scale(a, k):
    return (a[0] * k, a[1] * k)


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def orient(a, b, c):
    """Twice the signed area of triangle abc (positive if counterclockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def norm2(a):
    return a[0] * a[0] + a[1] * a[1]


def dist2(a, b):
    return norm2(sub(a, b))


def angle_key(v) -> Fraction:
    """Exact pseudo-angle of a nonzero vector, monotone in atan2 on [0, 2pi)."""
    x, y = v
    if x > 0 and y >= 0:
        return Fraction(y) / (x + y)
    if x <= 0 and y > 0:
        return 1 + Fraction(-x) / (y - x)
    if x < 0 and y <= 0:
        return 2 + Fraction(-y) / (-x - y)
    if x >= 0 and y < 0:
        return 3 + Fraction(x) / (x - y)
    raise GeometryError("zero vector has no direction")


def same_direction(a, b) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def ccw_between(lo, v, hi) -> bool:
    """True if direction v lies strictly inside the ccw angular range (lo, hi).

    The range is assumed to be less than a half turn.
    """
    return cross(lo, v) > 0 and cross(v, hi) > 0


def line_intersection(p1, n1, p2, n2):
    """Intersect lines {x: n1.x = n1.p1} and {x: n2.x = n2.p2}."""
    det = n1[0] * n2[1] - n1[1] * n2[0]
    if det == 0:
        raise GeometryError("parallel lines")
    c1 = dot(n1, p1)
    c2 = dot(n2, p2)
    return ((c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det)


def point_segment_dist2(p, a, b):
    """Exact squared distance from p to the closed segment ab."""
    ab = sub(b, a)
    ap = sub(p, a)
    den = norm2(ab)
    if den == 0:
        return norm2(ap)
    t = dot(ap, ab)
    if t <= 0:
        return norm2(ap)
    if t >= den:
        return dist2(p, b)
    # |ap|^2 - (ap.ab)^2/|ab|^2, kept exact
    return Fraction(norm2(ap)) - Fraction(t * t) / den


def closest_point_on_segment(p, a, b):
    ab = sub(b, a)
    den = norm2(ab)
    if den == 0:
        return a, 0
    t = Fraction(dot(sub(p, a), ab)) / den
    if t <= 0:
        return a, 0
    if t >= 1:
        return b, 1
    return (a[0] + ab[0] * t, a[1] + ab[1] * t), t


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise convex polygon.

    ``support_directions`` optionally maps a vertex index to extra outward
    normal directions; each one stands for a zero-length edge at that vertex.
    """

    vertices: tuple
    support_directions: tuple = field(default=())

    def __post_init__(self):
        if not self.vertices:
            raise Empty("polygon has no vertices")
        if self.support_directions and len(self.support_directions) != len(self.vertices):
            raise GeometryError("support_directions must have one entry per vertex")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        """Real edges as (start, end) pairs, in ccw order."""
        v = self.vertices
        k = len(v)
        if k == 1:
            return []
        return [(v[i], v[(i + 1) % k]) for i in range(k)]

    def extra_directions(self, i) -> tuple:
        if not self.support_directions:
            return ()
        return self.support_directions[i]

    def augmented_edges(self):
        """All edges including zero-length ones, as (start, end, normal, real).

        Sorted by outward-normal angle starting from the smallest pseudo-angle.
        """
        out = []
        for i, (a, b) in enumerate(self.edges()):
            d = sub(b, a)
            out.append((a, b, (d[1], -d[0]), True))
        for i, v in enumerate(self.vertices):
            for d in self.extra_directions(i):
                out.append((v, v, d, False))
        out.sort(key=lambda e: angle_key(e[2]))
        return out

    def area2(self):
        """Twice the signed area."""
        v = self.vertices
        k = len(v)
        return sum(cross(v[i], v[(i + 1) % k]) for i in range(k)) if k > 2 else 0

    def area(self):
        return Fraction(self.area2()) / 2 if self.is_exact else self.area2() / 2

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for p in self.vertices for c in p)

    def support(self, u):
        """Support function h(P, u) = max over vertices of <v, u>."""
        return max(dot(v, u) for v in self.vertices)

    def contains(self, p, strict=False) -> bool:
        return point_in_convex(self.vertices, p, strict=strict)

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon(tuple(add(v, t) for v in self.vertices), self.support_directions)

    def negated(self) -> "ConvexPolygon":
        sd = ()
        if self.support_directions:
            sd = tuple(tuple((-d[0], -d[1]) for d in ds) for ds in self.support_directions)
        return ConvexPolygon(tuple((-x, -y) for x, y in self.vertices), sd)

    def transformed(self, m, t=(0, 0)) -> "ConvexPolygon":
        """Apply x -> m x + t for an orientation-preserving similarity m."""
        def ap(p):
            return (m[0][0] * p[0] + m[0][1] * p[1] + t[0], m[1][0] * p[0] + m[1][1] * p[1] + t[1])

        def lin(d):
            return (m[0][0] * d[0] + m[0][1] * d[1], m[1][0] * d[0] + m[1][1] * d[1])

        sd = ()
        if self.support_directions:
            sd = tuple(tuple(lin(d) for d in ds) for ds in self.support_directions)
        return ConvexPolygon(tuple(ap(p) for p in self.vertices), sd)

    def _normal_index(self):
        """Real edge normal keys rotated to ascending order, with their edge indices."""
        k = self.n
        if k == 1:
            return [], []
        keys = []
        for a, b in self.edges():
            keys.append(angle_key((b[1] - a[1], a[0] - b[0])))
        s = min(range(k), key=lambda i: keys[i])
        order = list(range(s, k)) + list(range(s))
        return [keys[i] for i in order], order

    def with_support(self, directions: Iterable) -> "ConvexPolygon":
        """Attach zero-length edges for directions not already edge normals."""
        extra = [list(ds) for ds in self.support_directions] if self.support_directions \
            else [[] for _ in self.vertices]
        keys, order = self._normal_index()
        taken = set(keys)
        taken.update(angle_key(d) for ds in extra for d in ds)
        for d in directions:
            kd = angle_key(d)
            if kd in taken:
                continue
            taken.add(kd)
            if not keys:
                i = 0
            else:
                # vertex i sits between edge i-1 and edge i
                j = bisect.bisect_left(keys, kd) % len(keys)
                i = order[j]
            extra[i].append(d)
        for i, ds in enumerate(extra):
            self.sort_at_vertex(i, ds)
        return ConvexPolygon(self.vertices, tuple(tuple(ds) for ds in extra))

    def sort_at_vertex(self, i, directions: list) -> None:
        """Order directions ccw starting from the normal of the edge entering vertex i."""
        base = Fraction(0)
        if self.n > 1:
            a, b = self.vertices[i - 1], self.vertices[i]
            base = angle_key((b[1] - a[1], a[0] - b[0]))
        directions.sort(key=lambda d: (angle_key(d) - base) % 4)


def point_in_convex(vertices: Sequence, p, strict=False) -> bool:
    k = len(vertices)
    if k == 1:
        return not strict and tuple(p) == tuple(vertices[0])
    if k == 2:
        a, b = vertices
        if strict or orient(a, b, p) != 0:
            return False
        return dot(sub(p, a), sub(p, b)) <= 0
    for i in range(k):
        o = orient(vertices[i], vertices[(i + 1) % k], p)
        if o < 0 or (strict and o == 0):
            return False
    return True


def _dedupe(points):
    out = []
    for p in points:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def validate_polygon(points: Iterable) -> ConvexPolygon:
    """Normalize a vertex list into a ccw convex polygon.

    Collinear middle vertices are dropped and clockwise input is reversed.
    Raises :class:`NonConvex` or :class:`Empty`.
    """
    pts = _dedupe([to_point(p) for p in points])
    if not pts:
        raise Empty("no vertices")
    if len(pts) == 1:
        return ConvexPolygon((pts[0],))
    k = len(pts)
    a2 = sum(cross(pts[i], pts[(i + 1) % k]) for i in range(k))
    if a2 < 0:
        pts.reverse()
    elif a2 == 0:
        return _degenerate_segment(pts)
    changed = True
    while changed and len(pts) > 2:
        changed = False
        k = len(pts)
        for i in range(k):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % k]
            if orient(a, b, c) == 0:
                if dot(sub(b, a), sub(c, b)) < 0:
                    raise NonConvex(f"polygon folds back at vertex {b}")
                del pts[i]
                changed = True
                break
    k = len(pts)
    if k < 3:
        return _degenerate_segment(pts)
    for i in range(k):
        if orient(pts[i - 1], pts[i], pts[(i + 1) % k]) < 0:
            raise NonConvex(f"reflex vertex at {pts[i]}")
    # a star-shaped winding has all left turns but wraps more than once
    keys = [angle_key(sub(pts[(i + 1) % k], pts[i])) for i in range(k)]
    descents = sum(1 for i in range(k) if keys[i] > keys[(i + 1) % k])
    if descents != 1:
        raise NonConvex("vertex order winds more than once")
    return ConvexPolygon(tuple(pts))


def _degenerate_segment(pts):
    for p in pts:
        if orient(pts[0], pts[-1], p) != 0 and orient(pts[0], pts[1], p) != 0:
            raise NonConvex("zero-area polygon is not a segment")
    lo = min(pts)
    hi = max(pts)
    if lo == hi:
        return ConvexPolygon((lo,))
    return ConvexPolygon((lo, hi))


def minkowski_sum(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """P (+) Q by merging augmented edges in normal-angle order.

    Zero-length edges of either input survive as zero-length edges of the sum.
    """
    ep = P.augmented_edges()
    eq = Q.augmented_edges()
    if not ep and not eq:
        return ConvexPolygon((add(P.vertices[0], Q.vertices[0]),))
    start = add(_lowest_start(P, ep), _lowest_start(Q, eq))
    merged = sorted(
        [(angle_key(e[2]), 0, i, e) for i, e in enumerate(ep)]
        + [(angle_key(e[2]), 1, i, e) for i, e in enumerate(eq)]
    )
    verts = [start]
    extra: dict[int, list] = {}
    cur = start
    for _, _, _, (a, b, nrm, real) in merged:
        d = sub(b, a)
        if d == (0, 0):
            extra.setdefault(len(verts) - 1, []).append(nrm)
            continue
        cur = add(cur, d)
        verts.append(cur)
    last = verts.pop()
    if last != start:
        raise GeometryError("edge vectors do not close")
    # merge collinear consecutive vertices (parallel edges from P and Q)
    pts, dirs = _merge_collinear(verts, extra)
    return ConvexPolygon(tuple(pts), tuple(tuple(d) for d in dirs) if any(dirs) else ())


def _lowest_start(P, edges):
    """Vertex where the edge with the smallest normal angle starts."""
    if not edges:
        return P.vertices[0]
    return edges[0][0]


def _merge_collinear(verts, extra):
    k = len(verts)
    if k < 3:
        dirs = [list(extra.get(i, [])) for i in range(k)]
        return verts, dirs
    keep = []
    for i in range(k):
        if orient(verts[i - 1], verts[i], verts[(i + 1) % k]) != 0:
            keep.append(i)
    pts = [verts[i] for i in keep]
    dirs = [[] for _ in keep]
    for i, ds in extra.items():
        # a zero-length edge sits at vertex i; attach to the same point
        for j, kk in enumerate(keep):
            if verts[kk] == verts[i]:
                dirs[j].extend(ds)
                break
    return pts, dirs


def support_value(P: ConvexPolygon, u):
    return P.support(u)


def polygons_intersect(P: ConvexPolygon, Q: ConvexPolygon) -> bool:
    """Closed-set intersection test via separating axes (exact)."""
    for A, B in ((P, Q), (Q, P)):
        for a, b, nrm, _ in A.augmented_edges():
            ha = dot(a, nrm)
            if min(dot(v, nrm) for v in B.vertices) > ha:
                return False
    if P.n <= 2 and Q.n <= 2:
        return _small_intersect(P, Q)
    return True


def _small_intersect(P, Q):
    # points and segments lack enough normals for the axis test
    if P.n == 1:
        return Q.contains(P.vertices[0])
    if Q.n == 1:
        return P.contains(Q.vertices[0])
    a, b = P.vertices
    c, d = Q.vertices
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return any(point_segment_dist2(p, s, t) == 0 for p, s, t in
               ((c, a, b), (d, a, b), (a, c, d), (b, c, d)))


def polygon_distance(P: ConvexPolygon, Q: ConvexPolygon):
    """Exact squared separation and a witness feature pair.

    Brute force over vertex-edge and vertex-vertex pairs.  Returns
    ``(0, None)`` when the polygons intersect or touch.
    """
    if polygons_intersect(P, Q):
        return Fraction(0), None
    best = None
    wit = None
    for A, B, flip in ((P, Q, False), (Q, P, True)):
        edges = A.edges()
        for j, v in enumerate(B.vertices):
            if edges:
                cands = ((point_segment_dist2(v, a, b), ("edge", i)) for i, (a, b) in enumerate(edges))
            else:
                cands = ((dist2(v, a), ("vertex", i)) for i, a in enumerate(A.vertices))
            for d, feat in cands:
                if best is None or d < best:
                    best = d
                    wit = (("vertex", j), feat) if flip else (feat, ("vertex", j))
    return Fraction(best), wit


def point_polygon_dist2(p, P: ConvexPolygon):
    if P.contains(p):
        return Fraction(0)
    if P.n == 1:
        return Fraction(dist2(p, P.vertices[0]))
    return Fraction(min(point_segment_dist2(p, a, b) for a, b in P.edges()))


def offset_polygon(P: ConvexPolygon, eps: float, margin: float | None = None) -> ConvexPolygon:
    """Outer offset: every augmented edge line pushed out by eps (float result).

    Zero-length edges become edges of positive length.  The lines are pushed
    by ``eps + margin`` where margin defaults to ``OFFSET_MARGIN * sqrt(D)``.
    """
    if eps <= 0:
        raise GeometryError("offset distance must be positive")
    if margin is None:
        margin = OFFSET_MARGIN * math.sqrt(float(diameter(P)))
    lines = []
    for a, b, nrm, _ in P.augmented_edges():
        nx, ny = float(nrm[0]), float(nrm[1])
        ln = math.hypot(nx, ny)
        ux, uy = nx / ln, ny / ln
        c = ux * float(a[0]) + uy * float(a[1]) + eps + margin
        if lines and abs(lines[-1][0] - ux) < 1e-15 and abs(lines[-1][1] - uy) < 1e-15:
            continue  # collinear pieces of one split edge
        lines.append((ux, uy, c))
    if len(lines) < 3:
        raise GeometryError("offset needs at least three edge directions")
    verts = []
    k = len(lines)
    for i in range(k):
        n1, n2 = lines[i - 1], lines[i]
        det = n1[0] * n2[1] - n1[1] * n2[0]
        x = (n1[2] * n2[1] - n2[2] * n1[1]) / det
        y = (n1[0] * n2[2] - n2[0] * n1[2]) / det
        verts.append((x, y))
    return ConvexPolygon(tuple(verts))


def bounding_rectangle(P: ConvexPolygon) -> ConvexPolygon:
    """Axis-aligned bounding rectangle; may be degenerate for points/segments."""
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    return ConvexPolygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))


def diameter(P: ConvexPolygon):
    """Squared diameter via rotating calipers over antipodal pairs."""
    v = P.vertices
    k = len(v)
    if k == 1:
        return Fraction(0)
    if k <= 3:
        return Fraction(max(dist2(v[i], v[j]) for i in range(k) for j in range(i + 1, k)))
    best = 0
    j = 1
    for i in range(k):
        a, b = v[i], v[(i + 1) % k]
        e = sub(b, a)
        while cross(e, sub(v[(j + 1) % k], v[j])) > 0:
            j = (j + 1) % k
        best = max(best, dist2(a, v[j]), dist2(b, v[j]))
    return Fraction(best)


def diameter_bruteforce(P: ConvexPolygon):
    v = P.vertices
    return Fraction(max((dist2(a, b) for a in v for b in v), default=0))


def centroid(P: ConvexPolygon):
    v = P.vertices
    k = len(v)
    if k < 3:
        return (sum(p[0] for p in v) / k, sum(p[1] for p in v) / k)
    a2 = P.area2()
    cx = sum((v[i][0] + v[(i + 1) % k][0]) * cross(v[i], v[(i + 1) % k]) for i in range(k))
    cy = sum((v[i][1] + v[(i + 1) % k][1]) * cross(v[i], v[(i + 1) % k]) for i in range(k))
    return (Fraction(cx) / (3 * a2), Fraction(cy) / (3 * a2))


def polygon_area(points) -> Fraction:
    k = len(points)
    if k < 3:
        return Fraction(0)
    return Fraction(sum(cross(points[i], points[(i + 1) % k]) for i in range(k))) / 2


# ---------------------------------------------------------------------------
# rational circle points and polygon generators

SNAP_DENOMINATOR = 1 << 20


def rational_on_circle(theta: float, radius=Fraction(1), limit=SNAP_DENOMINATOR):
    """A rational point exactly on the circle of the given radius, near angle theta."""
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-12:
        return (-Fraction(radius), Fraction(0))
    u = Fraction(math.tan(theta / 2)).limit_denominator(limit)
    w = 1 + u * u
    return (radius * (1 - u * u) / w, radius * 2 * u / w)


_ROT90 = [
    lambda x, y: (x, y),
    lambda x, y: (-y, x),
    lambda x, y: (-x, -y),
    lambda x, y: (y, -x),
]


def symmetric_circle_point(k: int, m: int, radius=Fraction(1), diagonal=None):
    """Rational point near angle pi*m/k, exactly equivariant under the square group.

    Points that would sit exactly on a diagonal use ``diagonal`` (a, a) when
    given; otherwise a rational just inside the circle.
    """
    units = 4 * m  # in units of pi/(4k); an octant is k units
    o, r = divmod(units, k)
    phi_units = r if o % 2 == 0 else k - r
    if phi_units == k:
        if diagonal is not None:
            c = s = diagonal
        else:
            # no rational point on the circle here; stay just inside it
            a = Fraction(math.floor(math.sqrt(0.5) * SNAP_DENOMINATOR), SNAP_DENOMINATOR)
            while 2 * a * a > 1:
                a -= Fraction(1, SNAP_DENOMINATOR)
            c = s = a * radius
    else:
        c, s = rational_on_circle(math.pi * phi_units / (4 * k), radius)
    if o % 2 == 1:
        c, s = s, c
    return _ROT90[(o // 2) % 4](c, s)


def regular_polygon(k: int, radius=Fraction(1), half_step: bool = False,
                    center=(Fraction(0), Fraction(0))) -> ConvexPolygon:
    """Rational near-regular k-gon, exactly symmetric under the square's symmetries.

    Vertex j sits near angle pi*(2j + h)/k with h = 1 if ``half_step``.  With
    ``k = 8`` and ``half_step`` the edges are exactly axis-parallel and diagonal.
    """
    if k < 3:
        raise GeometryError("need k >= 3")
    radius = Fraction(radius)
    h = 1 if half_step else 0
    pts = []
    for j in range(k):
        x, y = symmetric_circle_point(k, 2 * j + h, radius)
        pts.append((x + center[0], y + center[1]))
    return validate_polygon(pts)


def random_convex(n: int, seed: int, D=Fraction(2), center=(Fraction(0), Fraction(0))) -> ConvexPolygon:
    """n random rational points on a circle of diameter D, in convex position."""
    rng = random.Random(seed)
    r = Fraction(D) / 2
    seen = {}
    while len(seen) < n:
        p = rational_on_circle(rng.uniform(-math.pi, math.pi), r)
        seen[p] = None
    pts = sorted(seen, key=lambda p: angle_key(p) if p != (0, 0) else 0)
    return validate_polygon([(x + center[0], y + center[1]) for x, y in pts])


def parabolic_cap(n: int, width=Fraction(2), depth=None) -> ConvexPolygon:
    """Convex polygon whose upper chain samples y = -x^2/(2R) on [-w/2, w/2].

    R = w/2, so the cap is a parabolic approximation of a disk of diameter w;
    the bottom is closed by a single horizontal edge.
    """
    w = Fraction(width)
    R = w / 2
    xs = [-w / 2 + w * Fraction(i, n - 2) for i in range(n - 1)]
    top = [(x, -x * x / (2 * R)) for x in xs]
    floor_y = -(w / 2) * (w / 2) / (2 * R) - (depth if depth is not None else w / 4)
    pts = [(xs[0], floor_y), (xs[-1], floor_y)] + top[::-1]
    return validate_polygon(pts)


@dataclass
class SeparationStats:
    """Diameter bound, smallest separation seen, and mu = min(n, sqrt(D/sigma)).

    D2 and sigma2 are squared exact values.
    """

    D2: Fraction
    n: int
    sigma2: Fraction | None = None

    def observe(self, sep2) -> None:
        sep2 = Fraction(sep2)
        if self.sigma2 is None or sep2 < self.sigma2:
            self.sigma2 = sep2

    @property
    def D(self) -> float:
        return math.sqrt(self.D2)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2) if self.sigma2 is not None else math.inf

    @property
    def mu(self) -> float:
        if self.sigma2 is None:
            return float(self.n)
        if self.sigma2 == 0:
            return float(self.n)
        return min(float(self.n), math.sqrt(self.D / self.sigma))

    def as_dict(self) -> dict:
        return {"D": self.D, "sigma": self.sigma, "mu": self.mu, "n": self.n}
