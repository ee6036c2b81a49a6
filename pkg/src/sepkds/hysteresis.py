"""Inflated hierarchies, the hysteretic separating-edge KDS and κ-clear paths.

Each compass envelope Q_i is pushed outward by ε_i = ε₀/2^i, ε₀ being the
measured level-0 approximation error.  When a moving point crosses the
line of its separating edge, the coarsest level j whose inflated envelope
Q′_j excludes the point is found, and the edge of Q_j whose offset copy
the point lies furthest beyond becomes the new separating edge.  The point
is then at least ε_j clear of that line, which forces a displacement
proportional to the separation before the next event.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .geometry import (ConvexPolygon, GeometryError, diameter, dot, offset_polygon, point_polygon_dist2,
                       polygons_intersect, sub, to_point)
from .hierarchy import BoomerangHierarchy
from .kinetics.bodies import Body
from .kinetics.lazy import LazyKDS, PointInsidePolygon, SepState
from .kinetics.log import EventLog
from .kinetics.oracle import _inside, _seg_dist, float_coeffs, positions

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HysteresisParams:
    beta: float = 2 * (1 + SQRT2)
    kappa: float = 5 + 4 * SQRT2


PARAMS = HysteresisParams()
BETA = PARAMS.beta
KAPPA = PARAMS.kappa


class InsideInnermost(GeometryError):
    """The point lies inside every inflated envelope, so no hysteresis margin exists."""


class PathTouchesPolygon(GeometryError):
    pass


# -- inflated hierarchy --------------------------------------------------------


@dataclass
class InflatedHierarchy:
    base: BoomerangHierarchy
    eps: tuple  # ε_i per level 0..depth
    envelopes: tuple  # Q′_i as float polygons (the base envelopes when ε₀ = 0)
    errors: tuple  # measured Hausdorff distance d(Q_i, Q) per level

    @property
    def depth(self) -> int:
        return self.base.depth

    @property
    def eps0(self) -> float:
        return self.eps[0]

    @property
    def trivial(self) -> bool:
        """Zero level-0 error: inflation is the identity and hysteresis is void."""
        return self.eps0 == 0

    def inflated(self, i: int) -> ConvexPolygon:
        return self.envelopes[min(max(i, 0), self.depth)]

    def outside(self, i: int, p) -> bool:
        return not self.inflated(i).contains(p)

    def hausdorff(self, i: int) -> float:
        """d(Q′_i, Q): the largest distance from a vertex of Q′_i to Q."""
        return _max_dist(self.inflated(i).vertices, self.base.polygon)

    def to_json(self) -> dict:
        return {
            "eps": list(self.eps),
            "errors": list(self.errors),
            "envelopes": [[[float(x), float(y)] for x, y in P.vertices] for P in self.envelopes],
        }


def _exact(p):
    return (Fraction(p[0]), Fraction(p[1]))


def _max_dist(points, Q: ConvexPolygon) -> float:
    """Largest distance from points outside or on Q to Q's boundary, in floats."""
    p = np.asarray([[float(x), float(y)] for x, y in points])[None]
    A = np.asarray([[float(x), float(y)] for x, y in Q.vertices])[None]
    return float(_seg_dist(p, A)[0].min(axis=1).max())


def _level_error(H: BoomerangHierarchy, i: int) -> float:
    return _max_dist(H.envelope(i).vertices, H.polygon)


def build_inflated(H: BoomerangHierarchy) -> InflatedHierarchy:
    if H.kind != "compass":
        raise GeometryError("inflated hierarchies are built on compass hierarchies")
    depth = H.depth
    errors = tuple(_level_error(H, i) for i in range(depth + 1))
    eps0 = errors[0]
    if eps0 == 0:
        envs = tuple(H.envelope(i).polygon() for i in range(depth + 1))
        return InflatedHierarchy(H, tuple(0.0 for _ in envs), envs, errors)
    eps = tuple(eps0 / 2 ** i for i in range(depth + 1))
    envs = tuple(offset_polygon(H.envelope(i).polygon(), eps[i]) for i in range(depth + 1))
    for i, P in enumerate(envs):
        if not all(P.contains(v) for v in H.envelope(i).vertices):
            raise GeometryError(f"inflated envelope {i} does not contain Q_{i}")
        if i and not all(envs[i - 1].contains(v) for v in P.vertices):
            raise GeometryError(f"inflated envelope {i} is not nested in level {i - 1}")
    return InflatedHierarchy(H, eps, envs, errors)


def _margin(p, e) -> float:
    n = e.normal
    return float(dot(sub(p, e.start), n)) / math.hypot(float(n[0]), float(n[1]))


def relocate_separating_edge(IH: InflatedHierarchy, p) -> tuple[int, int, int]:
    """Level j with p outside Q′_j but inside Q′_{j−1}, and the edge of Q_j to certify with.

    Returns (j, envelope edge index, levels examined).  The edge is the one
    whose line p lies furthest beyond; since p is outside the parallel edge
    of Q′_j, that margin is at least ε_j.
    """
    p = to_point(p)
    for j in range(IH.depth + 1):
        if not IH.outside(j, p):
            continue
        env = IH.base.envelope(j)
        best, best_m = None, 0.0
        for k, e in enumerate(env.edges):
            if dot(sub(p, e.start), e.normal) <= 0:
                continue
            m = _margin(p, e)
            if best is None or m > best_m:
                best, best_m = k, m
        if best is None:
            break
        return j, best, j + 1
    raise InsideInnermost("point is inside the innermost inflated envelope")


# -- hysteresis KDS ------------------------------------------------------------


class HysteresisKDS(LazyKDS):
    """Lazy point-versus-polygon KDS whose relocation uses the inflated envelopes.

    Falls back to plain lazy relocation when the inflation is trivial, when
    the point sits inside the innermost inflated envelope, or when both
    bodies are polygons.
    """

    def __init__(self, a: Body, b: Body, inflated: Optional[InflatedHierarchy] = None, **kw):
        super().__init__(a, b, **kw)
        A, B = self.bodies
        self.IH = None
        self.fallback_relocations = 0
        if B.is_point:
            if A.H is None or A.H.kind != "compass":
                raise GeometryError("hysteresis needs the polygon body to carry a compass hierarchy")
            if inflated is None:
                inflated = build_inflated(A.H)
            if inflated.base is not A.H:
                raise GeometryError("inflated hierarchy was built for a different polygon")
            self.IH = None if inflated.trivial else inflated

    @property
    def active(self) -> bool:
        return self.IH is not None

    def _point_in_body(self, t):
        A, B = self.bodies
        return A.to_body(B.place(B.point, t), t)

    def _hysteretic(self, t) -> Optional[tuple[SepState, int]]:
        try:
            j, k, steps = relocate_separating_edge(self.IH, self._point_in_body(t))
        except InsideInnermost:
            return None
        st = SepState(j, 0, k, 0)
        return (st, steps) if self._valid(st, t) else None

    def initial(self, t) -> SepState:
        if self.active:
            if self.bodies[0].polygon.contains(self._point_in_body(t)):
                raise PointInsidePolygon("point is inside or on the polygon at the start")
            hit = self._hysteretic(t)
            if hit is not None:
                return hit[0]
        return super().initial(t)

    def relocate(self, st: SepState, t):
        kind = "stab" if self._projects_inside(st, t) else "push"
        if self.active:
            hit = self._hysteretic(t)
            if hit is not None:
                return hit[0], hit[1], kind
        self.fallback_relocations += 1
        return super().relocate(st, t)


# -- displacement between events -----------------------------------------------


@dataclass(frozen=True)
class DisplacementGap:
    start: Fraction
    end: Fraction
    displacement: float  # arc length of the relative point path between the events
    separation: float  # d(P, Q) at the earlier event
    ratio: float  # displacement / (separation / β)
    precondition: bool  # separation >= D / n


def relative_path(point: Body, polygon: Body, ts) -> np.ndarray:
    """The point's position in the polygon's body frame at float times: array (T, 2)."""
    ts = np.asarray(ts, dtype=float)
    p = positions(point, ts)[:, 0, :]
    f = polygon.frame
    u = npoly.polyval(ts, float_coeffs(f.u))
    w = 1 + u * u
    c, s = (1 - u * u) / w, 2 * u / w
    dx = p[:, 0] - npoly.polyval(ts, float_coeffs(f.ox))
    dy = p[:, 1] - npoly.polyval(ts, float_coeffs(f.oy))
    return np.stack((c * dx + s * dy, -s * dx + c * dy), axis=-1)


def min_inter_event_displacement(log: EventLog, point: Body, polygon: Body, *, beta: float = BETA,
                                 samples: int = 512) -> list[DisplacementGap]:
    """Arc length the point travels, relative to the polygon, between consecutive events."""
    evs = [e for e in log.events if e.kind != "collision"]
    Q = polygon.polygon
    D = math.sqrt(float(diameter(Q)))
    out = []
    for a, b in zip(evs, evs[1:]):
        ts = np.linspace(float(a.time), float(b.time), samples + 1)
        path = relative_path(point, polygon, ts)
        disp = float(np.hypot(*np.diff(path, axis=0).T).sum())
        pa = polygon.to_body(point.place(point.point, a.time), a.time)
        d = math.sqrt(float(point_polygon_dist2(pa, Q)))
        ratio = disp / (d / beta) if d > 0 else math.inf
        out.append(DisplacementGap(a.time, b.time, disp, d, ratio, d >= D / Q.n))
    return out


# -- κ-clear decompositions ----------------------------------------------------


def _circle2(a, b):
    c = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    return c, math.dist(a, c)


def _circle3(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0:
        pts = sorted((a, b, c))
        return _circle2(pts[0], pts[-1])
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return (ux, uy), math.dist((ux, uy), a)


def smallest_enclosing_disk(points: Sequence, seed: int = 0) -> tuple[tuple, float]:
    """Welzl's algorithm (iterative, randomized with a fixed seed)."""
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise GeometryError("no points")
    random.Random(seed).shuffle(pts)
    tol = 1e-12

    def inside(c, r, p):
        return math.dist(c, p) <= r * (1 + tol) + tol

    c, r = pts[0], 0.0
    for i in range(1, len(pts)):
        if inside(c, r, pts[i]):
            continue
        c, r = pts[i], 0.0
        for j in range(i):
            if inside(c, r, pts[j]):
                continue
            c, r = _circle2(pts[i], pts[j])
            for k in range(j):
                if not inside(c, r, pts[k]):
                    c, r = _circle3(pts[i], pts[j], pts[k])
    return c, r


@dataclass(frozen=True)
class ClearPiece:
    start: float  # polyline parameter: vertex index plus fraction along the next segment
    end: float
    center: tuple
    radius: float
    clearance: float  # d(center, Q)


@dataclass
class KappaDecomposition:
    kappa: float
    pieces: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.pieces)

    def to_json(self) -> str:
        return json.dumps([{"range": [p.start, p.end], "center": list(p.center), "radius": p.radius}
                           for p in self.pieces], sort_keys=True)


def _dist_to(Q: ConvexPolygon, c) -> float:
    A = np.asarray([[float(x), float(y)] for x, y in Q.vertices])
    p = np.asarray([[float(c[0]), float(c[1])]])
    if Q.n >= 3 and _inside(A[None], p)[0]:
        return 0.0
    return float(_seg_dist(p[None], A[None]).min())


class _Polyline:
    def __init__(self, path):
        self.pts = [(float(x), float(y)) for x, y in path]

    @property
    def last(self) -> float:
        return float(len(self.pts) - 1)

    def at(self, s: float):
        i = min(int(math.floor(s)), len(self.pts) - 2)
        f = s - i
        a, b = self.pts[i], self.pts[i + 1]
        return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))

    def between(self, s0: float, s1: float):
        inner = [self.pts[i] for i in range(int(math.floor(s0)) + 1, int(math.ceil(s1)))]
        return [self.at(s0)] + inner + [self.at(s1)]


def _clear_piece(Q, line, s0, s1, kappa) -> Optional[ClearPiece]:
    c, r = smallest_enclosing_disk(line.between(s0, s1))
    d = _dist_to(Q, c)
    return ClearPiece(s0, s1, c, r, d) if r * kappa <= d else None


def greedy_kappa_clear(path: Sequence, Q: ConvexPolygon, kappa: float = KAPPA,
                       tol: float = 1e-9) -> KappaDecomposition:
    """Greedy maximal-prefix decomposition of a polyline into κ-clear pieces.

    Each piece's witness is its smallest enclosing disk, accepted when the
    radius is at most 1/κ of the center's distance to Q.
    """
    if kappa <= 1:
        raise ValueError("kappa must exceed 1")
    line = _Polyline(path)
    if len(line.pts) < 2:
        line.pts = line.pts * 2
    for a, b in zip(line.pts, line.pts[1:]):
        seg = ConvexPolygon((_exact(a),) if a == b else (_exact(a), _exact(b)))
        if polygons_intersect(seg, Q):
            raise PathTouchesPolygon("path meets the polygon")
    out = KappaDecomposition(kappa)
    s0, end = 0.0, line.last
    while True:
        piece = _clear_piece(Q, line, s0, end, kappa)
        if piece is not None:
            out.pieces.append(piece)
            return out
        # furthest vertex reachable before the first failure, then bisect inside the next segment
        lo = s0
        good = None
        v = math.floor(s0) + 1
        while v < end:
            p = _clear_piece(Q, line, s0, float(v), kappa)
            if p is None:
                break
            lo, good = float(v), p
            v += 1
        hi = min(float(v), end)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            p = _clear_piece(Q, line, s0, mid, kappa)
            if p is None:
                hi = mid
            else:
                lo, good = mid, p
        if good is None or lo <= s0:
            raise PathTouchesPolygon("no κ-clear piece of positive length at the path parameter %g" % s0)
        out.pieces.append(good)
        s0 = lo
