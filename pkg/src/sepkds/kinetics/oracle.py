"""Brute-force reference for separation and first contact.

Everything here ignores the hierarchies: positions come straight from
the motion frames and separation is computed over all vertex/edge pairs,
vectorized over many sample times at once.  Samples whose float gap is
within a relative band of zero are re-decided with exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..geometry import ConvexPolygon, polygons_intersect
from .bodies import Body

EXACT_BAND = 1e-9
BISECT_ITERS = 80


class OracleMismatch(AssertionError):
    def __init__(self, message: str, time=None):
        super().__init__(message)
        self.time = time


def float_coeffs(p):
    return [float(c) for c in p.c] or [0.0]


def positions(body: Body, ts) -> np.ndarray:
    """World positions of the body's real vertices: array (T, k, 2)."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    f = body.frame
    u = npoly.polyval(ts, float_coeffs(f.u))
    w = 1 + u * u
    c, s = (1 - u * u) / w, 2 * u / w
    ox = npoly.polyval(ts, float_coeffs(f.ox))
    oy = npoly.polyval(ts, float_coeffs(f.oy))
    V = np.asarray([[float(a), float(b)] for a, b in body.real_vertex_list()])
    x = ox[:, None] + c[:, None] * V[None, :, 0] - s[:, None] * V[None, :, 1]
    y = oy[:, None] + s[:, None] * V[None, :, 0] + c[:, None] * V[None, :, 1]
    return np.stack((x, y), axis=-1)


def _sat(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Best separating gap over A's edge normals, for each time: array (T,)."""
    d = np.roll(A, -1, axis=1) - A
    nrm = np.stack((d[..., 1], -d[..., 0]), axis=-1)
    ln = np.hypot(nrm[..., 0], nrm[..., 1])
    nrm = nrm / np.where(ln == 0, 1.0, ln)[..., None]
    off = np.einsum("tij,tij->ti", A, nrm)
    proj = np.einsum("tmj,tij->tim", B, nrm)
    gaps = proj.min(axis=2) - off
    gaps = np.where(ln == 0, -np.inf, gaps)
    return gaps.max(axis=1)


def _seg_dist(p: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Distances from points p (T, k, 2) to the edges of polygons A (T, n, 2): (T, k, n)."""
    a = A
    d = np.roll(A, -1, axis=1) - A
    L = np.einsum("tij,tij->ti", d, d)
    L = np.where(L == 0, 1.0, L)
    w = p[:, :, None, :] - a[:, None, :, :]
    s = np.clip(np.einsum("tkij,tij->tki", w, d) / L[:, None, :], 0.0, 1.0)
    diff = w - s[..., None] * d[:, None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def _inside(A: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Closed containment of points p (T, 2) in ccw polygons A (T, n, 2)."""
    d = np.roll(A, -1, axis=1) - A
    w = p[:, None, :] - A
    return np.all(d[..., 0] * w[..., 1] - d[..., 1] * w[..., 0] >= 0, axis=1)


def gaps(bodies: Sequence[Body], ts) -> np.ndarray:
    """Signed float gap per time: positive separated, <= 0 touching or overlapping.

    Point bodies get the true signed distance; polygon pairs get the
    separating-axis gap, which has the right sign and never exceeds the
    distance.
    """
    P, Q = (positions(b, ts) for b in bodies)
    if P.shape[1] == 1 or Q.shape[1] == 1:
        poly, pt = (Q, P[:, 0, :]) if P.shape[1] == 1 else (P, Q[:, 0, :])
        dist = _seg_dist(pt[:, None, :], poly)[:, 0, :].min(axis=1)
        return np.where(_inside(poly, pt), -dist, dist)
    return np.maximum(_sat(P, Q), _sat(Q, P))


def distances(bodies: Sequence[Body], ts) -> np.ndarray:
    """Euclidean distance per time (0 when overlapping)."""
    P, Q = (positions(b, ts) for b in bodies)
    g = gaps(bodies, ts)
    if P.shape[1] == 1 or Q.shape[1] == 1:
        return np.maximum(g, 0.0)
    d = np.minimum(_seg_dist(P, Q).min(axis=(1, 2)), _seg_dist(Q, P).min(axis=(1, 2)))
    return np.where(g > 0, d, 0.0)


def gap_at(bodies: Sequence[Body], t: float) -> float:
    return float(gaps(bodies, [t])[0])


def exact_intersect(bodies: Sequence[Body], t) -> bool:
    t = Fraction(t)
    P, Q = (ConvexPolygon(tuple(b.frame.place_many(b.real_vertex_list(), t))) for b in bodies)
    return polygons_intersect(P, Q)


def _decide(bodies, t, g: float, scale: float) -> bool:
    if abs(g) > EXACT_BAND * scale:
        return g > 0
    return not exact_intersect(bodies, t)


def separated(bodies: Sequence[Body], t, scale: float) -> bool:
    """Strict separation at rational time t; exact near contact."""
    return _decide(bodies, t, gap_at(bodies, float(t)), scale)


def separated_many(bodies: Sequence[Body], ts: Sequence[Fraction], scale: float) -> list[bool]:
    g = gaps(bodies, [float(t) for t in ts]) if ts else np.zeros(0)
    return [_decide(bodies, t, float(x), scale) for t, x in zip(ts, g)]


def sample_times(t0, t1, count: int) -> list[Fraction]:
    t0, t1 = Fraction(t0), Fraction(t1)
    if count <= 0 or t1 <= t0:
        return []
    return [t0 + (t1 - t0) * Fraction(2 * i + 1, 2 * count) for i in range(count)]


def first_contact(bodies: Sequence[Body], t0, t1, count: int, scale: float) -> Optional[Fraction]:
    """Earliest time the bodies touch, by dense sampling then bisection."""
    t0, t1 = Fraction(t0), Fraction(t1)
    if not separated(bodies, t0, scale):
        return t0
    grid = [t0] + sample_times(t0, t1, count) + [t1]
    g = gaps(bodies, [float(t) for t in grid])
    for i in range(1, len(grid)):
        if not _decide(bodies, grid[i], float(g[i]), scale):
            return _bisect(bodies, grid[i - 1], grid[i], scale)
    # touch-and-leave between samples: look for dips near local minima of the gap
    for i in range(1, len(grid) - 1):
        if g[i] <= g[i - 1] and g[i] <= g[i + 1]:
            hit = _dip(bodies, grid[i - 1], grid[i + 1], scale)
            if hit is not None:
                return hit
    return None


def _bisect(bodies, lo: Fraction, hi: Fraction, scale: float) -> Fraction:
    for _ in range(BISECT_ITERS):
        mid = (lo + hi) / 2
        if separated(bodies, mid, scale):
            lo = mid
        else:
            hi = mid
    return hi


def _dip(bodies, a: Fraction, b: Fraction, scale: float) -> Optional[Fraction]:
    """Ternary search on the gap over [a, b]; bisects if the minimum is a contact."""
    lo, hi = float(a), float(b)
    for _ in range(60):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        g1, g2 = gaps(bodies, [m1, m2])
        if g1 < g2:
            hi = m2
        else:
            lo = m1
    m = Fraction((lo + hi) / 2)
    g = gap_at(bodies, float(m))
    if _decide(bodies, m, g, scale):
        # a tangency at a time no float can hit exactly still counts as contact
        return m if g <= EXACT_BAND * scale else None
    return _bisect(bodies, Fraction(a), m, scale)


@dataclass
class OracleReport:
    samples: int = 0
    contact: Optional[Fraction] = None
    mismatches: list = field(default_factory=list)
    min_gap: float = np.inf

    @property
    def ok(self) -> bool:
        return not self.mismatches
