"""Rigid motions with polynomial translation and rational rotation.

A frame is o(t) plus a rotation parameter u(t); the rotation matrix is
((1-u^2), -2u; 2u, (1-u^2)) / (1+u^2).  A body point (X, Y) then sits at
the homogeneous position (Nx, Ny, w) with w = 1 + u^2 > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..geometry import GeometryError, to_fraction
from .poly import Poly, multiplicity_even, roots_in

DEFAULT_MAX_DEGREE = 8


class DegreeTooHigh(GeometryError):
    pass


class EmptyHorizon(GeometryError):
    pass


@dataclass(frozen=True)
class MotionFrame:
    ox: Poly
    oy: Poly
    u: Poly
    t0: Fraction
    t1: Fraction

    @property
    def degree(self) -> int:
        return max(self.ox.degree, self.oy.degree, self.u.degree, 0)

    @property
    def horizon(self) -> Fraction:
        return self.t1 - self.t0

    @property
    def rotating(self) -> bool:
        return not self.u.is_constant()

    @property
    def w(self) -> Poly:
        return 1 + self.u * self.u

    @property
    def tags(self) -> tuple[str, ...]:
        return (classify(self),)

    # -- homogeneous positions ------------------------------------------

    def rot_polys(self):
        """(c, s, w): numerators of cos and sin, and their common denominator."""
        u = self.u
        return 1 - u * u, 2 * u, 1 + u * u

    def point(self, X, Y):
        """Homogeneous polynomials (Nx, Ny, w) of body point (X, Y)."""
        c, s, w = self.rot_polys()
        X, Y = Fraction(X), Fraction(Y)
        return (self.ox * w + c * X - s * Y, self.oy * w + s * X + c * Y, w)

    def direction(self, dx, dy):
        """Numerators of the rotated direction (denominator w > 0 dropped)."""
        c, s, _ = self.rot_polys()
        return (c * Fraction(dx) - s * Fraction(dy), s * Fraction(dx) + c * Fraction(dy))

    # -- exact evaluation -----------------------------------------------

    def rotation_at(self, t):
        u = self.u(t)
        w = 1 + u * u
        return (1 - u * u) / w, 2 * u / w

    def offset_at(self, t):
        return self.ox(t), self.oy(t)

    def place(self, p, t):
        c, s = self.rotation_at(t)
        o = self.offset_at(t)
        return (o[0] + c * p[0] - s * p[1], o[1] + s * p[0] + c * p[1])

    def place_many(self, pts, t):
        c, s = self.rotation_at(t)
        ox, oy = self.offset_at(t)
        return [(ox + c * x - s * y, oy + s * x + c * y) for x, y in pts]

    def to_body(self, p, t):
        c, s = self.rotation_at(t)
        ox, oy = self.offset_at(t)
        dx, dy = p[0] - ox, p[1] - oy
        return (c * dx + s * dy, -s * dx + c * dy)

    def rotate_dir(self, d, t):
        c, s = self.rotation_at(t)
        return (c * d[0] - s * d[1], s * d[0] + c * d[1])

    def place_float(self, pts, t: float):
        """Float positions of many body points (numpy array in, array out)."""
        u = self.u.eval_float(t)
        w = 1 + u * u
        c, s = (1 - u * u) / w, 2 * u / w
        P = np.asarray(pts, dtype=float)
        ox, oy = self.ox.eval_float(t), self.oy.eval_float(t)
        return np.column_stack((ox + c * P[:, 0] - s * P[:, 1], oy + s * P[:, 0] + c * P[:, 1]))

    def velocity_float(self, p, t: float):
        """Numeric velocity of body point p at time t (central difference)."""
        h = max(1e-7, 1e-7 * abs(t))
        a = self.place_float([p], t - h)[0]
        b = self.place_float([p], t + h)[0]
        return (b - a) / (2 * h)


def make_motion(spec=None, max_degree: int = DEFAULT_MAX_DEGREE) -> MotionFrame:
    """Validate a motion description.

    ``spec`` is a mapping with optional keys ``o`` (pair of coefficient
    lists, low degree first), ``u`` (coefficient list) and ``horizon``
    ([t0, t1]).  Missing parts default to a static frame on [0, 1].
    """
    spec = dict(spec or {})
    o = spec.get("o", [[0], [0]])
    if len(o) != 2:
        raise GeometryError("o must be a pair of coefficient lists")
    ox, oy = (Poly(to_fraction(c) for c in comp) for comp in o)
    u = Poly(to_fraction(c) for c in spec.get("u", [0]))
    h = spec.get("horizon", [0, 1])
    if len(h) != 2:
        raise GeometryError("horizon must be [t0, t1]")
    t0, t1 = to_fraction(h[0]), to_fraction(h[1])
    if t1 < t0:
        raise EmptyHorizon(f"horizon [{t0}, {t1}] is empty")
    m = MotionFrame(ox, oy, u, t0, t1)
    if m.degree > max_degree:
        raise DegreeTooHigh(f"degree {m.degree} exceeds cap {max_degree}")
    return m


def static_frame(t0=0, t1=1, offset=(0, 0), u=0) -> MotionFrame:
    return MotionFrame(Poly.const(to_fraction(offset[0])), Poly.const(to_fraction(offset[1])),
                       Poly.const(to_fraction(u)), Fraction(t0), Fraction(t1))


def classify(m: MotionFrame) -> str:
    """static | linear translation | convex translation | general translation | rigid."""
    if m.rotating:
        return "rigid"
    if m.ox.is_constant() and m.oy.is_constant():
        return "static"
    if m.ox.degree <= 1 and m.oy.degree <= 1:
        return "linear translation"
    # convex when the curvature numerator cross(o', o'') keeps one sign
    dx, dy = m.ox.deriv(), m.oy.deriv()
    k = dx * dy.deriv() - dy * dx.deriv()
    if k.is_zero() or _keeps_sign(k, m.t0, m.t1):
        return "convex translation"
    return "general translation"


def _keeps_sign(f: Poly, t0, t1) -> bool:
    """No sign change of f strictly inside (t0, t1)."""
    for r in roots_in(f, t0, t1):
        if r.hi < t1 and not multiplicity_even(f, r):
            return False
    return True


def linear_motion(start: Sequence, velocity: Sequence, t0=0, t1=1, u=0) -> MotionFrame:
    sx, sy = (to_fraction(x) for x in start)
    vx, vy = (to_fraction(x) for x in velocity)
    return MotionFrame(Poly((sx, vx)), Poly((sy, vy)), Poly.const(to_fraction(u)),
                       Fraction(t0), Fraction(t1))
