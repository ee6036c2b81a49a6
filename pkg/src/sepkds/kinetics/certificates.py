"""Certificates as polynomial sign conditions on homogeneous moving points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .motion import MotionFrame
from .poly import Poly, Root, next_root, sign, sign_after


def det3(a, b, c) -> Poly:
    """Determinant of the rows (x, y, w) of three homogeneous points."""
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def orient_poly(a, b, c) -> Poly:
    """Polynomial with the sign of orient(a, b, c) for homogeneous points with w > 0."""
    return det3(a, b, c)


def cross_poly(d1, d2) -> Poly:
    return d1[0] * d2[1] - d1[1] * d2[0]


def edge_direction(normal):
    """Counterclockwise edge direction for an outward normal."""
    return (-normal[1], normal[0])


def outside_line_poly(frame_e: MotionFrame, start, normal, frame_v: MotionFrame, v) -> Poly:
    """Positive while body point v (frame_v) is strictly outside the directed line of an edge."""
    d = edge_direction(normal)
    s = frame_e.point(*start)
    s2 = frame_e.point(start[0] + d[0], start[1] + d[1])
    return -orient_poly(s, s2, frame_v.point(*v))


@dataclass
class Certificate:
    """A sign condition F(t) > 0 (or >= 0 when ``strict`` is False)."""

    kind: str
    F: Poly
    features: tuple = ()
    level: Optional[int] = None
    strict: bool = True
    created: Fraction = Fraction(0)
    failure: Optional[Root] = None
    report_touch: bool = False  # also report roots where F touches zero without changing sign

    def holds_at(self, t) -> bool:
        v = self.F(t)
        return v > 0 or (v == 0 and (not self.strict or sign_after(self.F, t) > 0))

    def schedule(self, t_now, t_end, width=None) -> Optional[Root]:
        """Earliest root after t_now where F leaves its certified sign."""
        t = Fraction(t_now)
        if self.F(t) == 0:
            s = sign_after(self.F, t)
            if s < 0 or (s == 0 and self.strict):
                self.failure = Root(t, t)
                return self.failure
        while True:
            r = next_root(self.F, t, t_end, width)
            if r is None:
                self.failure = None
                return None
            after = sign_after(self.F, r.hi) if r.exact else sign(self.F(r.hi))
            if after < 0 or (after == 0 and self.strict):
                self.failure = r
                return r
            if self.report_touch:
                # a touching root that keeps the sign: reported so grazing contact is examined
                self.failure = r
                return r
            t = r.hi

