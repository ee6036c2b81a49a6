"""Mixed-cell KDS: the configuration point c = o_Q - o_P tracked through the mixed hierarchy.

P and Q collide exactly when c enters R_P P + (-R_Q Q).  The tiling of
the space between that sum and the sum of the bounding rectangles is
materialized once; under translation c walks from cell to cell through
the adjacency links.  Under rotation every cell also carries slope-order
conditions on the lines that shaped it, and the tiling is rebuilt at the
rotation found just after each event.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from ..geometry import GeometryError, orient, point_in_convex
from ..hierarchy import build_compass, build_dudley
from ..mixed import (
    MixedHierarchy,
    build_mixed,
    locate_configuration,
    rotate,
)
from .bodies import Body
from .certificates import Certificate, cross_poly, det3
from .lazy import PRIORITY, InitialOverlap, Interval
from .log import EventLog
from .motion import EmptyHorizon
from .poly import ROOT_WIDTH_EXP, Poly, sign_after

_BUILDERS = {"compass": build_compass, "dudley": build_dudley}


class MixedCellKDS:
    def __init__(self, a: Body, b: Body, *, width=None):
        if a.is_point or b.is_point or a.H is None or b.H is None:
            raise GeometryError("mixed-cell mode needs two polygons with hierarchies")
        self.P, self.Q = a, b
        self.HP = a.H
        # the sum uses -Q, so Q's hierarchy is rebuilt on the reflected polygon
        self.HQ = _BUILDERS[b.H.kind](b.polygon.negated())
        self.t0, self.t1 = Fraction(a.frame.t0), Fraction(a.frame.t1)
        if self.t1 < self.t0:
            raise EmptyHorizon(f"horizon [{self.t0}, {self.t1}] is empty")
        self.width = width if width is not None else (self.t1 - self.t0) / (1 << ROOT_WIDTH_EXP)
        self.rigid = a.frame.rotating or b.frame.rotating
        self.M: Optional[MixedHierarchy] = None
        self.history: list[Interval] = []
        self.fires: dict = {}
        self.skip_hook: Optional[Callable] = None
        self.rebuilds = 0
        fp, fq = a.frame, b.frame
        self._c = (fq.ox - fp.ox, fq.oy - fp.oy)

    # -- moving geometry ---------------------------------------------------

    def config(self, t):
        return (self._c[0](t), self._c[1](t))

    def _sum_h(self, p, q):
        """Homogeneous polynomial point R_P p + R_Q q with weight w_P w_Q."""
        fp, fq = self.P.frame, self.Q.frame
        cp, sp, wp = fp.rot_polys()
        cq, sq, wq = fq.rot_polys()
        x = (cp * p[0] - sp * p[1]) * wq + (cq * q[0] - sq * q[1]) * wp
        y = (sp * p[0] + cp * p[1]) * wq + (sq * q[0] + cq * q[1]) * wp
        return (x, y, wp * wq)

    def _config_h(self):
        W = self.P.frame.w * self.Q.frame.w
        return (self._c[0] * W, self._c[1] * W, W)

    def _edge_poly(self, a_pq, b_pq, outward=False) -> Poly:
        F = det3(self._sum_h(*a_pq), self._sum_h(*b_pq), self._config_h())
        return -F if outward else F

    def _dir(self, origin, normal):
        frame = self.P.frame if origin == "P" else self.Q.frame
        return frame.direction(*normal)

    def _line_normal(self, origin, lid):
        lines = self.M.lines_p if origin == "P" else self.M.lines_q
        return lines[lid].normal

    # -- certificates ------------------------------------------------------

    def certificates(self, state, created):
        kind, x = state
        out = []
        if kind == "outside":
            a_pq, b_pq = self._outer_edge(x)
            out.append(Certificate("cell-boundary", self._edge_poly(a_pq, b_pq, outward=True),
                                   ("outer", x), -1, True, created))
            if self.rigid:
                out.extend(self._outer_slopes(x, created))
            return out
        cell = self.M.cells[x]
        pts = list(zip(cell.p_pts, cell.q_pts))
        for k in range(len(pts)):
            F = self._edge_poly(pts[k], pts[(k + 1) % len(pts)])
            out.append(Certificate("cell-boundary", F, (x, k), cell.level, False, created))
        if self.rigid:
            out.extend(self._cell_slopes(cell, created))
        return out

    def _slope_cert(self, o1, n1, o2, n2, strict, tag, level, created):
        F = cross_poly(self._dir(o1, n1), self._dir(o2, n2))
        return Certificate("slope-order", F, tag, level, strict, created)

    def _cell_slopes(self, cell, created):
        """Conditions under which the cut that made the cell still produces it."""
        own = cell.origin
        oth = "Q" if own == "P" else "P"
        a, e, b = (self._line_normal(own, i) for i in cell.cut_lines)
        first = own == "P"  # P wins slope ties
        out = []
        tag = (cell.id,)
        if cell.kind == "triangle" and cell.other_vertex:
            n1, n2 = (self._line_normal(oth, i) for i in cell.other_vertex)
            out.append(self._slope_cert(oth, n1, own, e, first, tag + ("turn", 0), cell.level, created))
            out.append(self._slope_cert(own, e, oth, n2, not first, tag + ("turn", 1), cell.level, created))
        elif cell.kind == "parallelogram":
            nk = self._line_normal(oth, cell.other_line)
            lo_bound, hi_bound = (a, e) if cell.side == "lo" else (e, b)
            k0 = "range" if cell.side == "lo" else "turn"
            k1 = "turn" if cell.side == "lo" else "range"
            out.append(self._slope_cert(own, lo_bound, oth, nk, not first, tag + (k0, 0), cell.level, created))
            out.append(self._slope_cert(oth, nk, own, hi_bound, first, tag + (k1, 1), cell.level, created))
        return [c for c in out if not c.F.is_constant()]

    def _outer_edge(self, k):
        """Body-point pairs spanning edge k of the outer polygon at the build rotation."""
        return self._outer_pairs[k], self._outer_pairs[(k + 1) % len(self._outer_pairs)]

    def _outer_slopes(self, k, created):
        """The outer edge keeps its supporting pair while the neighbouring slopes stay ordered."""
        m = len(self._outer_pairs)
        prev_pq, a_pq = self._outer_pairs[k - 1], self._outer_pairs[k]
        b_pq, next_pq = self._outer_pairs[(k + 1) % m], self._outer_pairs[(k + 2) % m]
        out = []
        for tag, (u0, u1), (v0, v1) in (("before", (prev_pq, a_pq), (a_pq, b_pq)),
                                        ("after", (a_pq, b_pq), (b_pq, next_pq))):
            d0 = self._pair_dir(u0, u1)
            d1 = self._pair_dir(v0, v1)
            F = cross_poly(d0, d1)
            if not F.is_constant():
                out.append(Certificate("slope-order", F, ("outer", k, tag), -1, False, created))
        return out

    def _pair_dir(self, u, v):
        """Numerator direction of the outer edge from sum point u to sum point v."""
        (p0, q0), (p1, q1) = u, v
        if p0 == p1:
            return self.Q.frame.direction(q1[0] - q0[0], q1[1] - q0[1])
        return self.P.frame.direction(p1[0] - p0[0], p1[1] - p0[1])

    # -- tiling and location -------------------------------------------------

    def rebuild(self, t):
        rp = self.P.frame.rotation_at(t)
        rq = self.Q.frame.rotation_at(t)
        self.M = build_mixed(self.HP, self.HQ, rp, rq)
        self.rebuilds += 1
        self._outer_pairs = _outer_pairs(self.M)

    def _stays(self, state, t) -> bool:
        for c in self.certificates(state, t):
            v = c.F(t)
            if v < 0 or (v == 0 and (sign_after(c.F, t) < 0 or (c.strict and sign_after(c.F, t) == 0))):
                return False
        return True

    def locate(self, t, hint=()):
        """(state, steps); state None means c is in the forbidden sum (contact)."""
        c = self.config(t)
        steps = 0
        for cid in hint:
            steps += 1
            cell = self.M.cells[cid]
            if cell.alive and cell.contains(c) and self._stays(("cell", cid), t):
                return ("cell", cid), steps
        if not point_in_convex(self.M.outer.vertices, c, strict=True):
            st = self._outside_state(c, t)
            if st is not None:
                return st, steps + 1
        if point_in_convex(self.M.inner.vertices, c):
            return None, steps + 1
        loc = locate_configuration(self.M, c)
        steps += loc.steps
        if loc.kind == "cell" and self._stays(("cell", loc.cell.id), t):
            return ("cell", loc.cell.id), steps
        for cell in sorted(self.M.alive(), key=lambda x: (-x.level, x.id)):
            if cell.contains(c) and self._stays(("cell", cell.id), t):
                return ("cell", cell.id), steps + self.M.size
        st = self._outside_state(c, t)
        if st is not None:
            return st, steps
        raise GeometryError(f"configuration {c} could not be located at t={float(t)}")

    def _outside_state(self, c, t):
        V = self.M.outer.vertices
        best = None
        for k in range(len(V)):
            if orient(V[k], V[(k + 1) % len(V)], c) <= 0:
                st = ("outside", k)
                if self._stays(st, t):
                    v = -orient(V[k], V[(k + 1) % len(V)], c)
                    if best is None or v > best[0]:
                        best = (v, st)
        return best[1] if best else None

    def _neighbors(self, state, edge_k):
        if state[0] != "cell":
            return ()
        cell = self.M.cells[state[1]]
        return tuple(cell.neighbors[edge_k]) if edge_k < len(cell.neighbors) else ()

    # -- event loop ------------------------------------------------------------

    def run(self, log: Optional[EventLog] = None, on_event: Optional[Callable] = None) -> EventLog:
        log = log if log is not None else EventLog()
        t = self.t0
        if self.t1 == self.t0:
            return log
        self.rebuild(t)
        st, _ = self.locate(t)
        if st is None:
            raise InitialOverlap("polygons intersect at the start")
        while True:
            certs = self.certificates(st, t)
            for c in certs:
                c.schedule(t, self.t1, self.width)
            pending = [c for c in certs if c.failure is not None]
            if not pending:
                self._close(certs, self.t1)
                break
            c = min(pending, key=lambda c: (c.failure.hi, PRIORITY[c.kind]))
            r = c.failure
            key = (c.kind, c.features, c.F)
            self.fires[key] = self.fires.get(key, 0) + 1
            if self.skip_hook is not None and self.skip_hook(c, r):
                self._close(certs, self.t1)
                break
            self._close(certs, r.lo)
            before = self._level(st)
            if self.rigid:
                # relocate just after the event at an exact rational rotation
                tp = min(self.t1, r.hi + max(r.hi - r.lo, self.width))
                self.rebuild(tp)
                new, steps = self.locate(tp)
                kind = "cell-exit" if c.kind == "cell-boundary" else _slope_kind(c)
            else:
                tp = r.hi
                hint = self._neighbors(st, c.features[1]) if st[0] == "cell" else ()
                new, steps = self.locate(tp, hint)
                kind = "cell-exit"
            if new is None:
                log.add(r.mid, "collision", before, None, max(1, steps))
                break
            st = new
            log.add(r.mid, kind, before, self._level(st), max(1, steps))
            if on_event is not None:
                on_event(self, tp)
            t = tp
        self.state = st
        return log

    def _level(self, st):
        return -1 if st[0] == "outside" else self.M.cells[st[1]].level

    def _close(self, certs, end):
        for c in certs:
            self.history.append(Interval(c, c.created, Fraction(end)))


def _slope_kind(c: Certificate) -> str:
    if "turn" in c.features:
        return "page-turn"
    if c.features and c.features[0] == "outer":
        return "cell-exit"
    return "collapse"


def _outer_pairs(M: MixedHierarchy):
    """For each outer vertex, the (P-rectangle point, (-Q)-rectangle point) summing to it."""
    rp, rq = M.rot_p, M.rot_q
    P = [(p, rotate(p, rp)) for p in M.P.rectangle.vertices]
    Q = [(q, rotate(q, rq)) for q in M.Q.rectangle.vertices]
    out = []
    for v in M.outer.vertices:
        hit = None
        for p, pr in P:
            for q, qr in Q:
                if (pr[0] + qr[0], pr[1] + qr[1]) == tuple(v):
                    hit = (p, q)
                    break
            if hit:
                break
        if hit is None:
            raise GeometryError("outer vertex is not a sum of rectangle corners")
        out.append(hit)
    return out
