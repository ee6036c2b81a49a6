"""Active-triangle KDS: a moving point tracked through the tiles of one hierarchy.

The point is either outside the bounding rectangle (certified by one
rectangle side) or inside a tile triangle (certified by its three sides).
Leaving through an outer side moves up to the ancestor whose cut line
holds that side; crossing the inner side moves down, level by level or
by binary search over the envelopes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from ..geometry import GeometryError, dot, orient, sub
from ..hierarchy import _in_triangle, locate_point
from .bodies import Body
from .certificates import Certificate, orient_poly
from .lazy import PRIORITY, Interval, PointInsidePolygon
from .log import EventLog
from .motion import EmptyHorizon
from .poly import ROOT_WIDTH_EXP, multiplicity_even, sign, sign_after


def _fan_locate(verts, p):
    """O(log n) point location in a convex ccw polygon.

    Returns (inside, k) where, when p is outside, edge (verts[k], verts[k+1])
    has p strictly on its outer side.
    """
    n = len(verts)
    v0 = verts[0]
    if orient(v0, verts[1], p) < 0:
        return False, 0
    if orient(v0, verts[n - 1], p) > 0:
        return False, n - 1
    lo, hi = 1, n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if orient(v0, verts[mid], p) >= 0:
            lo = mid
        else:
            hi = mid
    if orient(verts[lo], verts[hi], p) < 0:
        return False, lo
    return True, None


class ActiveTriangleKDS:
    def __init__(self, polygon: Body, point: Body, *, descent: str = "level", width=None):
        if polygon.is_point:
            polygon, point = point, polygon
        if not point.is_point or polygon.H is None:
            raise GeometryError("active-triangle mode needs a polygon with a hierarchy and a point")
        if descent not in ("level", "binary"):
            raise ValueError("descent must be 'level' or 'binary'")
        self.A, self.B = polygon, point
        self.H = polygon.H
        self.descent = descent
        self.t0, self.t1 = Fraction(polygon.frame.t0), Fraction(polygon.frame.t1)
        if self.t1 < self.t0:
            raise EmptyHorizon(f"horizon [{self.t0}, {self.t1}] is empty")
        self.width = width if width is not None else (self.t1 - self.t0) / (1 << ROOT_WIDTH_EXP)
        self.state = None  # ("outside", k) | ("triangle", node id)
        self.history: list[Interval] = []
        self.entered: dict = {}  # level -> set of node ids entered
        self.fires: dict = {}
        self.skip_hook: Optional[Callable] = None
        self._fans = {}

    # -- geometry ----------------------------------------------------------

    def p_body(self, t):
        return self.A.to_body(self.B.place(self.B.point, t), t)

    def _side_poly(self, a, b) -> "Poly":
        return orient_poly(self.A.frame.point(*a), self.A.frame.point(*b), self.B.frame.point(*self.B.point))

    def _rect(self):
        return self.H.rectangle.vertices

    def certificates(self, state, created):
        kind, x = state
        if kind == "outside":
            R = self._rect()
            a, b = R[x], R[(x + 1) % len(R)]
            return [Certificate("cell-boundary", -self._side_poly(a, b), ("rect", x), -1, True, created)]
        t = self.H.nodes[x]
        s0 = sign(orient(t.apex, t.A, t.B))
        out = []
        for tag, (a, b) in (("outer-a", (t.apex, t.A)), ("inner", (t.A, t.B)), ("outer-b", (t.B, t.apex))):
            F = self._side_poly(a, b) * s0
            inner = tag == "inner"
            out.append(Certificate("stab-line" if inner else "cell-boundary", F,
                                   (x, tag), t.level, False, created, report_touch=inner))
        return out

    def _stays(self, state, t) -> bool:
        """The state's certificates hold at t and do not fail immediately after."""
        for c in self.certificates(state, t):
            v = c.F(t)
            if v < 0 or (v == 0 and c.strict and sign_after(c.F, t) <= 0):
                return False
            if v == 0 and sign_after(c.F, t) < 0:
                return False
        return True

    def _enter(self, node_id):
        lvl = self.H.nodes[node_id].level
        self.entered.setdefault(lvl, set()).add(node_id)

    # -- relocation ----------------------------------------------------------

    def _outside_state(self, p, t):
        R = self._rect()
        best = None
        for k in range(len(R)):
            st = ("outside", k)
            if orient(R[k], R[(k + 1) % len(R)], p) <= 0 and self._stays(st, t):
                v = -orient(R[k], R[(k + 1) % len(R)], p)
                if best is None or v > best[0]:
                    best = (v, st)
        return best[1] if best else None

    def locate(self, t):
        """Full location at time t; returns (state or None when the point is inside, steps)."""
        p = self.p_body(t)
        loc = locate_point(self.H, p)
        if loc.kind == "outside" or loc.kind == "triangle":
            st = self._settle_from(loc, p, t)
            if st is not None:
                return st, loc.steps
        if loc.kind == "inside" or self.A.polygon.contains(p):
            return None, loc.steps
        # boundary case: scan every tile the point touches
        st = self._scan(p, t)
        return st, loc.steps + len(self.H.nodes)

    def _settle_from(self, loc, p, t):
        if loc.kind == "outside":
            return self._outside_state(p, t)
        st = ("triangle", loc.node.id)
        return st if self._stays(st, t) else None

    def _scan(self, p, t):
        st = self._outside_state(p, t)
        if st is not None:
            return st
        for node in sorted(self.H.nodes, key=lambda n: (-n.level, n.id)):
            if node.degenerate:
                continue
            cand = ("triangle", node.id)
            if self._stays(cand, t):
                return cand
        return None

    def climb(self, node_id, t):
        """Leave a triangle through an outer side: walk up the ancestors."""
        p = self.p_body(t)
        steps = 1
        node = self.H.nodes[node_id]
        while node.parent is not None:
            node = self.H.nodes[node.parent]
            steps += 1
            st = ("triangle", node.id)
            if not node.degenerate and self._stays(st, t):
                return st, steps
        st = self._outside_state(p, t)
        if st is not None:
            return st, steps
        st, more = self.locate(t)
        return st, steps + more

    def descend(self, node_id, t):
        """Cross a triangle's inner side: find the deeper tile (None means contact)."""
        if self.descent == "binary":
            return self._descend_binary(node_id, t)
        H = self.H
        edges = H.edges
        n = len(edges)
        p = self.p_body(t)
        steps = 1
        frontier = list(H.nodes[node_id].children)
        while frontier:
            nxt = []
            for b in frontier:
                bm = H.boomerangs[b]
                if bm.node is None:
                    continue
                if not _in_triangle(p, bm.apex, edges[bm.left % n].end, edges[bm.right % n].start):
                    continue
                node = H.nodes[bm.node]
                steps += 1
                st = ("triangle", node.id)
                if not node.degenerate and self._stays(st, t):
                    return st, steps
                nxt.extend(node.children)
            frontier = nxt
        if self.A.polygon.contains(p):
            return None, steps
        st, more = self.locate(t)
        return st, steps + more

    def _fan(self, level):
        f = self._fans.get(level)
        if f is None:
            env = self.H.envelope(level)
            verts, owner = [], []
            for k, e in enumerate(env.edges):
                if e.start != e.end:
                    verts.append(e.start)
                    owner.append(k)
            f = (env, verts, owner)
            self._fans[level] = f
        return f

    def _descend_binary(self, node_id, t):
        p = self.p_body(t)
        lo = self.H.nodes[node_id].level + 1  # p is inside env(lo)
        hi = self.H.depth + 1  # treat env(depth + 1) as empty
        steps = 1
        found = None
        while hi - lo > 1:
            mid = (lo + hi) // 2
            env, verts, owner = self._fan(mid)
            steps += 1
            inside, k = _fan_locate(verts, p) if len(verts) >= 3 else (False, None)
            if inside:
                lo = mid
            else:
                hi = mid
                found = (mid, owner[k] if k is not None else None)
        if hi > self.H.depth:
            if self.A.polygon.contains(p):
                return None, steps
            st, more = self.locate(t)
            return st, steps + more
        env = self.H.envelope(hi)
        if found and found[0] == hi and found[1] is not None:
            e = env.edges[found[1]]
            nid = self.A.node_of_edge.get(e.ids[0])
            if nid is not None:
                st = ("triangle", nid)
                if not self.H.nodes[nid].degenerate and self._stays(st, t):
                    return st, steps
        st, more = self.locate(t)
        return st, steps + more

    # -- event loop ------------------------------------------------------------

    def run(self, log: Optional[EventLog] = None, on_event: Optional[Callable] = None) -> EventLog:
        log = log if log is not None else EventLog()
        t = self.t0
        if self.t1 == self.t0:
            return log
        st, _ = self.locate(t)
        if st is None:
            raise PointInsidePolygon("point is inside or on the polygon at the start")
        self.state = st
        if st[0] == "triangle":
            self._enter(st[1])
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
            tp = r.hi
            key = (c.kind, c.features, c.F)
            self.fires[key] = self.fires.get(key, 0) + 1
            if self.skip_hook is not None and self.skip_hook(c, r):
                self._close(certs, self.t1)
                break
            self._close(certs, r.lo)
            before = self._level(st)
            if c.report_touch and multiplicity_even(c.F, r):
                if self._touches_real(st[1], tp):
                    log.add(r.mid, "collision", before, before, 1, degenerate=True)
                    break
                t = tp
                continue
            if st[0] == "outside":
                new, steps = self._leave_outside(st, tp)
                kind = "cell-exit"
            elif c.features[1] == "inner":
                new, steps = self.descend(st[1], tp)
                kind = "stab"
            else:
                new, steps = self.climb(st[1], tp)
                kind = "cell-exit"
            if new is None:
                log.add(r.mid, "collision", before, None, steps)
                break
            st = new
            if st[0] == "triangle":
                self._enter(st[1])
            log.add(r.mid, kind, before, self._level(st), steps)
            self.state = st
            if on_event is not None:
                on_event(self, tp)
            t = tp
        self.state = st
        return log

    def _touches_real(self, node_id, t) -> bool:
        """Inner side of the triangle lies on a real edge and the point projects onto it."""
        node = self.H.nodes[node_id]
        p = self.p_body(t)
        lo, hi = node.cut
        n = len(self.H.edges)
        for j in range(lo, hi + 1):
            e = self.H.edges[j % n]
            if e.real and dot(sub(p, e.start), sub(e.end, e.start)) >= 0 \
                    and dot(sub(p, e.end), sub(e.start, e.end)) >= 0:
                return True
        return False

    def _leave_outside(self, st, t):
        p = self.p_body(t)
        alt = self._outside_state(p, t)
        if alt is not None:
            return alt, 1
        return self.locate(t)

    def _level(self, st):
        return -1 if st[0] == "outside" else self.H.nodes[st[1]].level

    def _close(self, certs, end):
        for c in certs:
            self.history.append(Interval(c, c.created, Fraction(end)))

    def lemma2_violations(self) -> dict:
        """Levels at which more than one distinct triangle was entered."""
        return {lvl: sorted(ids) for lvl, ids in self.entered.items() if len(ids) > 1}
