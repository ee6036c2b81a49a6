"""Lazy separating-edge KDS on one or two boomerang hierarchies.

The certificate is a triple (level i, edge e of one body's envelope at
level i, vertex v of the other body's envelope at level i) with v the
vertex of that envelope extreme toward e.  It proves separation while v
stays strictly outside the line of e.  Under rotation two more sign
conditions keep v extreme: the edges around v must not turn past e.

Failures of the separation condition are stabs (v hits e itself) or
pushes (v crosses the line beside e); failures of the extremality
conditions are rolls.  A point body has a single vertex and no edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from ..geometry import GeometryError, dot, sub
from .bodies import Body
from .certificates import Certificate, cross_poly, outside_line_poly
from .log import EventLog
from .motion import EmptyHorizon
from .poly import ROOT_WIDTH_EXP, Root, multiplicity_even, sign, sign_after

PRIORITY = {"collision": 0, "stab-line": 1, "roll-parallel": 2, "push-side": 3, "cell-boundary": 3,
            "slope-order": 4, "page-turn": 4}


def fire_bound_violations(fires: dict) -> list:
    """Keys (kind, features, F) of certificates that failed more often than deg F."""
    return [k for k, n in fires.items() if n > max(1, k[2].degree)]


class InitialOverlap(GeometryError):
    pass


class PointInsidePolygon(InitialOverlap):
    pass


@dataclass(frozen=True)
class SepState:
    level: int
    owner: int  # body index owning the separating edge
    edge: int  # index into owner's envelope at ``level``
    vertex: int  # index into the other body's envelope at ``level``


@dataclass
class Interval:
    """A certificate together with the time span over which it was relied upon."""

    cert: Certificate
    start: Fraction
    end: Optional[Fraction] = None


class LazyKDS:
    """Separation certificate maintained lazily over a pair of bodies."""

    def __init__(self, a: Body, b: Body, *, t0=None, t1=None, width=None):
        if a.is_point and b.is_point:
            raise GeometryError("two points have no separating edges")
        if a.is_point:
            a, b = b, a
        self.bodies = (a, b)
        self.t0 = Fraction(a.frame.t0 if t0 is None else t0)
        self.t1 = Fraction(a.frame.t1 if t1 is None else t1)
        if self.t1 < self.t0:
            raise EmptyHorizon(f"horizon [{self.t0}, {self.t1}] is empty")
        self.width = width if width is not None else (self.t1 - self.t0) / (1 << ROOT_WIDTH_EXP)
        self.max_level = max(a.depth, b.depth)
        self.state: Optional[SepState] = None
        self.history: list[Interval] = []
        self.fires: dict = {}
        self.skip_hook: Optional[Callable] = None
        self.fallbacks = 0

    # -- geometry at a time ------------------------------------------------

    def _edge(self, st: SepState):
        return self.bodies[st.owner].env(st.level).edges[st.edge]

    def _vertex(self, st: SepState):
        return self.bodies[1 - st.owner].env(st.level).vertex(st.vertex)

    def _separation(self, st: SepState, t):
        """Exact <v - s, n> in world coordinates (positive means separated)."""
        A, B = self.bodies[st.owner], self.bodies[1 - st.owner]
        e = self._edge(st)
        s = A.place(e.start, t)
        n = A.dir_to_world(e.normal, t)
        v = B.place(self._vertex(st), t)
        return dot(sub(v, s), n), n

    def _sep_float(self, st, t) -> float:
        val, n = self._separation(st, t)
        return float(val) / math.hypot(float(n[0]), float(n[1]))

    def sep_poly(self, st: SepState):
        A, B = self.bodies[st.owner], self.bodies[1 - st.owner]
        e = self._edge(st)
        return outside_line_poly(A.frame, e.start, e.normal, B.frame, self._vertex(st))

    def roll_polys(self, st: SepState):
        """(into-previous, into-next) sign conditions keeping v extreme toward e."""
        A, B = self.bodies[st.owner], self.bodies[1 - st.owner]
        if B.is_point:
            return None, None
        env = B.env(st.level)
        k = st.vertex
        n_in = env.edges[k - 1].normal
        n_out = env.edges[k].normal
        ne = self._edge(st).normal
        d = A.frame.direction(-ne[0], -ne[1])
        r_in = cross_poly(B.frame.direction(*n_in), d)
        r_out = cross_poly(d, B.frame.direction(*n_out))
        return r_in, r_out

    def _valid(self, st: SepState, t) -> bool:
        val, _ = self._separation(st, t)
        if val != 0:
            return val > 0
        return sign_after(self.sep_poly(st), t) > 0

    def _settle(self, st: SepState, t) -> SepState:
        """Step v around the envelope while an extremality condition is leaving its range at t."""
        B = self.bodies[1 - st.owner]
        if B.is_point:
            return st
        m = len(B.env(st.level).edges)
        for _ in range(m + 1):
            r_in, r_out = self.roll_polys(st)
            if r_out(t) == 0 and sign_after(r_out, t) < 0:
                st = SepState(st.level, st.owner, st.edge, (st.vertex + 1) % m)
            elif r_in(t) == 0 and sign_after(r_in, t) < 0:
                st = SepState(st.level, st.owner, st.edge, (st.vertex - 1) % m)
            else:
                return st
        raise GeometryError("extreme vertex did not settle")

    def _candidate(self, owner: int, level: int, edge: int, t) -> SepState:
        """Certificate on the given edge with the other body's extreme vertex at time t."""
        A, B = self.bodies[owner], self.bodies[1 - owner]
        ne = A.env(level).edges[edge].normal
        nw = A.dir_to_world(ne, t)
        k = B.env(level).extreme_vertex(B.dir_to_body((-nw[0], -nw[1]), t))
        return self._settle(SepState(level, owner, edge, k), t)

    def _best(self, cands, t) -> Optional[SepState]:
        best, best_d = None, None
        seen = set()
        for st in cands:
            if st in seen:
                continue
            seen.add(st)
            if not self._valid(st, t):
                continue
            d = self._sep_float(st, t)
            if best is None or d > best_d:
                best, best_d = st, d
        return best

    def _owners(self):
        return [i for i in (0, 1) if not self.bodies[i].is_point]

    def _line_candidates(self, level: int, owner: int, ids, t):
        """Edges of ``owner``'s envelope at ``level`` lying on the lines of augmented edges ``ids``."""
        env = self.bodies[owner].env(level)
        ks = [env.edge_of(i) for i in ids]
        return [self._candidate(owner, level, k, t) for k in ks if k is not None]

    def _opposite_candidates(self, owner, level, normal_world, t):
        """Edges of the non-owner body adjacent to its vertex extreme toward the owner."""
        B = self.bodies[1 - owner]
        if B.is_point:
            return []
        env = B.env(level)
        k = env.extreme_vertex(B.dir_to_body((-normal_world[0], -normal_world[1]), t))
        m = len(env.edges)
        return [self._candidate(1 - owner, level, (k - 1) % m, t),
                self._candidate(1 - owner, level, k, t)]

    # -- searches --------------------------------------------------------

    def global_search(self, level: int, t) -> Optional[SepState]:
        cands = []
        for owner in self._owners():
            for k in range(len(self.bodies[owner].env(level).edges)):
                cands.append(self._candidate(owner, level, k, t))
        return self._best(cands, t)

    def initial(self, t) -> SepState:
        for level in range(self.max_level + 1):
            st = self.global_search(level, t)
            if st is not None:
                return st
        if self.bodies[1].is_point:
            raise PointInsidePolygon("point is inside or on the polygon at the start")
        raise InitialOverlap("polygons intersect at the start")

    def _walk(self, owner: int, level: int, k: int, t):
        """Walk along ``owner``'s envelope from edge k to the edge(s) whose slab holds the
        other body's facing vertex.  Returns (candidates, last edge index)."""
        A, B = self.bodies[owner], self.bodies[1 - owner]
        env = A.env(level)
        m = len(env.edges)
        prev = None
        for _ in range(m + 1):
            st = self._candidate(owner, level, k, t)
            vb = A.to_body(B.place(self._vertex(st), t), t)
            e = env.edges[k]
            d = (-e.normal[1], e.normal[0])
            if dot(sub(vb, e.start), d) < 0:
                nk = (k - 1) % m
            elif dot(sub(vb, e.end), d) > 0:
                nk = (k + 1) % m
            else:
                return [st], k
            if nk == prev:
                # v sits in the wedge at the shared vertex
                return [st, self._candidate(owner, level, nk, t)], k
            prev, k = k, nk
        return [], k

    def refine(self, st: SepState, t, start: int):
        """Descend level by level from ``start`` until a local candidate separates.

        Returns (state, steps); state is None when even the exhaustive search
        at the finest level finds no separating edge.
        """
        ids = self._edge(st).ids
        for level in range(start, self.max_level + 1):
            env = self.bodies[st.owner].env(level)
            k = env.edge_of(ids[0])
            cands, k = self._walk(st.owner, level, k, t)
            nw = self.bodies[st.owner].dir_to_world(env.edges[k].normal, t)
            cands += self._opposite_candidates(st.owner, level, nw, t)
            best = self._best(cands, t)
            if best is not None:
                return best, 1 + abs(level - st.level)
            ids = env.edges[k].ids
        self.fallbacks += 1
        best = self.global_search(self.max_level, t)
        steps = 1 + abs(self.max_level - st.level) + sum(
            len(self.bodies[o].env(self.max_level).edges) for o in self._owners())
        return best, steps

    def push_candidates(self, st: SepState, t):
        A = self.bodies[st.owner]
        m = len(A.env(st.level).edges)
        cands = [self._candidate(st.owner, st.level, (st.edge - 1) % m, t),
                 self._candidate(st.owner, st.level, (st.edge + 1) % m, t)]
        B = self.bodies[1 - st.owner]
        if not B.is_point:
            mb = len(B.env(st.level).edges)
            cands.append(self._candidate(1 - st.owner, st.level, (st.vertex - 1) % mb, t))
            cands.append(self._candidate(1 - st.owner, st.level, st.vertex % mb, t))
        return self._best(cands, t)

    def coarsen(self, st: SepState, t) -> SepState:
        while st.level > 0:
            j = st.level - 1
            A = self.bodies[st.owner]
            e = self._edge(st)
            ids = [x for x in e.ids if A.H.inserted[x] < j]
            if not ids:
                # the line was cut in at level j: fall back to the cut's bounding lines
                node = A.H.nodes[A.node_of_edge[e.ids[0]]]
                bm = A.H.boomerangs[node.boomerang]
                n = len(A.H.edges)
                ids = [bm.left % n, bm.right % n]
            nw = A.dir_to_world(e.normal, t)
            cands = self._line_candidates(j, st.owner, ids, t)
            cands += self._opposite_candidates(st.owner, j, nw, t)
            best = self._best(cands, t)
            if best is None:
                break
            st = best
        return st

    def relocate(self, st: SepState, t):
        """New certificate after the separation condition failed at t.

        Returns (state or None for contact, steps, event kind).
        """
        if self._projects_inside(st, t):
            new, steps = self.refine(st, t, st.level + 1)
            return new, steps, "stab"
        new = self.push_candidates(st, t)
        if new is None:
            new, steps = self.refine(st, t, st.level + 1)
        else:
            new = self.coarsen(new, t)
            steps = 1 + abs(new.level - st.level)
        return new, steps, "push"

    # -- real contact ------------------------------------------------------

    def real_contact(self, st: SepState, t) -> bool:
        """True if v is a real vertex lying over a real edge on e's line at time t."""
        A, B = self.bodies[st.owner], self.bodies[1 - st.owner]
        v = self._vertex(st)
        if v not in B.real_vertices:
            return False
        vb = A.to_body(B.place(v, t), t)
        for ed in A.real_edges_on(self._edge(st)):
            a, b = ed.start, ed.end
            if dot(sub(vb, a), sub(b, a)) >= 0 and dot(sub(vb, b), sub(a, b)) >= 0:
                return True
        return False

    def _projects_inside(self, st: SepState, t) -> bool:
        A, B = self.bodies[st.owner], self.bodies[1 - st.owner]
        e = self._edge(st)
        vb = A.to_body(B.place(self._vertex(st), t), t)
        a, b = e.start, e.end
        if a == b:
            return False
        return dot(sub(vb, a), sub(b, a)) >= 0 and dot(sub(vb, b), sub(a, b)) >= 0

    # -- certificates and the event loop -----------------------------------

    def certificates(self, st: SepState, created) -> list[Certificate]:
        feats = (st.level, st.owner, st.edge, st.vertex)
        out = [Certificate("stab-line", self.sep_poly(st), feats, st.level, True, created, report_touch=True)]
        r_in, r_out = self.roll_polys(st)
        for tag, F in (("in", r_in), ("out", r_out)):
            if F is not None and not F.is_constant():
                out.append(Certificate("roll-parallel", F, feats + (tag,), st.level, False, created))
        return out

    def _fire(self, cert: Certificate):
        key = (cert.kind, cert.features, cert.F)
        self.fires[key] = self.fires.get(key, 0) + 1

    def run(self, log: Optional[EventLog] = None, on_event: Optional[Callable] = None) -> EventLog:
        log = log if log is not None else EventLog()
        t = self.t0
        if self.t1 == self.t0:
            return log
        st = self.initial(t)
        self.state = st
        while True:
            certs = self.certificates(st, t)
            for c in certs:
                c.schedule(t, self.t1, self.width)
            pending = [c for c in certs if c.failure is not None]
            if not pending:
                self._close(certs, self.t1)
                break
            c = min(pending, key=lambda c: (c.failure.hi, PRIORITY[c.kind]))
            r: Root = c.failure
            tp = r.hi
            self._fire(c)
            if self.skip_hook is not None and self.skip_hook(c, r):
                # fault injection: the failure is dropped and the stale certificate kept to the end
                self._close(certs, self.t1)
                break
            self._close(certs, r.lo)
            before = st.level
            if c.kind == "roll-parallel":
                B = self.bodies[1 - st.owner]
                m = len(B.env(st.level).edges)
                step = 1 if c.features[-1] == "out" else -1
                st = self._settle(SepState(st.level, st.owner, st.edge, (st.vertex + step) % m), tp)
                if not self._valid(st, tp):
                    st, _ = self.refine(st, tp, st.level)
                    if st is None:
                        log.add(r.mid, "collision", before, None, 1)
                        break
                st = self.coarsen(st, tp)
                log.add(r.mid, "roll", before, st.level, 1 + abs(st.level - before))
            else:
                even = multiplicity_even(c.F, r)
                if even:
                    if self._projects_inside(st, tp) and self.real_contact(st, tp):
                        log.add(r.mid, "collision", before, before, 1, degenerate=True)
                        break
                    t = tp
                    continue
                if self._projects_inside(st, tp) and self.real_contact(st, tp):
                    log.add(r.mid, "collision", before, before, 1)
                    break
                new, steps, kind = self.relocate(st, tp)
                if new is None:
                    log.add(r.mid, "collision", before, None, steps)
                    break
                st = new
                log.add(r.mid, kind, before, st.level, steps)
            self.state = st
            if on_event is not None:
                on_event(self, tp)
            t = tp
        self.state = st
        return log

    def _close(self, certs, end):
        for c in certs:
            if c.created is not None:
                self.history.append(Interval(c, c.created, Fraction(end)))

    def fire_bound_violations(self) -> list:
        """Certificates that failed more often than the degree of their polynomial."""
        return fire_bound_violations(self.fires)
