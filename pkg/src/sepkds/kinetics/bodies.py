"""Moving bodies: a polygon with its hierarchy, or a single point."""

from __future__ import annotations

from typing import Optional

from ..geometry import ConvexPolygon, GeometryError, to_point
from ..hierarchy import BoomerangHierarchy, Envelope, EnvelopeEdge
from .motion import MotionFrame


class _PointEnvelope(Envelope):
    """Degenerate envelope of a point body: one vertex, no edges."""

    def __init__(self, p):
        super().__init__(0, [])
        self.p = p

    @property
    def vertices(self):
        return [self.p]

    def vertex(self, k):
        return self.p

    def extreme_vertex(self, d) -> int:
        return 0


class Body:
    def __init__(self, name: str, frame: MotionFrame, polygon: Optional[ConvexPolygon] = None,
                 hierarchy: Optional[BoomerangHierarchy] = None, point=None):
        if hierarchy is not None:
            polygon = hierarchy.polygon
        if (polygon is None) == (point is None):
            raise GeometryError("a body is either a polygon or a point")
        self.name = name
        self.frame = frame
        self.H = hierarchy
        self.polygon = polygon
        self.point = to_point(point) if point is not None else None
        self._penv = _PointEnvelope(self.point) if self.is_point else None
        self.real_vertices = frozenset(self.real_vertex_list())
        self.node_of_edge = {}
        if hierarchy is not None:
            n = len(hierarchy.edges)
            for t in hierarchy.nodes:
                for j in range(t.cut[0], t.cut[1] + 1):
                    self.node_of_edge[j % n] = t.id

    @property
    def is_point(self) -> bool:
        return self.point is not None

    @property
    def depth(self) -> int:
        return self.H.depth if self.H is not None else 0

    @property
    def n(self) -> int:
        return 1 if self.is_point else self.polygon.n

    def env(self, level: int) -> Envelope:
        if self.is_point:
            return self._penv
        return self.H.envelope(max(0, level))

    def real_vertex_list(self):
        return [self.point] if self.is_point else list(self.polygon.vertices)

    # exact placement
    def place(self, p, t):
        return self.frame.place(p, t)

    def dir_to_world(self, d, t):
        return self.frame.rotate_dir(d, t)

    def dir_to_body(self, d, t):
        c, s = self.frame.rotation_at(t)
        return (c * d[0] + s * d[1], -s * d[0] + c * d[1])

    def to_body(self, p, t):
        return self.frame.to_body(p, t)

    def real_edges_on(self, e: EnvelopeEdge):
        """Real polygon edges lying on the line of envelope edge e."""
        return [self.H.edges[i] for i in e.ids if self.H.edges[i].real]

    def world_polygon(self, t) -> ConvexPolygon:
        return ConvexPolygon(tuple(self.frame.place_many(self.real_vertex_list(), t)))

