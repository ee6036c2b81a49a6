import math
from fractions import Fraction as F

import pytest

from sepkds.geometry import GeometryError
from sepkds.kinetics.motion import (DegreeTooHigh, EmptyHorizon, classify, linear_motion, make_motion,
                                    static_frame)


def test_defaults_to_static_unit_horizon():
    m = make_motion()
    assert (m.t0, m.t1) == (0, 1)
    assert classify(m) == "static"


@pytest.mark.parametrize("spec,kind", [
    ({"o": [[0, 1], [2, -1]]}, "linear translation"),
    ({"o": [[0, 1], [0, 0, 1]]}, "convex translation"),
    ({"o": [[0, 1], [0, 0, 0, 1]], "horizon": [-1, 1]}, "general translation"),
    ({"o": [[0, 1], [0, 0, 0, 1]], "horizon": [0, 1]}, "convex translation"),
    ({"u": [0, 1]}, "rigid"),
])
def test_classify(spec, kind):
    assert classify(make_motion(spec)) == kind


def test_degree_cap_and_horizon_checks():
    with pytest.raises(DegreeTooHigh):
        make_motion({"o": [[0] * 9 + [1], [0]]})
    make_motion({"o": [[0] * 9 + [1], [0]]}, max_degree=9)
    with pytest.raises(EmptyHorizon):
        make_motion({"horizon": [1, 0]})
    with pytest.raises(GeometryError):
        make_motion({"o": [[0]]})
    assert make_motion({"horizon": [2, 2]}).horizon == 0


def test_rotation_is_exact_and_orthonormal():
    m = make_motion({"u": [0, 1], "horizon": [-1, 1]})
    for t in (F(-1), F(1, 3), F(7, 9)):
        c, s = m.rotation_at(t)
        assert c * c + s * s == 1
    assert m.rotation_at(1) == (0, 1)  # u = 1 is a quarter turn


def test_place_and_to_body_are_inverse():
    m = make_motion({"o": [[1, 2], [F(1, 2), 0, -1]], "u": [F(1, 5), 1]})
    p = (F(3, 7), F(-2))
    for t in (F(0), F(1, 4), F(1)):
        assert m.to_body(m.place(p, t), t) == p


def test_homogeneous_point_matches_place():
    m = make_motion({"o": [[1, 2], [0, 0, 3]], "u": [0, F(1, 2)]})
    X, Y = F(2), F(-1, 3)
    nx, ny, w = m.point(X, Y)
    for t in (F(0), F(2, 3), F(1)):
        assert (nx(t) / w(t), ny(t) / w(t)) == m.place((X, Y), t)


def test_float_placement_matches_exact():
    m = make_motion({"o": [[0, 1], [1, -1]], "u": [0, 1]})
    pts = [(F(1), F(0)), (F(0), F(2))]
    got = m.place_float(pts, 0.5)
    for g, p in zip(got, pts):
        e = m.place(p, F(1, 2))
        assert g == pytest.approx([float(e[0]), float(e[1])])


def test_velocity_of_linear_motion():
    m = linear_motion((0, 0), (3, -4))
    assert m.velocity_float((F(5), F(5)), 0.5) == pytest.approx([3, -4])


def test_rotating_point_speed():
    m = make_motion({"u": [0, 1], "horizon": [-1, 1]})
    # angle 2 atan(t), so angular speed 2 / (1 + t^2)
    v = m.velocity_float((F(1), F(0)), 0.0)
    assert math.hypot(*v) == pytest.approx(2)


def test_static_frame_offset():
    m = static_frame(0, 2, offset=(1, -1))
    assert m.place((F(1), F(1)), 1) == (2, 0)
    assert m.tags == ("static",)
