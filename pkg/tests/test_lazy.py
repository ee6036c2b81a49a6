from fractions import Fraction as F

import pytest

from conftest import fly_by, point_body, polygon_body
from sepkds.geometry import GeometryError, random_convex, regular_polygon, validate_polygon
from sepkds.kinetics.lazy import InitialOverlap, LazyKDS
from sepkds.kinetics.simulate import Setup, simulate

SQUARE = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
N = 1024


def run(bodies, structure="lazy", **kw):
    return simulate(Setup(tuple(bodies), structure, oracle_samples=N, **kw))


def test_point_fly_by_has_no_collision():
    res = run([polygon_body(regular_polygon(64)), point_body((0, 0), fly_by((-3, F(21, 10)), (6, 0)))])
    assert not res.log.collided
    assert res.report.ok, res.report.mismatches
    assert res.log.count("stab", "push") >= 1


def test_point_collision_time_is_exact_crossing():
    # the point crosses x = -1 at t = 1/3
    res = run([polygon_body(SQUARE), point_body((0, 0), fly_by((-2, F(1, 2)), (3, 0)))])
    assert res.log.collided
    assert abs(res.log.collision.time - F(1, 3)) < F(1, 10 ** 12)
    assert res.report.ok, res.report.mismatches


def test_collision_is_the_last_event():
    res = run([polygon_body(random_convex(128, 4)), point_body((0, 0), fly_by((-3, F(1, 7)), (5, 0)))])
    assert res.log.events[-1].kind == "collision"
    assert res.report.ok


def test_translating_polygon_pair():
    A = polygon_body(regular_polygon(16))
    B = polygon_body(regular_polygon(16), {"o": [[5, -4], [F(1, 3), 0]]}, name="B")
    res = run([A, B])
    assert res.log.collided
    assert res.report.ok, res.report.mismatches


def test_rotating_square_near_polygon():
    A = polygon_body(regular_polygon(32))
    B = polygon_body(SQUARE, {"o": [[4], [0]], "u": [-1, 2], "horizon": [0, 1]}, name="B")
    res = run([A, B])
    assert not res.log.collided
    assert res.log.count("roll") >= 1
    assert res.report.ok, res.report.mismatches


def test_dudley_hierarchy_fly_by():
    res = run([polygon_body(random_convex(64, 2), kind="dudley"), point_body((0, 0), fly_by((-3, 2), (6, -1)))])
    assert res.report.ok, res.report.mismatches


def test_levels_logged_are_within_depth():
    A = polygon_body(random_convex(256, 1))
    res = run([A, point_body((0, 0), fly_by((-3, F(3, 2)), (6, 0)))])
    for e in res.log.events:
        for lv in (e.level_before, e.level_after):
            assert lv is None or 0 <= lv <= A.depth
        assert e.steps >= 1


def test_certificate_fires_within_degree():
    res = run([polygon_body(regular_polygon(64)), point_body((0, 0), fly_by((-3, 2), (6, -2)))])
    assert res.kds.fire_bound_violations() == []


def test_zero_length_horizon_logs_nothing():
    res = run([polygon_body(SQUARE, {"horizon": [1, 1]}), point_body((5, 5), {"horizon": [1, 1]})])
    assert len(res.log) == 0 and res.report.ok


def test_two_points_rejected():
    with pytest.raises(GeometryError):
        LazyKDS(point_body((0, 0)), point_body((1, 1)))


def test_initial_overlap_rejected():
    with pytest.raises(InitialOverlap):
        LazyKDS(polygon_body(SQUARE), point_body((0, 0))).run()


def test_fault_injection_is_caught():
    bodies = [polygon_body(SQUARE), point_body((0, 0), fly_by((-2, F(1, 2)), (3, 0)))]
    res = run(bodies, skip_event=0)
    assert not res.report.ok


def test_grazing_touch_is_a_degenerate_collision():
    # y = 1 + (t - 3/10)^2 touches the top side at t = 3/10 and leaves again
    m = {"o": [[0], [F(109, 100), F(-3, 5), 1]]}
    res = run([polygon_body(SQUARE), point_body((0, 0), m)])
    hit = res.log.collision
    assert hit is not None and hit.degenerate
    assert abs(hit.time - F(3, 10)) < F(1, 10 ** 12)
    assert res.report.ok, res.report.mismatches
