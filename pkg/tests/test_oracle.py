import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import fly_by, point_body, polygon_body
from sepkds.geometry import point_polygon_dist2, polygon_distance, random_convex, regular_polygon, validate_polygon
from sepkds.kinetics import oracle

SQUARE = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])


def test_sample_times_are_midpoints():
    assert oracle.sample_times(0, 1, 4) == [F(1, 8), F(3, 8), F(5, 8), F(7, 8)]
    assert oracle.sample_times(1, 1, 4) == []


def test_point_gap_matches_exact_distance():
    P = random_convex(24, 6)
    A = polygon_body(P)
    rng = random.Random(1)
    for _ in range(50):
        p = (F(rng.randint(-300, 300), 100), F(rng.randint(-300, 300), 100))
        g = oracle.gap_at([A, point_body(p)], 0.0)
        d = math.sqrt(point_polygon_dist2(p, P))
        if P.contains(p):
            assert g <= 0
        else:
            assert g == pytest.approx(d, abs=1e-12)


def test_polygon_distance_matches_exact():
    P, Q = random_convex(16, 1), random_convex(12, 2).translated((5, 1))
    d = oracle.distances([polygon_body(P), polygon_body(Q, name="B")], [0.0])[0]
    assert d == pytest.approx(math.sqrt(polygon_distance(P, Q)[0]), abs=1e-12)


def test_sat_gap_sign_and_bound():
    A = polygon_body(regular_polygon(8))
    B = polygon_body(SQUARE, {"o": [[4, -6], [F(1, 2), 0]]}, name="B")
    ts = np.linspace(0, 1, 101)
    g, d = oracle.gaps([A, B], ts), oracle.distances([A, B], ts)
    assert (g <= d + 1e-12).all()
    for t, gi in zip(ts, g):
        assert (gi > 0) == (not oracle.exact_intersect([A, B], F(t)))


def test_first_contact_point_crossing():
    bodies = [polygon_body(SQUARE), point_body((0, 0), fly_by((-2, F(1, 2)), (3, 0)))]
    t = oracle.first_contact(bodies, 0, 1, 64, 2.0)
    assert abs(t - F(1, 3)) < F(1, 10 ** 15)


def test_first_contact_none_when_clear():
    bodies = [polygon_body(SQUARE), point_body((0, 0), fly_by((-2, 2), (4, 0)))]
    assert oracle.first_contact(bodies, 0, 1, 64, 2.0) is None


def test_first_contact_finds_grazing_touch_between_samples():
    # parabola y = 1 + (t - 0.3)^2 touches the top side only at t = 0.3
    m = {"o": [[0], [F(109, 100), F(-3, 5), 1]]}
    bodies = [polygon_body(SQUARE), point_body((0, 0), m)]
    t = oracle.first_contact(bodies, 0, 1, 8, 2.0)
    assert t is not None and abs(float(t) - 0.3) < 1e-6


def test_start_in_contact():
    bodies = [polygon_body(SQUARE), point_body((1, 0))]
    assert oracle.first_contact(bodies, 0, 1, 8, 2.0) == 0


def test_report_ok():
    r = oracle.OracleReport()
    assert r.ok
    r.mismatches.append((F(1), "x"))
    assert not r.ok
