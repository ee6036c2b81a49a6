import math
import random
from fractions import Fraction as F

import pytest

from sepkds.geometry import (ConvexPolygon, Empty, NonConvex, SeparationStats, bounding_rectangle, diameter,
                             diameter_bruteforce, minkowski_sum, offset_polygon, point_polygon_dist2,
                             polygon_distance, polygons_intersect, random_convex, rational_on_circle,
                             regular_polygon, support_value, to_fraction, validate_polygon)

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_validate_square():
    P = validate_polygon(SQUARE)
    assert P.n == 4
    assert P.vertices[0] == (0, 0)


def test_validate_drops_collinear_vertex():
    P = validate_polygon([(0, 0), (1, 0), (2, 0), (2, 1)])
    assert P.n == 3
    assert (1, 0) not in P.vertices


def test_validate_reverses_clockwise_input():
    P = validate_polygon(list(reversed(SQUARE)))
    assert P.area2() > 0


def test_validate_rejects_crossing_order():
    with pytest.raises(NonConvex):
        validate_polygon([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_validate_rejects_empty():
    with pytest.raises(Empty):
        validate_polygon([])


def test_decimal_strings_are_exact():
    assert to_fraction("1.25") == F(5, 4)
    assert to_fraction([1, 3]) == F(1, 3)


def test_minkowski_of_squares():
    P = validate_polygon(SQUARE)
    S = minkowski_sum(P, P)
    assert set(S.vertices) == {(0, 0), (2, 0), (2, 2), (0, 2)}


def test_minkowski_with_point_translates():
    P = validate_polygon([(0, 0), (2, 0), (1, 1)])
    S = minkowski_sum(P, validate_polygon([(3, -1)]))
    assert set(S.vertices) == {(3, -1), (5, -1), (4, 0)}


def test_minkowski_hexagon_with_negation_matches_support_oracle():
    H = regular_polygon(6)
    S = minkowski_sum(H, H.negated())
    assert set(S.vertices) == {(-x, -y) for x, y in S.vertices}
    for v in S.vertices:
        # v must be the sum of the vertex pair maximizing the inner product with some outward direction
        sums = {(a[0] + b[0], a[1] + b[1]) for a in H.vertices for b in H.negated().vertices}
        assert v in sums


def test_minkowski_commutes_and_support_is_additive():
    P, Q = random_convex(12, 1), random_convex(9, 2)
    A, B = minkowski_sum(P, Q), minkowski_sum(Q, P)
    assert set(A.vertices) == set(B.vertices)
    rng = random.Random(5)
    for _ in range(100):
        u = (F(rng.randint(-50, 50)), F(rng.randint(-50, 50)))
        assert support_value(A, u) == support_value(P, u) + support_value(Q, u)


def test_distance_parallel_squares():
    P = validate_polygon(SQUARE)
    d2, _ = polygon_distance(P, P.translated((3, 0)))
    assert d2 == 4


def test_distance_overlap_is_zero():
    P = validate_polygon(SQUARE)
    d2, _ = polygon_distance(P, P.translated((F(1, 2), F(1, 2))))
    assert d2 == 0
    assert polygons_intersect(P, P.translated((F(1, 2), 0)))


def test_distance_square_triangle_corner():
    d2, _ = polygon_distance(validate_polygon(SQUARE), validate_polygon([(2, 2), (3, 2), (2, 3)]))
    assert d2 == 2


def test_distance_symmetry_and_translation_along_witness():
    P = validate_polygon(SQUARE)
    Q = validate_polygon([(3, 0), (4, 0), (4, 1), (3, 1)])
    d2, _ = polygon_distance(P, Q)
    assert polygon_distance(Q, P)[0] == d2
    # moving Q toward P by t along the separating direction shortens the gap by t
    t = F(1, 2)
    assert polygon_distance(P, Q.translated((-t, 0)))[0] == (2 - t) ** 2


def test_offset_square():
    P = validate_polygon(SQUARE)
    O = offset_polygon(P, 1.0, margin=0.0)
    xs = sorted(v[0] for v in O.vertices)
    ys = sorted(v[1] for v in O.vertices)
    assert xs[0] == pytest.approx(-1) and xs[-1] == pytest.approx(2)
    assert ys[0] == pytest.approx(-1) and ys[-1] == pytest.approx(2)


def test_offset_point_with_compass_directions():
    pt = ConvexPolygon(((F(0), F(0)),), (((1, 0), (0, 1), (-1, 0), (0, -1)),))
    O = offset_polygon(pt, 1.0, margin=0.0)
    assert O.n == 4
    assert sorted(round(abs(c), 9) for v in O.vertices for c in v) == [1.0] * 8


def test_offset_octagon_distance_bounds():
    P = regular_polygon(8)
    eps = 0.1
    O = offset_polygon(P, eps)
    theta = 3 * math.pi / 4  # interior angle of the octagon
    upper = eps / math.sin(theta / 2)
    rng = random.Random(0)
    for _ in range(1000):
        k = rng.randrange(O.n)
        a, b = O.vertices[k], O.vertices[(k + 1) % O.n]
        s = rng.random()
        p = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
        d = math.sqrt(float(point_polygon_dist2((F(p[0]), F(p[1])), P)))
        assert eps - 1e-9 <= d <= upper + 1e-9


def test_offset_nesting():
    P = random_convex(20, 4)
    A, B = offset_polygon(P, 0.05), offset_polygon(P, 0.2)
    assert all(A.contains(v) for v in P.vertices)
    assert all(B.contains(v) for v in A.vertices)


def test_bounding_rectangle():
    assert set(bounding_rectangle(validate_polygon(SQUARE)).vertices) == set(SQUARE)
    R = bounding_rectangle(validate_polygon([(0, 0), (2, 0), (1, 1)]))
    assert set(R.vertices) == {(0, 0), (2, 0), (2, 1), (0, 1)}


def test_bounding_rectangle_touches_every_side():
    P = random_convex(64, 9)
    R = bounding_rectangle(P)
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    assert {v[0] for v in R.vertices} == {min(xs), max(xs)}
    assert {v[1] for v in R.vertices} == {min(ys), max(ys)}


def test_diameter():
    assert diameter(validate_polygon(SQUARE)) == 2
    assert diameter(validate_polygon([(5, 5)])) == 0
    P = regular_polygon(16)
    assert diameter(P) == 4 == diameter_bruteforce(P)


def test_diameter_matches_bruteforce_on_random_polygons():
    for seed in range(10):
        P = random_convex(30, seed)
        assert diameter(P) == diameter_bruteforce(P)


def test_rational_circle_points_are_exact():
    x, y = rational_on_circle(1.0, F(3))
    assert x * x + y * y == 9


def test_separation_stats_mu():
    s = SeparationStats(F(4), 512)
    assert s.mu == 512
    s.observe(F(1, 64) ** 2)
    assert s.sigma == pytest.approx(1 / 64)
    assert s.mu == pytest.approx(math.sqrt(2 * 64))
    assert s.mu <= s.n
