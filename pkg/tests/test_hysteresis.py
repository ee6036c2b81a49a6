import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import fly_by, point_body, polygon_body
from sepkds.geometry import GeometryError, point_polygon_dist2, random_convex, regular_polygon, validate_polygon
from sepkds.hierarchy import build_compass, build_dudley
from sepkds.hysteresis import (BETA, KAPPA, HysteresisKDS, InsideInnermost, PathTouchesPolygon, build_inflated,
                               greedy_kappa_clear, min_inter_event_displacement, relative_path,
                               relocate_separating_edge, smallest_enclosing_disk)
from sepkds.kinetics.simulate import Setup, simulate

OCTAGON = regular_polygon(8)
SQUARE = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])


def test_constants():
    assert BETA == pytest.approx(2 * (1 + math.sqrt(2)))
    assert KAPPA == pytest.approx(5 + 4 * math.sqrt(2))


def test_inflated_octagon_levels():
    IH = build_inflated(build_compass(OCTAGON))
    assert IH.eps0 == pytest.approx(math.sqrt(2) - 1)
    for i in range(1, IH.depth + 1):
        assert IH.eps[i] == pytest.approx(IH.eps[i - 1] / 2)
    for i in range(IH.depth + 1):
        assert IH.hausdorff(i) <= IH.errors[i] + (1 + math.sqrt(2)) * IH.eps[i] + 1e-12
        assert all(IH.inflated(i).contains(v) for v in IH.base.envelope(i).vertices)
    for i in range(1, IH.depth + 1):
        assert all(IH.inflated(i - 1).contains(v) for v in IH.inflated(i).vertices)


def test_inflation_trivial_for_square():
    IH = build_inflated(build_compass(SQUARE))
    assert IH.trivial
    K = HysteresisKDS(polygon_body(SQUARE), point_body((3, 3)))
    assert not K.active


def test_inflation_needs_compass():
    with pytest.raises(GeometryError):
        build_inflated(build_dudley(OCTAGON))


def test_relocation_picks_coarsest_clear_level():
    IH = build_inflated(build_compass(random_convex(64, 1)))
    rng = random.Random(0)
    for _ in range(200):
        ang = rng.uniform(0, 2 * math.pi)
        r = rng.uniform(1.001, 1.6)
        p = (F(r * math.cos(ang)), F(r * math.sin(ang)))
        try:
            j, k, steps = relocate_separating_edge(IH, p)
        except InsideInnermost:
            assert not any(IH.outside(i, p) for i in range(IH.depth + 1))
            continue
        assert IH.outside(j, p) and all(not IH.outside(i, p) for i in range(j))
        e = IH.base.envelope(j).edges[k]
        n = e.normal
        margin = float((p[0] - e.start[0]) * n[0] + (p[1] - e.start[1]) * n[1]) / math.hypot(*map(float, n))
        assert margin >= IH.eps[j] - 1e-12
        assert steps == j + 1


def test_relocation_inside_innermost():
    IH = build_inflated(build_compass(OCTAGON))
    with pytest.raises(InsideInnermost):
        relocate_separating_edge(IH, (0, 0))


def _pair(structure, point_motion, P=OCTAGON, horizon=(0, 1)):
    A = polygon_body(P, {"horizon": list(horizon)})
    return simulate(Setup((A, point_body((0, 0), point_motion)), structure, oracle_samples=1024))


@pytest.mark.parametrize("start,vel", [((-3, F(6, 5)), (6, 0)), ((-3, 2), (6, F(-5, 2))), ((2, -3), (-1, 6))])
def test_hysteresis_fly_by_matches_oracle(start, vel):
    h = _pair("hysteresis", fly_by(start, vel))
    lz = _pair("lazy", fly_by(start, vel))
    assert h.report.ok, h.report.mismatches
    assert h.log.collided == lz.log.collided
    A, p = h.kds.bodies
    assert all(g.ratio >= 1 for g in min_inter_event_displacement(h.log, p, A) if g.precondition)


def test_displacement_between_events_exceeds_separation_over_beta():
    res = _pair("hysteresis", fly_by((-3, F(6, 5)), (6, 0)), P=random_convex(128, 2))
    A, p = res.kds.bodies
    for g in min_inter_event_displacement(res.log, p, A):
        if g.precondition:
            assert g.ratio >= 1


def test_corner_wiggle_defeats_lazy_not_hysteresis():
    # Chebyshev wiggle along the diagonal just outside the bounding-box corner
    a, b = F(1, 500), F(1, 100)
    t5 = [0, 5 * b, 0, -20 * b, 0, 16 * b]
    m = {"o": [[1 + a] + t5[1:], [1 + a] + [-c for c in t5[1:]]], "horizon": [-1, 1]}
    lz = _pair("lazy", m, horizon=(-1, 1))
    h = _pair("hysteresis", m, horizon=(-1, 1))
    assert lz.log.count("push") >= 3
    assert len(h.log) == 0
    assert h.report.ok and lz.report.ok


def test_relative_path_matches_exact_body_coordinates():
    A = polygon_body(SQUARE, {"o": [[1, 1], [0, 2]], "u": [0, F(1, 2)]})
    p = point_body((0, 0), fly_by((5, 5), (-1, 2)))
    ts = [0.0, 0.25, 1.0]
    got = relative_path(p, A, ts)
    for t, g in zip(ts, got):
        e = A.to_body(p.place(p.point, F(t)), F(t))
        assert g == pytest.approx([float(e[0]), float(e[1])])


def test_smallest_enclosing_disk_against_bruteforce():
    rng = random.Random(7)
    for _ in range(20):
        pts = [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 12))]
        c, r = smallest_enclosing_disk(pts)
        assert all(math.dist(c, p) <= r + 1e-9 for p in pts)
        best = math.inf
        for a, b in itertools.combinations_with_replacement(pts, 2):
            cc = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            rr = math.dist(a, b) / 2
            if all(math.dist(cc, p) <= rr + 1e-9 for p in pts):
                best = min(best, rr)
        for a, b, d in itertools.combinations(pts, 3):
            den = 2 * (a[0] * (b[1] - d[1]) + b[0] * (d[1] - a[1]) + d[0] * (a[1] - b[1]))
            if abs(den) < 1e-12:
                continue
            ux = ((a[0] ** 2 + a[1] ** 2) * (b[1] - d[1]) + (b[0] ** 2 + b[1] ** 2) * (d[1] - a[1])
                  + (d[0] ** 2 + d[1] ** 2) * (a[1] - b[1])) / den
            uy = ((a[0] ** 2 + a[1] ** 2) * (d[0] - b[0]) + (b[0] ** 2 + b[1] ** 2) * (a[0] - d[0])
                  + (d[0] ** 2 + d[1] ** 2) * (b[0] - a[0])) / den
            rr = math.dist((ux, uy), a)
            if all(math.dist((ux, uy), p) <= rr + 1e-9 for p in pts):
                best = min(best, rr)
        assert r == pytest.approx(best, abs=1e-9)


def test_kappa_clear_straight_segment():
    Q = validate_polygon([(-10, -2), (10, -2), (10, -1), (-10, -1)])
    dec = greedy_kappa_clear([(-2, 0), (2, 0)], Q)
    # a piece of length 2r needs r * kappa <= 1 at height 1 above the top side
    assert dec.size == math.ceil(4 * KAPPA / 2)


def test_kappa_clear_pieces_cover_and_are_clear():
    Q = random_convex(32, 3)
    t = np.linspace(0, 4 * math.pi, 400)
    path = list(zip((3 + t / 4) * np.cos(t), (3 + t / 4) * np.sin(t)))
    dec = greedy_kappa_clear(path, Q)
    assert dec.pieces[0].start == 0 and dec.pieces[-1].end == len(path) - 1
    for a, b in zip(dec.pieces, dec.pieces[1:]):
        assert a.end == b.start
    for p in dec.pieces:
        assert p.radius * KAPPA <= math.sqrt(float(point_polygon_dist2((F(p.center[0]), F(p.center[1])), Q))) + 1e-12


def test_kappa_clear_short_path_is_one_piece():
    assert greedy_kappa_clear([(10, 10), (F(1001, 100), 10)], OCTAGON).size == 1


def test_kappa_clear_rejects_touching_path():
    with pytest.raises(PathTouchesPolygon):
        greedy_kappa_clear([(-2, 0), (2, 0)], OCTAGON)
