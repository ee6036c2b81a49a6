from fractions import Fraction as F

import pytest

from conftest import point_body, polygon_body
from sepkds.geometry import GeometryError, regular_polygon, validate_polygon
from sepkds.kinetics.lazy import InitialOverlap
from sepkds.kinetics.mixedcell import MixedCellKDS
from sepkds.kinetics.simulate import Setup, simulate

SQUARE = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])


def run(bodies, **kw):
    return simulate(Setup(tuple(bodies), "mixed", oracle_samples=1024, **kw))


def test_translating_pair_collides_at_oracle_time():
    A = polygon_body(regular_polygon(16))
    B = polygon_body(regular_polygon(16), {"o": [[5, -4], [F(1, 3), 0]]}, name="B")
    res = run([A, B])
    assert res.log.collided
    assert res.report.ok, res.report.mismatches
    assert res.log.count("cell-exit") >= 1


def test_translating_pair_agrees_with_lazy():
    A = polygon_body(regular_polygon(32))
    B = polygon_body(regular_polygon(16), {"o": [[5, -4], [F(1, 2), 0]]}, name="B")
    m = run([A, B]).log.collision.time
    lz = simulate(Setup((A, B), "lazy", oracle_samples=256)).log.collision.time
    assert abs(m - lz) < F(1, 10 ** 9)


def test_rotating_pair_without_contact():
    A = polygon_body(regular_polygon(16))
    B = polygon_body(SQUARE, {"o": [[4], [0]], "u": [-1, 2]}, name="B")
    res = run([A, B])
    assert not res.log.collided
    assert res.report.ok, res.report.mismatches
    assert res.kds.rebuilds >= 1


def test_needs_two_polygons():
    with pytest.raises(GeometryError):
        MixedCellKDS(polygon_body(SQUARE), point_body((3, 3)))


def test_initial_overlap_rejected():
    with pytest.raises(InitialOverlap):
        MixedCellKDS(polygon_body(SQUARE), polygon_body(SQUARE, {"o": [[1], [0]]}, name="B")).run()


def test_fault_injection_is_caught():
    A = polygon_body(regular_polygon(16))
    B = polygon_body(regular_polygon(16), {"o": [[5, -4], [F(1, 3), 0]]}, name="B")
    assert not run([A, B], skip_event=0).report.ok
