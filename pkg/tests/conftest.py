from fractions import Fraction as F

from sepkds.hierarchy import build_compass, build_dudley
from sepkds.kinetics.bodies import Body
from sepkds.kinetics.motion import make_motion

BUILDERS = {"compass": build_compass, "dudley": build_dudley}


def polygon_body(P, motion=None, kind="compass", name="A"):
    return Body(name, make_motion(motion), hierarchy=BUILDERS[kind](P))


def point_body(p, motion=None, name="p"):
    return Body(name, make_motion(motion), point=p)


def fly_by(start, velocity, horizon=(0, 1)):
    """Linear point motion spec with the point at the origin of its frame."""
    return {"o": [[start[0], velocity[0]], [start[1], velocity[1]]], "horizon": list(horizon)}


def q(x):
    return F(x)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
