"""Run a KDS over its horizon and check it against the brute-force oracle."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..geometry import SeparationStats, diameter
from . import oracle
from .active import ActiveTriangleKDS
from .lazy import LazyKDS, fire_bound_violations
from .log import EventLog
from .mixedcell import MixedCellKDS

STRUCTURES = ("lazy", "active-triangle", "mixed", "hysteresis")
DEFAULT_SAMPLES = 4096
VALIDITY_POINTS = 16
TIME_TOLERANCE = Fraction(1, 10**6)


@dataclass
class Setup:
    bodies: tuple
    structure: str = "lazy"
    oracle_samples: int = DEFAULT_SAMPLES
    verify: bool = True
    descent: str = "level"
    skip_event: Optional[int] = None  # test hook: drop this certificate failure (0-based)
    inflated: object = None  # InflatedHierarchy for the hysteresis structure


@dataclass
class SimResult:
    log: EventLog
    report: oracle.OracleReport
    kds: object
    checks: dict = field(default_factory=dict)


def make_kds(setup: Setup):
    a, b = setup.bodies
    s = setup.structure
    if s == "lazy":
        return LazyKDS(a, b)
    if s == "active-triangle":
        return ActiveTriangleKDS(a, b, descent=setup.descent)
    if s == "mixed":
        return MixedCellKDS(a, b)
    if s == "hysteresis":
        from ..hysteresis import HysteresisKDS
        return HysteresisKDS(a, b, setup.inflated)
    raise ValueError(f"unknown structure {s!r}; expected one of {STRUCTURES}")


def _skipper(index: int):
    seen = [0]

    def hook(cert, root):
        hit = seen[0] == index
        seen[0] += 1
        return hit
    return hook


def simulate(setup: Setup) -> SimResult:
    kds = make_kds(setup)
    if setup.skip_event is not None:
        kds.skip_hook = _skipper(setup.skip_event)
    a, b = setup.bodies
    log = EventLog(meta={"structure": setup.structure, "bodies": [a.name, b.name]})
    d2 = max(diameter(x.polygon) if not x.is_point else Fraction(0) for x in setup.bodies)
    log.stats = SeparationStats(d2, max(x.n for x in setup.bodies))
    kds.run(log)
    report = oracle.OracleReport()
    if setup.verify:
        report = verify(kds, log, setup.bodies, setup.oracle_samples)
    return SimResult(log, report, kds)


def _scale(bodies) -> float:
    ext = 1.0
    for x in bodies:
        pts = np.asarray([[float(c) for c in v] for v in x.real_vertex_list()])
        ext = max(ext, float(np.abs(pts).max()))
    return ext


def verify(kds, log: EventLog, bodies, samples: int) -> oracle.OracleReport:
    """Soundness, completeness and certificate validity against the oracle.

    Every mismatch is recorded as (time, message); the report is ok when
    there are none.
    """
    rep = oracle.OracleReport(samples=samples)
    t0, t1 = kds.t0, kds.t1
    H = t1 - t0
    scale = _scale(bodies)
    hit = log.collision
    t_stop = hit.time if hit is not None else t1
    times = sorted(set(oracle.sample_times(t0, t1, samples)) | {e.time for e in log.events})
    if times:
        ft = [float(t) for t in times]
        g = oracle.gaps(bodies, ft)
        d = oracle.distances(bodies, ft)
        rep.min_gap = float(g.min())
        for t, gi, di in zip(times, g, d):
            if t <= t_stop:
                log.stats.observe(Fraction(float(di)) ** 2)
                log.samples += 1
            if t < t_stop - TIME_TOLERANCE * H and not oracle._decide(bodies, t, float(gi), scale):
                rep.mismatches.append((t, "certified separation but the bodies touch"))
    rep.contact = oracle.first_contact(bodies, t0, t1, samples, scale) if H > 0 else None
    if hit is not None and rep.contact is None:
        rep.mismatches.append((hit.time, "collision reported but the oracle finds no contact"))
    elif hit is None and rep.contact is not None:
        rep.mismatches.append((rep.contact, "contact missed"))
    elif hit is not None and abs(hit.time - rep.contact) > TIME_TOLERANCE * H:
        rep.mismatches.append((hit.time, f"collision time differs from oracle {float(rep.contact)}"))
    for iv in kds.history:
        bad = _invalid_point(iv, times)
        if bad is not None:
            rep.mismatches.append((bad, f"{iv.cert.kind} certificate {iv.cert.features} fails inside its interval"))
    for key in fire_bound_violations(kds.fires):
        rep.mismatches.append((None, f"certificate {key[:2]} fired {kds.fires[key]} times"))
    rep.mismatches.sort(key=lambda m: (m[0] is None, m[0] if m[0] is not None else 0))
    return rep


def _invalid_point(iv, samples=()) -> Optional[Fraction]:
    """First check point inside the interval where the certificate's sign is wrong.

    Check points are 16 evenly spaced interior rationals plus every
    background sample falling strictly inside the interval.
    """
    a, b = iv.start, iv.end
    if b is None or b <= a:
        return None
    c = iv.cert
    pts = [a + (b - a) * Fraction(j, VALIDITY_POINTS + 1) for j in range(1, VALIDITY_POINTS + 1)]
    lo, hi = bisect.bisect_right(samples, a), bisect.bisect_left(samples, b)
    pts = sorted(set(pts).union(samples[lo:hi]))
    for t in pts:
        v = c.F(t)
        if v < 0 or (c.strict and v == 0):
            return t
    return None
