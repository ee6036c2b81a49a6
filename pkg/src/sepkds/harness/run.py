"""Run one scenario file end to end and write its artifacts."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..kinetics.oracle import OracleMismatch
from ..kinetics.simulate import Setup, SimResult, simulate
from .scenario import ParseError, Scenario, load_scenario
from .stats import event_count


@dataclass
class RunOutcome:
    scenario: Scenario
    result: SimResult
    artifacts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.result.report.ok


def _finite(x: float):
    return x if math.isfinite(x) else None


def summary(sc: Scenario, res: SimResult) -> dict:
    log, rep = res.log, res.report
    s = log.stats
    inputs = {}
    if s is not None and s.sigma2:
        inputs = {"log2_D_over_sigma": math.log2(s.D / s.sigma), "sqrt_D_over_sigma": math.sqrt(s.D / s.sigma),
                  "mu2": s.mu ** 2}
    hit = log.collision
    return {
        "scenario": sc.name,
        "structure": sc.structure,
        "kds": sc.kds_structure,
        "hierarchy": sc.hierarchy_kind,
        "counts": dict(log.counts),
        "events": event_count(log),
        "total_steps": log.total_steps,
        "collision_time": None if hit is None else str(hit.time),
        "separation_stats": None if s is None else {k: _finite(v) for k, v in s.as_dict().items()},
        "regression_inputs": inputs,
        "oracle": {
            "enabled": sc.oracle,
            "samples": rep.samples,
            "ok": rep.ok,
            "contact": None if rep.contact is None else str(rep.contact),
            "mismatches": [[None if t is None else str(t), msg] for t, msg in rep.mismatches[:20]],
        },
    }


def run_scenario(path, out_dir=None, *, oracle_samples: Optional[int] = None, seed: Optional[int] = None,
                 scenario: Optional[Scenario] = None) -> RunOutcome:
    """Simulate a scenario, write CSV/JSON artifacts and raise OracleMismatch on disagreement.

    The artifacts are written before the mismatch is raised so failing runs
    can be inspected.
    """
    sc = scenario if scenario is not None else load_scenario(path, seed)
    if len(sc.bodies) != 2:
        raise ParseError("a run needs two bodies (a polygon and a point, or two polygons)", 1, 1)
    samples = sc.oracle_samples if oracle_samples is None else oracle_samples
    setup = Setup(sc.build_bodies(), sc.kds_structure, oracle_samples=samples, verify=sc.oracle,
                  descent=sc.descent, skip_event=sc.skip_event)
    res = simulate(setup)
    res.log.meta.update({"scenario": sc.name, "structure": sc.structure})
    out = RunOutcome(sc, res)
    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        if "csv" in sc.outputs:
            out.artifacts["csv"] = d / f"{sc.name}.events.csv"
            out.artifacts["csv"].write_text(res.log.to_csv())
        if "json" in sc.outputs:
            out.artifacts["json"] = d / f"{sc.name}.events.json"
            out.artifacts["json"].write_text(res.log.to_json())
        out.artifacts["stats"] = d / f"{sc.name}.stats.json"
        out.artifacts["stats"].write_text(json.dumps(summary(sc, res), indent=1, sort_keys=True))
    if not res.report.ok:
        t, msg = res.report.mismatches[0]
        when = "" if t is None else f" at t = {float(t):.17g}"
        raise OracleMismatch(f"oracle disagreement{when}: {msg}", t)
    return out
