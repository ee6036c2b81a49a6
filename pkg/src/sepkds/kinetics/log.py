"""Event logs and separation statistics."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..geometry import SeparationStats

KINDS = ("stab", "push", "roll", "cell-exit", "page-turn", "collapse", "expand", "collision")
CSV_COLUMNS = ("time", "kind", "level_before", "level_after", "steps")


class LogOrderError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    time: Fraction
    kind: str
    level_before: Optional[int]
    level_after: Optional[int]
    steps: int
    degenerate: bool = False

    def row(self):
        lv = lambda x: "" if x is None else str(x)
        return (_fmt(self.time), self.kind, lv(self.level_before), lv(self.level_after), str(self.steps))


def _fmt(t) -> str:
    return format(float(t), ".17g")


@dataclass
class EventLog:
    events: list = field(default_factory=list)
    counts: dict = field(default_factory=lambda: {k: 0 for k in KINDS})
    stats: Optional[SeparationStats] = None
    samples: int = 0
    meta: dict = field(default_factory=dict)

    def add(self, time, kind, level_before=None, level_after=None, steps=1, degenerate=False) -> Event:
        if kind not in self.counts:
            raise ValueError(f"unknown event kind {kind!r}")
        if self.collided:
            raise LogOrderError("no events after a collision")
        time = Fraction(time)
        if self.events and time < self.events[-1].time:
            raise LogOrderError(f"event at {float(time)} precedes {float(self.events[-1].time)}")
        ev = Event(time, kind, level_before, level_after, int(steps), degenerate)
        self.events.append(ev)
        self.counts[kind] += 1
        return ev

    def __len__(self):
        return len(self.events)

    @property
    def collided(self) -> bool:
        return self.counts["collision"] > 0

    @property
    def collision(self) -> Optional[Event]:
        return self.events[-1] if self.collided else None

    @property
    def total_steps(self) -> int:
        return sum(e.steps for e in self.events)

    def count(self, *kinds) -> int:
        kinds = kinds or KINDS
        return sum(self.counts[k] for k in kinds)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for e in self.events:
            w.writerow(e.row())
        if self.stats is not None:
            # footer: comment rows so plain CSV readers can skip them
            s = self.stats
            w.writerow(("# separation_stats", "D", "sigma", "mu", "n", "samples"))
            w.writerow(("#", _fmt(s.D), _fmt(s.sigma), _fmt(s.mu), str(s.n), str(self.samples)))
        return buf.getvalue()

    def to_dict(self):
        return {
            "meta": self.meta,
            "counts": dict(self.counts),
            "total_steps": self.total_steps,
            "events": [{"time": float(e.time), "time_exact": str(e.time), "kind": e.kind,
                        "level_before": e.level_before, "level_after": e.level_after,
                        "steps": e.steps, "degenerate": e.degenerate} for e in self.events],
            "separation_stats": None if self.stats is None else dict(self.stats.as_dict(), samples=self.samples),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "EventLog":
        log = cls(meta=dict(d.get("meta", {})))
        for e in d.get("events", []):
            log.add(Fraction(e["time_exact"]), e["kind"], e["level_before"], e["level_after"],
                    e["steps"], e.get("degenerate", False))
        s = d.get("separation_stats")
        if s:
            log.stats = SeparationStats(Fraction(s["D"]) ** 2, s["n"])
            if s["sigma"] is not None and s["sigma"] != float("inf"):
                log.stats.observe(Fraction(s["sigma"]) ** 2)
            log.samples = s.get("samples", 0)
        return log
