"""Scaling-law regressions of event counts over batches of runs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..kinetics.log import EventLog

MODELS = ("log", "sqrt", "quad")
MIN_LOGS = 4


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class Regression:
    model: str
    intercept: float
    slope: float
    r2: float
    xs: tuple
    ys: tuple

    def predict(self, x: float) -> float:
        return self.intercept + self.slope * x

    def to_dict(self) -> dict:
        return {"model": self.model, "intercept": self.intercept, "slope": self.slope, "r2": self.r2,
                "n": len(self.xs), "xs": list(self.xs), "ys": list(self.ys)}


def fit_linear(xs: Sequence[float], ys: Sequence[float], model: str = "linear") -> Regression:
    """Least-squares y = a + b x with the coefficient of determination."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 2 or np.ptp(x) == 0:
        raise InsufficientData("need at least two distinct predictor values")
    b, a = np.polyfit(x, y, 1)
    ss_res = float(((y - (a + b * x)) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return Regression(model, float(a), float(b), r2, tuple(map(float, x)), tuple(map(float, y)))


def predictor(log: EventLog, model: str) -> float:
    """log2(D/σ), sqrt(D/σ) or μ² from a log's separation statistics."""
    s = log.stats
    if s is None or s.sigma2 is None or s.sigma2 == 0:
        raise InsufficientData("log has no positive separation statistics")
    ratio = s.D / s.sigma
    if model == "log":
        return math.log2(ratio)
    if model == "sqrt":
        return math.sqrt(ratio)
    if model == "quad":
        return s.mu ** 2
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def event_count(log: EventLog) -> int:
    return len(log) - log.counts["collision"]


def emit_stats(logs: Sequence[EventLog], model: str = "log") -> Regression:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if len(logs) < MIN_LOGS:
        raise InsufficientData(f"need at least {MIN_LOGS} logs, got {len(logs)}")
    xs = [predictor(l, model) for l in logs]
    ys = [event_count(l) for l in logs]
    return fit_linear(xs, ys, model)


def load_logs(paths: Sequence) -> list[EventLog]:
    return [EventLog.from_dict(json.loads(Path(p).read_text())) for p in paths]
