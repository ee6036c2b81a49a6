import csv
import io
import json
from fractions import Fraction as F

import pytest

from sepkds.geometry import SeparationStats
from sepkds.kinetics.log import CSV_COLUMNS, EventLog, LogOrderError


def _log():
    log = EventLog()
    log.add(F(1, 3), "stab", 2, 3, 2)
    log.add(F(1, 2), "push", 3, 1, 3)
    log.add(F(1, 2), "roll", 1, 1)
    return log


def test_counts_and_steps():
    log = _log()
    assert len(log) == 3
    assert log.count("stab", "push") == 2
    assert log.total_steps == 6
    assert not log.collided and log.collision is None


def test_time_order_and_collision_are_final():
    log = _log()
    with pytest.raises(LogOrderError):
        log.add(F(1, 4), "roll")
    log.add(1, "collision")
    assert log.collision.time == 1
    with pytest.raises(LogOrderError):
        log.add(2, "roll")


def test_unknown_kind():
    with pytest.raises(ValueError):
        EventLog().add(0, "teleport")


def test_csv_rows_and_footer():
    log = _log()
    assert "#" not in log.to_csv()
    log.stats = SeparationStats(F(4), 64)
    log.stats.observe(F(1, 16))
    log.samples = 128
    rows = list(csv.reader(io.StringIO(log.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1] == ["0.33333333333333331", "stab", "2", "3", "2"]
    assert rows[4][0] == "# separation_stats"
    foot = rows[5]
    assert foot[0] == "#"
    assert [float(x) for x in foot[1:4]] == pytest.approx([2.0, 0.25, 8 ** 0.5])
    assert foot[4:] == ["64", "128"]


def test_json_round_trip_is_exact():
    log = _log()
    log.stats = SeparationStats(F(9), 10)
    log.stats.observe(F(1, 100))
    log.samples = 7
    back = EventLog.from_dict(json.loads(log.to_json()))
    assert [(e.time, e.kind, e.steps) for e in back.events] == [(e.time, e.kind, e.steps) for e in log.events]
    assert back.stats.D == pytest.approx(3) and back.stats.sigma == pytest.approx(0.1)
    assert back.samples == 7
    assert back.to_json() == log.to_json()
