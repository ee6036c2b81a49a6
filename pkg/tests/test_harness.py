import json
import re
from fractions import Fraction as F
from pathlib import Path

import pytest

from sepkds.geometry import regular_polygon, validate_polygon
from sepkds.harness import ParseError, main, parse_scenario, render_svg, run_scenario
from sepkds.harness.stats import InsufficientData, emit_stats, fit_linear, load_logs
from sepkds.hierarchy import build_compass
from sepkds.hysteresis import build_inflated
from sepkds.kinetics.log import CSV_COLUMNS
from sepkds.kinetics.oracle import OracleMismatch
from sepkds.mixed import build_mixed

ROOT = Path(__file__).resolve().parent.parent
SCEN = ROOT / "scenarios"


def _fly(y, name="fly", samples=256, extra=""):
    return (f'{{"name": "{name}", "bodies": [{{"polygon": {{"generator": "regular", "k": 64}}}},'
            f'{{"point": [0, 0], "motion": {{"o": [[-3, 6], ["{y}"]]}}}}], "oracle": {{"samples": {samples}}}{extra}}}')


# -- parsing ------------------------------------------------------------------


def test_parse_exact_literals():
    sc = parse_scenario('{"bodies": [{"polygon": {"vertices": [[0, 0], ["1.25", 0], [[1, 3], 1]]}}]}')
    assert set(sc.bodies[0].polygon.vertices) == {(0, 0), (F(5, 4), 0), (F(1, 3), 1)}


def test_structure_mapping():
    assert parse_scenario(_fly("1.5")).kds_structure == "lazy"
    assert parse_scenario(_fly("1.5", extra=', "structure": "inflated"')).kds_structure == "hysteresis"
    assert parse_scenario(_fly("1.5", extra=', "structure": "dudley"')).hierarchy_kind == "dudley"


@pytest.mark.parametrize("text,line", [
    ('{"bodies": [\n{"polygon": {"generator": "regular", "k": 8}, "motion": {"o": [[0, 1]]}}]}', 2),
    ('{"bodies": [{"polygon": {"generator": "regular", "k": 8},\n "motion": {"o": [[0, "x"], [0]]}}]}', 2),
    ('{"bodies": [\n  {"polygon": {"generator": "hexagonal"}}]}', 2),
    ('{\n"bodies": []}', 2),
    ('{"bodies": [{"polygon": {"generator": "regular", "k": 8}}],\n "structure": "octree"}', 1),
    ('{"bodies": [{"point": [0, 0]}, {"point": [1, 1]}]}', 1),
    ('{"bodies": [{"polygon": {"generator": "regular", "k": 8}}, {"point": [3, 3]}], "structure": "mixed"}', 1),
    ('{"bodies": [\n\n  {"polygon": 3 ]}', 3),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(ParseError) as e:
        parse_scenario(text)
    assert e.value.line == line and e.value.column >= 1


def test_malformed_motion_polynomial():
    with pytest.raises(ParseError, match="motion"):
        parse_scenario('{"bodies": [{"polygon": {"generator": "regular", "k": 8}, "motion": {"u": []}}]}')


def test_generators_are_deterministic_given_seed():
    t = '{"bodies": [{"polygon": {"generator": "random-convex", "n": 40}}]}'
    a = parse_scenario(t, seed=3).bodies[0].polygon.vertices
    assert a == parse_scenario(t, seed=3).bodies[0].polygon.vertices
    assert a != parse_scenario(t, seed=4).bodies[0].polygon.vertices


# -- runs ---------------------------------------------------------------------


def test_flyby_512_writes_csv_with_footer(tmp_path):
    out = run_scenario(SCEN / "flyby_512.json", tmp_path, oracle_samples=1024)
    lines = out.artifacts["csv"].read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[-2].startswith("# separation_stats")
    foot = lines[-1].split(",")
    assert float(foot[2]) == pytest.approx(0.125, abs=2e-3)  # s = D/16
    stats = json.loads(out.artifacts["stats"].read_text())
    assert stats["oracle"]["ok"] and stats["events"] == len(lines) - 3


def test_fault_hook_raises_mismatch(tmp_path):
    with pytest.raises(OracleMismatch) as e:
        run_scenario(SCEN / "fault_injection.json", tmp_path)
    assert e.value.time is not None
    assert (tmp_path / "fault_injection.stats.json").exists()


def test_run_needs_two_bodies(tmp_path):
    p = tmp_path / "one.json"
    p.write_text('{"bodies": [{"polygon": {"generator": "regular", "k": 8}}]}')
    with pytest.raises(ParseError):
        run_scenario(p, tmp_path)


def test_repeated_runs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        run_scenario(SCEN / "rotating_square.json", d, oracle_samples=512)
    for name in ("rotating_square.events.csv", "rotating_square.events.json", "rotating_square.stats.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


# -- CLI ----------------------------------------------------------------------


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", str(SCEN / "mixed_16.json"), "--out", str(tmp_path), "--oracle-samples", "512"]) == 0
    assert main(["run", str(SCEN / "fault_injection.json"), "--out", str(tmp_path)]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"bodies": [\n  {"polygon": {"generator": "regular", "k": 8}} 1]}')
    assert main(["run", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.json")]) == 1
    assert main(["stats", str(tmp_path / "*.events.json"), "--out", str(tmp_path)]) == 4


def test_cli_seed_flag_changes_generated_polygon(tmp_path):
    p = tmp_path / "r.json"
    p.write_text('{"bodies": [{"polygon": {"generator": "random-convex", "n": 24}},'
                 '{"point": [0, 0], "motion": {"o": [[-3, 6], [2]]}}], "oracle": {"samples": 128}}')
    main(["run", str(p), "--seed", "1", "--out", str(tmp_path / "s1")])
    main(["run", str(p), "--seed", "2", "--out", str(tmp_path / "s2")])
    s1 = json.loads((tmp_path / "s1" / "r.stats.json").read_text())
    s2 = json.loads((tmp_path / "s2" / "r.stats.json").read_text())
    assert s1["separation_stats"] != s2["separation_stats"]


@pytest.mark.parametrize("what", ["hierarchy", "mixed", "inflated", "path"])
def test_cli_render(tmp_path, what):
    scen = {"mixed": "mixed_16.json", "path": "inflated_octagon.json"}.get(what, "flyby_512.json")
    assert main(["render", str(SCEN / scen), "--what", what, "--out", str(tmp_path)]) == 0
    svg = next(tmp_path.glob(f"*.{what}.svg")).read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


# -- drawings -----------------------------------------------------------------


def test_octagon_hierarchy_svg_shows_four_triangles(tmp_path):
    svg = render_svg(build_compass(regular_polygon(8, half_step=True)), tmp_path / "o.svg").read_text()
    assert len(re.findall(r'class="triangle level-0"', svg)) == 4


def test_depth_zero_hierarchy_svg_is_rectangle_only(tmp_path):
    sq = validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    svg = render_svg(build_compass(sq), tmp_path / "s.svg").read_text()
    assert 'class="rectangle"' in svg and "triangle" not in svg


def test_mixed_svg_legend_matches_cell_counts(tmp_path):
    P = regular_polygon(16)
    M = build_mixed(build_compass(P), build_compass(P.negated()))
    svg = render_svg(M, tmp_path / "m.svg").read_text()
    counts = M.counts()
    for kind in ("triangle", "parallelogram"):
        assert len(re.findall(f'class="{kind}"', svg)) == counts[kind]
        assert f"{kind} ({counts[kind]})" in svg


def test_inflated_svg_levels(tmp_path):
    IH = build_inflated(build_compass(regular_polygon(8)))
    svg = render_svg(IH, tmp_path / "i.svg").read_text()
    assert len(re.findall(r'class="inflated level-\d+"', svg)) == IH.depth + 1


def test_render_rejects_unknown_objects(tmp_path):
    with pytest.raises(TypeError):
        render_svg(42, tmp_path / "x.svg")


# -- regression fits ----------------------------------------------------------


def test_fit_linear_exact_line():
    r = fit_linear([1, 2, 3, 4], [3, 5, 7, 9])
    assert r.slope == pytest.approx(2) and r.intercept == pytest.approx(1) and r.r2 == pytest.approx(1)
    assert r.predict(10) == pytest.approx(21)


def test_emit_stats_needs_four_logs(tmp_path):
    paths = []
    for k, y in enumerate(("1.5", "1.25", "1.125")):
        p = tmp_path / f"f{k}.json"
        p.write_text(_fly(y, name=f"f{k}"))
        paths.append(run_scenario(p, tmp_path).artifacts["json"])
    with pytest.raises(InsufficientData):
        emit_stats(load_logs(paths), "log")
    p = tmp_path / "f3.json"
    p.write_text(_fly("1.0625", name="f3"))
    paths.append(run_scenario(p, tmp_path).artifacts["json"])
    r = emit_stats(load_logs(paths), "log")
    assert len(r.xs) == 4 and r.xs == tuple(sorted(r.xs))
    with pytest.raises(ValueError):
        emit_stats(load_logs(paths), "cubic")
