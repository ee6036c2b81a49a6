"""Command line: run scenarios, render drawings, fit scaling laws.

Exit codes: 0 ok, 1 I/O failure, 2 parse error, 3 oracle mismatch,
4 insufficient data for a fit.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..hierarchy import build_compass
from ..hysteresis import build_inflated, greedy_kappa_clear, relative_path
from ..kinetics.oracle import OracleMismatch
from ..mixed import build_mixed
from .render import render_svg
from .run import run_scenario
from .scenario import ParseError, load_scenario
from .stats import MODELS, InsufficientData, emit_stats, load_logs

EXIT_OK, EXIT_IO, EXIT_PARSE, EXIT_MISMATCH, EXIT_DATA = 0, 1, 2, 3, 4
RENDER_KINDS = ("hierarchy", "mixed", "inflated", "path")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--oracle-samples", type=int, default=None, metavar="N",
                   help="background oracle samples per run")
    p.add_argument("--seed", type=int, default=None, metavar="S",
                   help="seed for generators that do not fix their own")
    p.add_argument("--out", default=".", metavar="DIR", help="directory for artifacts")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="sepkds", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="simulate a scenario and check it against the oracle")
    r.add_argument("scenario")
    d = sub.add_parser("render", parents=[common], help="draw a scenario's structure as SVG")
    d.add_argument("scenario")
    d.add_argument("--what", choices=RENDER_KINDS, default="hierarchy")
    s = sub.add_parser("stats", parents=[common], help="fit event counts of logged runs")
    s.add_argument("pattern", help="glob of *.events.json files")
    s.add_argument("--model", choices=MODELS, default="log")
    return ap


def _run(args) -> int:
    out = run_scenario(args.scenario, args.out, oracle_samples=args.oracle_samples, seed=args.seed)
    log = out.result.log
    counts = {k: v for k, v in log.counts.items() if v}
    print(f"{out.scenario.name}: {len(log)} events {counts}; oracle ok")
    for k, p in sorted(out.artifacts.items()):
        print(f"  {k}: {p}")
    return EXIT_OK


def _render(args) -> int:
    sc = load_scenario(args.scenario, args.seed)
    bodies = sc.build_bodies()
    polys = [b for b in bodies if not b.is_point]
    target = Path(args.out) / f"{sc.name}.{args.what}.svg"
    Path(args.out).mkdir(parents=True, exist_ok=True)
    if args.what == "hierarchy":
        render_svg(polys[0].H, target)
    elif args.what == "mixed":
        if len(polys) != 2:
            raise ParseError("mixed drawing needs two polygons", 1, 1)
        P, Q = polys
        t0 = P.frame.t0
        render_svg(build_mixed(build_compass(P.polygon), build_compass(Q.polygon.negated()),
                               P.frame.rotation_at(t0), Q.frame.rotation_at(t0)), target)
    elif args.what == "inflated":
        render_svg(build_inflated(build_compass(polys[0].polygon)), target)
    else:
        pts = [b for b in bodies if b.is_point]
        if not pts or not polys:
            raise ParseError("path drawing needs a point and a polygon", 1, 1)
        A, p = polys[0], pts[0]
        ts = [p.frame.t0 + (p.frame.t1 - p.frame.t0) * i / 256 for i in range(257)]
        path = [tuple(x) for x in relative_path(p, A, [float(t) for t in ts])]
        render_svg(greedy_kappa_clear(path, A.polygon), target, path=path, polygon=A.polygon)
    print(target)
    return EXIT_OK


def _stats(args) -> int:
    paths = sorted(glob.glob(args.pattern))
    reg = emit_stats(load_logs(paths), args.model)
    text = json.dumps(reg.to_dict(), indent=1, sort_keys=True)
    print(text)
    Path(args.out).mkdir(parents=True, exist_ok=True)
    (Path(args.out) / f"stats.{args.model}.json").write_text(text + "\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "render": _render, "stats": _stats}[args.command]
    try:
        return handler(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OracleMismatch as e:
        print(f"oracle mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except InsufficientData as e:
        print(f"insufficient data: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
