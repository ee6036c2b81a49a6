"""Scenario files: one JSON document describing bodies, motions and the structure to run.

Numbers are exact: JSON integers and decimals are read as rationals,
strings like "1/3" or "0.125" are parsed exactly, and a two-integer list
[num, den] is a rational literal wherever a single number is expected.

    {
      "bodies": [
        {"name": "Q", "polygon": {"generator": "regular", "k": 512}},
        {"name": "p", "point": [3, "-1/2"],
         "motion": {"o": [[-4, 1], ["1/8"]], "horizon": [0, 8]}}
      ],
      "structure": "compass",
      "oracle": {"samples": 4096}
    }
"""

from __future__ import annotations

import json
import json.scanner
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..geometry import (ConvexPolygon, GeometryError, parabolic_cap, random_convex, regular_polygon,
                        validate_polygon)
from ..hierarchy import build_compass, build_dudley
from ..kinetics.bodies import Body
from ..kinetics.motion import make_motion, static_frame
from ..kinetics.simulate import DEFAULT_SAMPLES

STRUCTURES = ("compass", "dudley", "lazy", "active-triangle", "mixed", "inflated")
GENERATORS = ("regular", "random-convex", "parabolic-cap", "literal")
DEFAULT_SEED = 0


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class _Obj(dict):
    pos = 0


class _Arr(list):
    pos = 0


def _decoder() -> json.JSONDecoder:
    """A JSON decoder that reads decimals exactly and remembers where containers start."""
    dec = json.JSONDecoder(parse_float=Fraction)
    parse_object, parse_array = dec.parse_object, dec.parse_array

    def obj(s_and_end, *args):
        val, end = parse_object(s_and_end, *args)
        out = _Obj(val)
        out.pos = s_and_end[1] - 1
        return out, end

    def arr(s_and_end, *args):
        val, end = parse_array(s_and_end, *args)
        out = _Arr(val)
        out.pos = s_and_end[1] - 1
        return out, end

    dec.parse_object, dec.parse_array = obj, arr
    dec.scan_once = json.scanner.py_make_scanner(dec)
    return dec


@dataclass
class BodySpec:
    name: str
    polygon: Optional[ConvexPolygon] = None
    point: Optional[tuple] = None
    motion: dict = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    bodies: list
    structure: str = "compass"
    hierarchy: str = "compass"  # hierarchy kind for lazy and active-triangle runs
    descent: str = "level"
    oracle_samples: int = DEFAULT_SAMPLES
    oracle: bool = True
    outputs: tuple = ("csv", "json")
    skip_event: Optional[int] = None

    @property
    def kds_structure(self) -> str:
        """Name of the KDS the structure choice maps to."""
        return {"compass": "lazy", "dudley": "lazy", "lazy": "lazy", "active-triangle": "active-triangle",
                "mixed": "mixed", "inflated": "hysteresis"}[self.structure]

    @property
    def hierarchy_kind(self) -> str:
        if self.structure in ("compass", "dudley"):
            return self.structure
        if self.structure in ("mixed", "inflated"):
            return "compass"
        return self.hierarchy

    def build_bodies(self) -> tuple:
        """Bodies with hierarchies of the scenario's kind and validated motions."""
        build = build_compass if self.hierarchy_kind == "compass" else build_dudley
        out = []
        for b in self.bodies:
            frame = make_motion(b.motion) if b.motion else static_frame(*self._horizon())
            if b.point is not None:
                out.append(Body(b.name, frame, point=b.point))
            else:
                out.append(Body(b.name, frame, hierarchy=build(b.polygon)))
        return tuple(out)

    def _horizon(self):
        for b in self.bodies:
            if b.motion and "horizon" in b.motion:
                return tuple(b.motion["horizon"])
        return (0, 1)


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def error(self, message: str, node=None):
        pos = getattr(node, "pos", 0)
        line = self.text.count("\n", 0, pos) + 1
        col = pos - self.text.rfind("\n", 0, pos)
        raise ParseError(message, line, col)

    def number(self, x, where, ctx) -> Fraction:
        if isinstance(x, bool):
            self.error(f"{where}: expected a number", ctx)
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                self.error(f"{where}: cannot read {x!r} as an exact number", ctx)
        if isinstance(x, list) and len(x) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in x):
            if x[1] == 0:
                self.error(f"{where}: zero denominator", x)
            return Fraction(x[0], x[1])
        self.error(f"{where}: expected a number, a decimal string or [num, den]", x if hasattr(x, "pos") else ctx)

    def point(self, x, where, ctx):
        if not isinstance(x, list) or len(x) != 2:
            self.error(f"{where}: expected a point [x, y]", x if hasattr(x, "pos") else ctx)
        return (self.number(x[0], where, x), self.number(x[1], where, x))

    def coeffs(self, x, where, ctx):
        if not isinstance(x, list) or not x:
            self.error(f"{where}: expected a non-empty coefficient list", x if hasattr(x, "pos") else ctx)
        return [self.number(c, where, x) for c in x]

    def integer(self, d, key, default=None):
        x = d.get(key, default)
        if x is None or isinstance(x, bool) or not isinstance(x, int):
            self.error(f"{key}: expected an integer", d)
        return x


def _polygon(r: _Reader, spec, seed: int) -> ConvexPolygon:
    if not isinstance(spec, dict):
        r.error("polygon: expected an object", spec)
    kind = spec.get("generator", "literal")
    try:
        if kind == "regular":
            return regular_polygon(r.integer(spec, "k"), r.number(spec.get("radius", 1), "radius", spec),
                                   bool(spec.get("half_step", False)))
        if kind == "random-convex":
            s = r.integer(spec, "seed") if "seed" in spec else seed
            return random_convex(r.integer(spec, "n"), s, r.number(spec.get("D", 2), "D", spec))
        if kind == "parabolic-cap":
            return parabolic_cap(r.integer(spec, "n"), r.number(spec.get("width", 2), "width", spec))
        if kind == "literal":
            verts = spec.get("vertices")
            if not isinstance(verts, list):
                r.error("literal polygon needs a vertex list", spec)
            return validate_polygon([r.point(v, "vertices", verts) for v in verts])
    except GeometryError as e:
        r.error(f"polygon: {e}", spec)
    r.error(f"unknown generator {kind!r}; expected one of {GENERATORS}", spec)


def _motion(r: _Reader, spec) -> dict:
    if not isinstance(spec, dict):
        r.error("motion: expected an object", spec)
    out = {}
    if "o" in spec:
        o = spec["o"]
        if not isinstance(o, list) or len(o) != 2:
            r.error("motion.o: expected two coefficient lists", o if hasattr(o, "pos") else spec)
        out["o"] = [r.coeffs(o[0], "motion.o[0]", o), r.coeffs(o[1], "motion.o[1]", o)]
    if "u" in spec:
        out["u"] = r.coeffs(spec["u"], "motion.u", spec)
    if "horizon" in spec:
        out["horizon"] = list(r.point(spec["horizon"], "motion.horizon", spec))
    extra = set(spec) - {"o", "u", "horizon"}
    if extra:
        r.error(f"motion: unknown keys {sorted(extra)}", spec)
    try:
        make_motion(out)
    except GeometryError as e:
        r.error(f"motion: {e}", spec)
    return out


def parse_scenario(text: str, name: str = "scenario", seed: Optional[int] = None) -> Scenario:
    try:
        doc = _decoder().decode(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    r = _Reader(text)
    if not isinstance(doc, dict):
        r.error("scenario must be a JSON object", doc)
    seed = doc.get("seed", DEFAULT_SEED) if seed is None else seed
    bodies = doc.get("bodies")
    if not isinstance(bodies, list) or not 1 <= len(bodies) <= 2:
        r.error("bodies: expected a list of one or two bodies", bodies if hasattr(bodies, "pos") else doc)
    specs = []
    for i, b in enumerate(bodies):
        if not isinstance(b, dict):
            r.error("body: expected an object", bodies)
        nm = str(b.get("name", f"body{i}"))
        motion = _motion(r, b["motion"]) if "motion" in b else {}
        if ("polygon" in b) == ("point" in b):
            r.error(f"body {nm}: give exactly one of polygon or point", b)
        if "point" in b:
            specs.append(BodySpec(nm, point=r.point(b["point"], "point", b), motion=motion))
        else:
            specs.append(BodySpec(nm, polygon=_polygon(r, b["polygon"], seed), motion=motion))
    structure = doc.get("structure", "compass")
    if structure not in STRUCTURES:
        r.error(f"unknown structure {structure!r}; expected one of {STRUCTURES}", doc)
    points = sum(s.point is not None for s in specs)
    if points == 2:
        r.error("two points cannot be separated by edges", doc)
    if structure == "mixed" and points:
        r.error("mixed structure needs two polygons", doc)
    if len(specs) == 2 and structure in ("active-triangle", "inflated") and points != 1:
        r.error(f"{structure} structure needs a polygon and a point", doc)
    hier = doc.get("hierarchy", "compass")
    if hier not in ("compass", "dudley"):
        r.error("hierarchy must be compass or dudley", doc)
    oracle = doc.get("oracle", {})
    if not isinstance(oracle, dict):
        r.error("oracle: expected an object", doc)
    samples = r.integer(oracle, "samples", DEFAULT_SAMPLES) if "samples" in oracle else DEFAULT_SAMPLES
    outputs = doc.get("outputs", ["csv", "json"])
    if not isinstance(outputs, list) or any(o not in ("csv", "json") for o in outputs):
        r.error("outputs: expected a subset of [\"csv\", \"json\"]", doc)
    hooks = doc.get("test_hooks", {})
    skip = hooks.get("skip_event") if isinstance(hooks, dict) else None
    if skip is not None and (isinstance(skip, bool) or not isinstance(skip, int)):
        r.error("test_hooks.skip_event: expected an integer", hooks)
    descent = doc.get("descent", "level")
    if descent not in ("level", "binary"):
        r.error("descent must be level or binary", doc)
    return Scenario(str(doc.get("name", name)), specs, structure, hier, descent, samples,
                    bool(oracle.get("enabled", True)), tuple(outputs), skip)


def load_scenario(path, seed: Optional[int] = None) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(), p.stem, seed)
