"""Scenario files, batch runs, SVG drawings and scaling-law fits."""

from .cli import main
from .render import render_svg
from .run import RunOutcome, run_scenario
from .scenario import ParseError, Scenario, load_scenario, parse_scenario
from .stats import InsufficientData, Regression, emit_stats, fit_linear

__all__ = ["main", "render_svg", "RunOutcome", "run_scenario", "ParseError", "Scenario", "load_scenario",
           "parse_scenario", "InsufficientData", "Regression", "emit_stats", "fit_linear"]
