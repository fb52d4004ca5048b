"""Metric logic programs compiled to ASP with Boolean or difference-constraint timing."""

from .compiler import CompileContext, compile_core
from .core import (
    AtomName,
    Interval,
    MetricProgram,
    MetricRule,
    GroundProgram,
    GroundRule,
    TimedTrace,
    TimingFunction,
    Valuation,
)
from .emit import emit_asp, emit_dc, emit_json, read_json, stats
from .ht import enumerate_equilibrium_models
from .htc import enumerate_constraint_equilibrium_models_bounded, enumerate_dc_models
from .mht import enumerate_metric_equilibrium_models
from .parser import ParseError, format_program, parse_file, parse_program
from .timing_bool import compile_bool
from .timing_dc import compile_dc

__version__ = "0.1.0"

__all__ = [
    "AtomName",
    "CompileContext",
    "GroundProgram",
    "GroundRule",
    "Interval",
    "MetricProgram",
    "MetricRule",
    "ParseError",
    "TimedTrace",
    "TimingFunction",
    "Valuation",
    "compile_bool",
    "compile_core",
    "compile_dc",
    "emit_asp",
    "emit_dc",
    "emit_json",
    "enumerate_constraint_equilibrium_models_bounded",
    "enumerate_dc_models",
    "enumerate_equilibrium_models",
    "enumerate_metric_equilibrium_models",
    "format_program",
    "parse_file",
    "parse_program",
    "read_json",
    "stats",
]
