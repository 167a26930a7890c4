"""Spec files, bundled fixtures, suites and reports."""

from .fixtures import list_fixtures, load_fixture
from .report import VerificationReport, emit_report, to_json, to_text
from .specfile import ManifoldSpec, dumps, load_manifold_spec, loads
from .suites import SUITES, run_suite, sample_points

__all__ = [
    "SUITES",
    "ManifoldSpec",
    "VerificationReport",
    "dumps",
    "emit_report",
    "list_fixtures",
    "load_fixture",
    "load_manifold_spec",
    "loads",
    "run_suite",
    "sample_points",
    "to_json",
    "to_text",
]
