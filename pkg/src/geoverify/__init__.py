"""Numerical verification of (epsilon)-paracontact structures and eta-Ricci solitons."""

__version__ = "0.1.0"

from .checks import Check, CheckReport
from .errors import (
    DegenerateMetric,
    DimensionTooSmall,
    DomainError,
    EmptyInput,
    ExpressionSyntaxError,
    FileError,
    GeoVerifyError,
    InconsistentEpsilon,
    LightlikeXi,
    NonConstantExponent,
    ParseError,
    PreconditionUnmet,
    SpecError,
    UndeterminedMu,
    UnknownIdentifier,
)
from .expr import Jet, eval_jet, parse
from .structures import (
    ParacontactStructure,
    check_axioms,
    check_compatibility,
    check_curvature_identities,
    check_para_sasakian,
    classify_causal_character,
)
from .tensors import Chart, MetricField, evaluate

__all__ = [
    "Chart",
    "Check",
    "CheckReport",
    "DegenerateMetric",
    "DimensionTooSmall",
    "DomainError",
    "EmptyInput",
    "ExpressionSyntaxError",
    "FileError",
    "GeoVerifyError",
    "InconsistentEpsilon",
    "Jet",
    "LightlikeXi",
    "MetricField",
    "NonConstantExponent",
    "ParacontactStructure",
    "ParseError",
    "PreconditionUnmet",
    "SpecError",
    "UndeterminedMu",
    "UnknownIdentifier",
    "__version__",
    "check_axioms",
    "check_compatibility",
    "check_curvature_identities",
    "check_para_sasakian",
    "classify_causal_character",
    "eval_jet",
    "evaluate",
    "parse",
]
