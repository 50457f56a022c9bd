"""Gauss-Kronrod 10-21 quadrature with integrand-profile reliability analysis.

The rule's own error estimate is checked against the sampled integrand
profile: seven consistency criteria count infringements into an
ill-conditioning pointer, and the verdict decides whether the local output
can be trusted. An adaptive driver and a benchmark harness sit on top.
"""

from ._kernels import BACKEND
from .bench import accuracy_basin, emit_report, family, run_sweep, spurious_count
from .criteria import CriterionReport, ReliabilityDiagnosis, analyze
from .driver import AdaptiveResult, Sampler, Status, SubrangeRecord, integrate, sample
from .expr import compile_expression
from .profile import IntegrandProfile, KnotClass, build_profile, profile_from_values
from .rule import (
    EPS0,
    GK21,
    IntegrandError,
    Interval,
    LocalEstimate,
    NonFiniteSampleError,
    QuadRule,
    local_estimate,
    map_knots,
)
from .verdict import Verdict, VerdictKind, decide

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "EPS0", "GK21", "AdaptiveResult", "CriterionReport", "IntegrandError",
    "IntegrandProfile", "Interval", "KnotClass", "LocalEstimate", "NonFiniteSampleError",
    "QuadRule", "ReliabilityDiagnosis", "Sampler", "Status", "SubrangeRecord", "Verdict",
    "VerdictKind", "accuracy_basin", "analyze", "build_profile", "compile_expression",
    "decide", "emit_report", "family", "integrate", "local_estimate", "map_knots",
    "profile_from_values", "run_sweep", "sample", "spurious_count",
]
