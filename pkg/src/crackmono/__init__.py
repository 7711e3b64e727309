"""Monotonicity-based imaging of sound-soft cracks from far field data."""

from crackmono.errors import InvalidArgumentError, NumericalFailureError
from crackmono.geometry import (
    ClosedCurve,
    ParametricArc,
    ProbeSegment,
    arc_point,
    benchmark_arc,
    circle,
    probe_endpoints,
)
from crackmono.forward import (
    Density,
    FarFieldMatrix,
    SolverConfig,
    add_noise,
    far_field,
    far_field_matrix,
    solve_density,
)
from crackmono.operators import TestMatrix, boundary_gram, segment_gram
from crackmono.indicator import (
    EigenReport,
    indicator_domain,
    indicator_segment,
    negative_eigenvalue_count,
    re_part,
)
from crackmono.scan import IndicatorGrid, ScanConfig, contrast_statistics, scan

__version__ = "0.1.0"

__all__ = [
    "ClosedCurve",
    "Density",
    "EigenReport",
    "FarFieldMatrix",
    "IndicatorGrid",
    "InvalidArgumentError",
    "NumericalFailureError",
    "ParametricArc",
    "ProbeSegment",
    "ScanConfig",
    "SolverConfig",
    "TestMatrix",
    "add_noise",
    "arc_point",
    "benchmark_arc",
    "boundary_gram",
    "circle",
    "contrast_statistics",
    "far_field",
    "far_field_matrix",
    "indicator_domain",
    "indicator_segment",
    "negative_eigenvalue_count",
    "probe_endpoints",
    "re_part",
    "scan",
    "segment_gram",
    "solve_density",
]
