"""Numerical laboratory for two-dimensional minimal surface graphs in R^n.

Pipeline: graph surfaces with exact second-order jets -> raw and
orthonormal normal frames -> conformal reparametrization over the unit
disc -> per-normal curvatures and the Gauss decomposition -> empirical
curvature-bound ratios, constant probes, and scaling sweeps.
"""

__version__ = "0.1.0"

from ._kernels import USING_NUMBA, backend_name
from .conformal import (
    BoundaryMap,
    ConformalChart,
    ResidualStats,
    boundary_curve,
    chart_jet,
    dirichlet_energy,
    export_chart,
    import_chart,
    solve_chart,
    surface_area,
)
from .curvature import (
    CurvatureReport,
    DirectionalCurvature,
    FundamentalForms,
    curvature_in_direction,
    curvature_report,
    fundamental_forms,
    gauss_decomposition,
    intrinsic_gauss,
    minimality_residual,
)
from .errors import (
    AliasingError,
    ArityError,
    ConditioningError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    GeometryError,
    MgclError,
    NumericalConsistencyError,
    ParseError,
    PreconditionError,
)
from .estimates import (
    BoundCheck,
    BoundCurve,
    DecayTable,
    ProbeReport,
    bernstein_decay,
    bound_ratio,
    consistency_check,
    heinz_probe,
    schauder_probe,
    theorem_bound_check,
    theta_sweep,
)
from .expressions import ScalarField2D, parse_expression
from .harmonic import DiscAutomorphism, HarmonicDiscSeries, harmonic_extension
from .surfaces import (
    GraphSurface,
    Jet2,
    NormalFrame,
    eval_jet,
    eval_jet_batch,
    make_family,
    orthonormal_frame,
    raw_normals,
    rotate_surface,
    sup_norm,
)

__all__ = [
    "__version__",
    "USING_NUMBA",
    "backend_name",
    # surfaces
    "ScalarField2D",
    "parse_expression",
    "GraphSurface",
    "Jet2",
    "NormalFrame",
    "make_family",
    "eval_jet",
    "eval_jet_batch",
    "raw_normals",
    "orthonormal_frame",
    "sup_norm",
    "rotate_surface",
    # harmonic / conformal
    "HarmonicDiscSeries",
    "DiscAutomorphism",
    "harmonic_extension",
    "BoundaryMap",
    "ConformalChart",
    "ResidualStats",
    "boundary_curve",
    "dirichlet_energy",
    "solve_chart",
    "chart_jet",
    "surface_area",
    "export_chart",
    "import_chart",
    # curvature
    "FundamentalForms",
    "DirectionalCurvature",
    "CurvatureReport",
    "fundamental_forms",
    "curvature_in_direction",
    "minimality_residual",
    "gauss_decomposition",
    "intrinsic_gauss",
    "curvature_report",
    # estimates
    "ProbeReport",
    "BoundCurve",
    "BoundCheck",
    "DecayTable",
    "bound_ratio",
    "theta_sweep",
    "schauder_probe",
    "heinz_probe",
    "theorem_bound_check",
    "bernstein_decay",
    "consistency_check",
    # errors
    "MgclError",
    "ParseError",
    "ArityError",
    "DomainError",
    "EvaluationError",
    "PreconditionError",
    "ConditioningError",
    "GeometryError",
    "NumericalConsistencyError",
    "AliasingError",
    "ConvergenceError",
    "ConfigError",
]
