"""Correlation measures normalized against fitted principal manifolds.

The measures form a ladder of increasing generality: the classical
product-moment correlation, its dilution-corrected form under known
measurement error, the L-correlation over linear principal manifolds
(PCA subspaces), and the manifold correlation over elastic-map curves
and surfaces. Seeded synthetic generators and a CLI round out the
pipeline.
"""

from ._kernels import backend
from .dataset import Dataset, read_csv, write_csv
from .datagen import (
    DilutionSample,
    EllipticalSpec,
    ManifoldSpec,
    PRESETS,
    dilution_scenario,
    sample_elliptical,
    sample_manifold,
)
from .elastic import (
    ElasticManifold,
    NodeConsistency,
    ProjectionResult,
    explained_variance_split,
    fit_elastic,
    manifold_from_json,
    project,
    self_consistency,
    straight_chain,
)
from .errors import (
    AllSamplesFlagged,
    CsvFormatError,
    DegenerateVariance,
    DimensionUnsupported,
    InvalidNoise,
    ManifoldCorrError,
    ModeUnsupported,
    NotOrthonormal,
    RankDeficientA,
    RankDeficientWarning,
    SingularSystem,
)
from .linear import (
    NoiseModel,
    RegressionFit,
    attenuation_factor,
    dilution_corrected_rho_sq,
    ols_fit,
    slope_product_identity,
)
from .pca import (
    LinearPrincipalManifold,
    VarianceDecomposition,
    fit_linear,
    l_correlation,
    l_correlation_matrix,
    project_linear,
    projected_variance,
    subspace_coefficients,
    variance_decomposition,
)
from .rng import make_rng
from .rpcorr import (
    RPCorrelationReport,
    SensitivityField,
    l_reduction_check,
    reliability,
    rp_correlation,
    sensitivity_field,
)
from .stats import MomentSummary, compute_moments, pearson, pearson_matrix

__version__ = "0.1.0"

__all__ = [
    "AllSamplesFlagged",
    "CsvFormatError",
    "Dataset",
    "DegenerateVariance",
    "DilutionSample",
    "DimensionUnsupported",
    "ElasticManifold",
    "EllipticalSpec",
    "InvalidNoise",
    "LinearPrincipalManifold",
    "ManifoldCorrError",
    "ManifoldSpec",
    "ModeUnsupported",
    "MomentSummary",
    "NodeConsistency",
    "NoiseModel",
    "NotOrthonormal",
    "PRESETS",
    "ProjectionResult",
    "RPCorrelationReport",
    "RankDeficientA",
    "RankDeficientWarning",
    "RegressionFit",
    "SensitivityField",
    "SingularSystem",
    "VarianceDecomposition",
    "attenuation_factor",
    "backend",
    "compute_moments",
    "dilution_corrected_rho_sq",
    "dilution_scenario",
    "explained_variance_split",
    "fit_elastic",
    "fit_linear",
    "l_correlation",
    "l_correlation_matrix",
    "l_reduction_check",
    "make_rng",
    "manifold_from_json",
    "ols_fit",
    "pearson",
    "pearson_matrix",
    "project",
    "project_linear",
    "projected_variance",
    "read_csv",
    "reliability",
    "rp_correlation",
    "sample_elliptical",
    "sample_manifold",
    "self_consistency",
    "sensitivity_field",
    "slope_product_identity",
    "straight_chain",
    "subspace_coefficients",
    "variance_decomposition",
    "write_csv",
]
