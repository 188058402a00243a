"""Extreme-value toolkit for nonhomogeneous Gaussian random fields.

The package simulates the Gaussian processes and derived fields behind
scan-type suprema, estimates the Pickands/Piterbarg-family constants by
Monte Carlo, evaluates closed-form tail asymptotics and Gumbel norming
sequences in every parameter regime, and checks the limit laws
statistically at desk scale.
"""

from .errors import (
    GxtrError,
    ParameterError,
    ConfigError,
    ModelError,
    NumericalError,
    SizeError,
    UnresolvedConstantError,
    ReportIOError,
)
from .model import (
    Regime,
    RegimeParams,
    FieldModel,
    GridSpec,
    classify_regime,
    variogram_to_covariance,
    validate_local_expansion,
    weak_dependence_probe,
    parse_model_config,
)
from .simulate import (
    RngStream,
    SamplePath1D,
    FieldSample2D,
    sample_stationary_path,
    sample_fbm,
    sample_field_cholesky,
    derive_shepp_field,
    sample_fbm_mixture,
    sample_integrated_process,
    sample_storage_path,
    grid_supremum,
)
from .constants import (
    ConstantEstimate,
    lookup_known_constant,
    estimate_pickands,
    estimate_piterbarg,
    estimate_pickands_piterbarg,
)
from .asymptotics import (
    ConstantProvider,
    NormingPair,
    normal_tail,
    gumbel_cdf,
    gamma_fn,
    eval_mu,
    eval_norming,
    eval_application,
    eval_storage,
)
from .harness import (
    ks_statistic,
    wilson_interval,
    run_tail_experiment,
    run_gumbel_experiment,
    write_report,
)

__version__ = "0.1.0"

__all__ = [
    "GxtrError",
    "ParameterError",
    "ConfigError",
    "ModelError",
    "NumericalError",
    "SizeError",
    "UnresolvedConstantError",
    "ReportIOError",
    "Regime",
    "RegimeParams",
    "FieldModel",
    "GridSpec",
    "classify_regime",
    "variogram_to_covariance",
    "validate_local_expansion",
    "weak_dependence_probe",
    "parse_model_config",
    "RngStream",
    "SamplePath1D",
    "FieldSample2D",
    "sample_stationary_path",
    "sample_fbm",
    "sample_field_cholesky",
    "derive_shepp_field",
    "sample_fbm_mixture",
    "sample_integrated_process",
    "sample_storage_path",
    "grid_supremum",
    "ConstantEstimate",
    "lookup_known_constant",
    "estimate_pickands",
    "estimate_piterbarg",
    "estimate_pickands_piterbarg",
    "ConstantProvider",
    "NormingPair",
    "normal_tail",
    "gumbel_cdf",
    "gamma_fn",
    "eval_mu",
    "eval_norming",
    "eval_application",
    "eval_storage",
    "ks_statistic",
    "wilson_interval",
    "run_tail_experiment",
    "run_gumbel_experiment",
    "write_report",
    "__version__",
]
