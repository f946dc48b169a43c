"""Compactly supported approximations of the standard Gaussian, with
certified error functionals on complex disks.

The package builds two families of approximating measures (matched-moment
quadrature rules and renormalized truncations), measures how far their
Laplace and characteristic transforms drift from the Gaussian's on disks
and vertical lines in the complex plane, checks the log-convexity
structure of those errors, and assembles a deliberately flat mixture
density whose flatness it certifies.  All numerics run at explicit,
per-value precision.
"""

from .disks import (
    CircleSupReport,
    GrowthProfile,
    LineSupReport,
    TaylorReport,
    ThreeCirclesReport,
    ThreeLinesReport,
    growth_profile,
    sup_abs_on_circle,
    sup_on_circle,
    sup_on_line,
    taylor_coefficients,
    three_circles_check,
    three_lines_check,
)
from .errors import (
    CauchyBoundViolation,
    CertificateViolation,
    ChainViolation,
    ConfigError,
    ConvergenceError,
    ConvexityViolation,
    EnvelopeViolation,
    GausdiskError,
    InsufficientDataError,
    MathInvariantError,
    NonFiniteError,
    SupportViolation,
)
from .experiments import (
    RateFit,
    RateRow,
    RateTable,
    TailBoundModel,
    TailChainReport,
    default_grid,
    emit_figure,
    figure_csv_text,
    figure_svg_text,
    fit_c1,
    fit_quadrature_rate,
    fit_truncation_rate,
    manifest_text,
    run_figure,
    tail_bound_value,
    validate_tail_bound,
)
from .hermite import (
    QuadratureRule,
    build_rule,
    hermite_pair,
    k_for_support,
    moment,
    rule_from_csv,
    rule_to_csv,
)
from .measures import (
    CharBoundReport,
    DiscreteMeasure,
    Measure,
    StandardGaussian,
    TruncatedGaussian,
    char_bound_check,
    gauss_upper_tail,
    normal_cdf,
    quadrature_measure_for_support,
    truncation_error_closed_form,
)
from .precision import (
    MIN_BITS,
    PComplex,
    PReal,
    cos_sin,
    double_factorial,
    exp,
    log,
    pi_value,
    sqrt,
    working_bits,
)
from .superflat import (
    FlatnessCertificate,
    SuperflatMixture,
    build_superflat,
    density_derivative,
    flatness_certificate,
    mixture_density,
    superflat_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "MIN_BITS",
    "PReal",
    "PComplex",
    "exp",
    "log",
    "sqrt",
    "pi_value",
    "cos_sin",
    "double_factorial",
    "working_bits",
    "GausdiskError",
    "ConfigError",
    "InsufficientDataError",
    "MathInvariantError",
    "NonFiniteError",
    "ConvergenceError",
    "SupportViolation",
    "ConvexityViolation",
    "EnvelopeViolation",
    "ChainViolation",
    "CertificateViolation",
    "CauchyBoundViolation",
    "QuadratureRule",
    "hermite_pair",
    "build_rule",
    "moment",
    "k_for_support",
    "rule_to_csv",
    "rule_from_csv",
    "Measure",
    "DiscreteMeasure",
    "TruncatedGaussian",
    "StandardGaussian",
    "CharBoundReport",
    "normal_cdf",
    "gauss_upper_tail",
    "quadrature_measure_for_support",
    "truncation_error_closed_form",
    "char_bound_check",
    "CircleSupReport",
    "LineSupReport",
    "GrowthProfile",
    "ThreeCirclesReport",
    "ThreeLinesReport",
    "TaylorReport",
    "sup_abs_on_circle",
    "sup_on_circle",
    "sup_on_line",
    "growth_profile",
    "three_circles_check",
    "three_lines_check",
    "taylor_coefficients",
    "SuperflatMixture",
    "FlatnessCertificate",
    "build_superflat",
    "mixture_density",
    "density_derivative",
    "flatness_certificate",
    "superflat_to_csv",
    "RateRow",
    "RateTable",
    "RateFit",
    "TailBoundModel",
    "TailChainReport",
    "default_grid",
    "run_figure",
    "fit_truncation_rate",
    "fit_quadrature_rate",
    "fit_c1",
    "tail_bound_value",
    "validate_tail_bound",
    "figure_csv_text",
    "figure_svg_text",
    "manifest_text",
    "emit_figure",
]
