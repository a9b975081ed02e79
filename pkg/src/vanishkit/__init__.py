"""Numerics for translation-bounded measures on the real line.

The library models locally finite complex measures whose translates stay
uniformly bounded, smooths them against compactly supported piecewise
linear test functions, and asks decay questions: does mu*f die out along
annuli, do atom weights shrink, do interval means of |mu*f| tend to
zero, and does the picture match the Fourier side.
"""

from .errors import (
    HypothesesNotSatisfied,
    InvalidArgument,
    QuadratureError,
    TruncationTailError,
    UnknownExample,
    VanishkitError,
)
from .testfunctions import TestFunction, Window, tf_convolve, tf_hat, tf_indicator, tf_reflect_conj
from .measures import (
    AbsCont,
    Atom,
    AtomSource,
    ConstantDensity,
    DensitySource,
    FiniteAtoms,
    FunctionDensity,
    IndicatorDensity,
    LatticeComb,
    MeasureExpr,
    PurePoint,
    ReflectConj,
    Scale,
    Sum,
    Translate,
    TriangleDensity,
    atoms_in,
    convolve,
    convolve_grid,
    resolve_window,
    seminorm_pg,
    sup_norm_K,
    variation_on,
)
from .analysis import (
    INCONCLUSIVE,
    NOT_VANISHING,
    VANISHING,
    CoefficientVerdict,
    DecayProfile,
    DiscreteSupportReport,
    MeanTrace,
    VanishingReport,
    coefficients_vanishing,
    decay_profile,
    default_family,
    discrete_support_crosscheck,
    mean_abs,
    min_gap,
    vanishing_verdict,
)
from .fourier import (
    RLReport,
    SpectralDensity,
    bessel_j0,
    bessel_j0_check,
    bessel_j0_vec,
    exp_sum,
    ft_compact,
    rajchman_check,
    rl_crosscheck,
    series_density,
    sinc,
    sinc_autocorr_density,
    spectral_constant,
    spectral_series,
    spectral_sinc_sq,
)
from .constructions import (
    EXAMPLE_NAMES,
    BlockPart,
    BlockSumInput,
    GeneratedBlockSum,
    HypothesisReport,
    build_example,
    default_probes,
    ex_a_block_input,
    ex_b_block_input,
    generate_block_sum,
    nu_block_input,
    validate_block_sum,
)
from .acceptance import CriterionResult, format_results, run_all

__version__ = "0.1.0"

__all__ = [
    "AbsCont",
    "Atom",
    "AtomSource",
    "BlockPart",
    "BlockSumInput",
    "CoefficientVerdict",
    "ConstantDensity",
    "CriterionResult",
    "DecayProfile",
    "DensitySource",
    "DiscreteSupportReport",
    "EXAMPLE_NAMES",
    "FiniteAtoms",
    "FunctionDensity",
    "GeneratedBlockSum",
    "HypothesesNotSatisfied",
    "HypothesisReport",
    "INCONCLUSIVE",
    "IndicatorDensity",
    "InvalidArgument",
    "LatticeComb",
    "MeanTrace",
    "MeasureExpr",
    "NOT_VANISHING",
    "PurePoint",
    "QuadratureError",
    "ReflectConj",
    "RLReport",
    "Scale",
    "SpectralDensity",
    "Sum",
    "TestFunction",
    "Translate",
    "TriangleDensity",
    "TruncationTailError",
    "UnknownExample",
    "VANISHING",
    "VanishingReport",
    "VanishkitError",
    "Window",
    "atoms_in",
    "bessel_j0",
    "bessel_j0_check",
    "bessel_j0_vec",
    "build_example",
    "coefficients_vanishing",
    "convolve",
    "convolve_grid",
    "decay_profile",
    "default_family",
    "default_probes",
    "discrete_support_crosscheck",
    "ex_a_block_input",
    "ex_b_block_input",
    "exp_sum",
    "format_results",
    "ft_compact",
    "generate_block_sum",
    "mean_abs",
    "min_gap",
    "nu_block_input",
    "rajchman_check",
    "resolve_window",
    "rl_crosscheck",
    "run_all",
    "seminorm_pg",
    "series_density",
    "sinc",
    "sinc_autocorr_density",
    "spectral_constant",
    "spectral_series",
    "spectral_sinc_sq",
    "sup_norm_K",
    "tf_convolve",
    "tf_hat",
    "tf_indicator",
    "tf_reflect_conj",
    "validate_block_sum",
    "vanishing_verdict",
    "variation_on",
]
