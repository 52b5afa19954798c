"""Numerical laboratory for semigroup growth bounds of matrix generators.

Builds finite generator systems on weighted Hilbert spaces, measures their
resolvents on half-plane grids, and machine-verifies the chain from Kreiss-type
resolvent conditions through time-averaged (Cesaro) bounds to the
square-root-log improved growth estimate, including the perturbed wave
truncation on the 2-torus.
"""

from .bounds import (GROWTH_MODELS, GrowthFitResult, WaveDemoConfig, WaveDemoResult,
                     dyadic_cesaro_grid, dyadic_windows, growth_fit, kreiss_constant_check,
                     plancherel_check, power_bound_check, resolvent_to_cesaro_check,
                     sqrt_log_bound_check, strip_kreiss_check, wave_demo)
from .errors import (ConfigurationError, FitError, KreissLabError, NumericalFailureError,
                     ResolventUndefinedError)
from .linalg import default_trial_vectors, largest_singular_value, smallest_singular_value
from .operators import (OperatorSystem, WaveTruncationParams, adjoint, build_diagonal,
                        build_jordan, build_wave, euclidean_form, reversed_system, shifted,
                        system)
from .propagator import (CesaroEstimate, TrajectorySample, cesaro_constants, expm_semigroup,
                         gram_cesaro, semigroup_norm, trajectory, vector_norm_sq_integral)
from .report import CheckEntry, VerificationReport
from .resolvent import (GridSpec, KreissFit, ResolventSample, default_grid, kreiss_fit,
                        line_integral_L2, resolvent_l2_check, resolvent_norm, sweep)

__version__ = "0.1.0"

__all__ = [
    "CesaroEstimate",
    "CheckEntry",
    "ConfigurationError",
    "FitError",
    "GROWTH_MODELS",
    "GridSpec",
    "GrowthFitResult",
    "KreissFit",
    "KreissLabError",
    "NumericalFailureError",
    "OperatorSystem",
    "ResolventSample",
    "ResolventUndefinedError",
    "TrajectorySample",
    "VerificationReport",
    "WaveDemoConfig",
    "WaveDemoResult",
    "WaveTruncationParams",
    "adjoint",
    "build_diagonal",
    "build_jordan",
    "build_wave",
    "cesaro_constants",
    "default_grid",
    "default_trial_vectors",
    "dyadic_cesaro_grid",
    "dyadic_windows",
    "euclidean_form",
    "expm_semigroup",
    "gram_cesaro",
    "growth_fit",
    "kreiss_constant_check",
    "kreiss_fit",
    "largest_singular_value",
    "line_integral_L2",
    "plancherel_check",
    "power_bound_check",
    "resolvent_l2_check",
    "resolvent_norm",
    "resolvent_to_cesaro_check",
    "reversed_system",
    "semigroup_norm",
    "shifted",
    "smallest_singular_value",
    "sqrt_log_bound_check",
    "strip_kreiss_check",
    "sweep",
    "system",
    "trajectory",
    "vector_norm_sq_integral",
    "wave_demo",
]
