"""Gaussian quantum metrology for a cavity-magnon-mechanical system with coherent feedback."""

from ._version import __version__
from .bounds import (BoundsReport, bound_classical, bound_mi, bound_rld, bound_sld, compute_bounds,
                     per_param_floors)
from .errors import (ConfigError, ConfigParseError, ConfigValueError, ConvergenceError, DimensionError,
                     DomainError, MagnoQCRBError, NumericalError, PhysicalityError, SingularMatrixError,
                     StabilityError, UnidentifiableError, UnknownFieldError)
from .estimator import GaussianMetrologyEstimator
from .fisher import (FisherSet, LogDerivativeCoefficients, ParametricGaussianModel, cfim_heterodyne,
                     fisher_set, log_derivative_coefficients, qfim_rld, qfim_sld)
from .lyapunov import GaussianState, lyapunov_sensitivity, solve_lyapunov
from .model import (FeedbackEffective, LinearizedModel, SteadyState, SystemParams, build_diffusion_matrix,
                    build_drift_matrix, check_stability, displacement_vector, feedback_transform, linearize,
                    mode_occupations, solve_steady_state, steady_state, thermal_occupancy)
from .pipeline import EvalOptions, evaluate_point
from .presets import PRESETS, preset_specs
from .sweep import Axis, SweepResult, SweepSpec, emit, load_config, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
