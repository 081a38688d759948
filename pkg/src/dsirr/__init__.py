"""Double-slit matter waves from correlated Gaussian states.

Closed-form packet parameters and their propagator oracle, screen
densities, second moments, coarse-grained irrealism, fringe observables
and the time-axis analysis built on them.  Internal units are ħ = m = σ₀ = 1.
"""

from .analysis import ExtremumReport, FitResult, find_extremum, monotonicity_check, sweep, visibility_fit
from .errors import DegenerateFitError, ExtentError, NonUnimodalError, NumericError, QuadratureError
from .irrealism import BinnedDistribution, Resolution, irrealism_P, irrealism_Q, rescaled_irrealism, shannon_entropy
from .moments import CovarianceTriple, covariance_closed_form, covariance_numeric, squeezing_ratios
from .packet import ExperimentConfig, PacketParams, Slit, branch_amplitude, free_params, slit_params
from .screen import ScreenState, superposition

__version__ = "0.1.0"
