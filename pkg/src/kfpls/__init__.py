"""Kernel functional partial least squares regression.

Predicts a scalar response from one or more sampled functional predictors
with a Gaussian kernel over the L2 distance, NIPALS score extraction, and
cross-validated choice of component count and bandwidth.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConvergenceError,
    KfplsError,
    ParseError,
    RankExhaustionError,
    SingularSystemError,
    StructuralError,
    UndefinedMetricError,
)
from .fdata import (
    FunctionalDataset,
    FunctionalSample,
    Grid,
    SampledCurve,
    rescale_domain,
    sq_l2_distance,
    trapezoid_integral,
)
from .kernel import CrossGram, GramBundle, KernelSpec, cross_gram, gram, kernel_value
from .kpls import FitConfig, KfplsModel, fit, nipals_component, predict
from .metrics import EvalReport, McSummary, arpe, evaluate, mc_summarize, rase
from .simgen import BsplineBasis, GeneratedData, ScenarioSpec, bspline_eval, generate
from .tuning import CvPlan, CvResult, cv_score, grid_search, make_folds
