"""Smooth monotone estimation of a CDF and its density from a sample.

Pipeline: raw CDF estimates at the order statistics -> link-transformed
beta regression on a polynomial or B-spline basis -> constrained
dimension selection -> isotonized smooth CDF with pointwise bands, the
implied density, and its modes.  A Gaussian kernel baseline is included
for comparison.
"""

from .basis import (
    BasisSpec,
    DesignMatrix,
    bspline_design,
    evaluate_basis,
    polynomial_design,
    standardize,
)
from .betareg import BetaFit, beta_loglik, fit, score_and_information
from .errors import (
    BadSpec,
    DegreeOutOfRange,
    DimensionMismatch,
    DimensionOutOfRange,
    DomainError,
    EmptyColumn,
    InsufficientData,
    MadsmoothError,
    NoConvergence,
    NoFeasibleModel,
    NonNumericCell,
    SingularDesign,
    TiesPresent,
    TooFewPoints,
    ZeroSpread,
)
from .estimator import (
    BandResult,
    EvaluationGrid,
    ModeReport,
    cdf_eval,
    find_modes,
    make_grid,
    pdf_eval,
    pointwise_band,
)
from .isotonic import isotonize
from .kernel import bandwidth_nrd0, kde_cdf, kde_pdf
from .links import (
    LINK_NAMES,
    LinkFunction,
    get_link,
    link_forward,
    link_inverse,
    link_inverse_derivative,
)
from .sample import (
    EmpiricalCdf,
    Sample,
    empirical_cdf,
    fbc_cdf,
    left_mad,
    load_sample,
    response_cdf,
    ties_cdf,
)
from .selection import (
    Candidate,
    SelectedModel,
    SelectionOutcome,
    derivative_nonneg,
    search,
    select,
)
from .simulate import (
    STUDIES,
    MixtureComponent,
    MixtureSpec,
    StudyReport,
    StudyRow,
    mixture,
    run_study,
    sample_mixture,
    true_cdf,
    true_pdf,
)
from .specfun import (
    beta_cdf,
    beta_quantile,
    digamma,
    log_gamma,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    trigamma,
)

__version__ = "0.1.0"
