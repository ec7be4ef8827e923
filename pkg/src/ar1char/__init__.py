"""AR(1) characterisation of stationary processes and its degenerate covariance family."""

from .covariance import (
    CovarianceSequence,
    DegenerateParam,
    QMembership,
    SpectrumClass,
    SpectrumReport,
    alternating_cos_sum,
    build_covariance_matrix,
    density_search,
    gamma_closed_form,
    gamma_polynomial,
    gamma_recursion,
    gamma_sequence,
    gamma_values,
    minimal_stated_period,
    nonzero_spectrum_check,
    psd_check,
    q_members,
)
from .estimation import (
    EXACT,
    SAMPLE,
    CandidatePair,
    DampingCondition,
    DegeneracyReport,
    PhiEstimate,
    Side,
    Status,
    Tolerances,
    degeneracy_detect,
    estimation_guard,
    noise_autocov_from_phi,
    phi_candidates,
    recursion_fit,
    resolve_phi,
    sample_autocovariance,
)
from .linalg import SymmetricMatrix, symmetric_eigenvalues
from .simulation import (
    ARNoise,
    Law,
    MovingAverage,
    SamplePath,
    WhiteGaussian,
    ar1_autocovariance,
    noise_autocovariance,
    rank2_ensemble,
    regenerate,
    simulate_ar1,
    simulate_degenerate_rank2,
)

__version__ = "0.1.0"
