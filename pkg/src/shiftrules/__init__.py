"""Shift-rule derivative estimation for perturbed-parametric expectation
values x -> tr(M exp(2pi i(xA+B)) rho exp(-2pi i(xA+B))), plus a benchmark
harness comparing the truncated optimal rule against the stochastic-pulse
baseline."""

from .errors import (
    DimensionMismatchError,
    ImaginaryResidueError,
    InvalidKError,
    NonHermitianError,
    NotIntegerError,
    NotMultipleError,
    NumericalFailureError,
    SchemaError,
    ShiftRulesError,
    SpectrumError,
)
from .linalg import (
    EigenDecomposition,
    Rng,
    eig_hermitian,
    exp_i_hermitian,
    haar_unitary,
    unitary_and_derivative,
)
from .model import (
    Decomposition,
    GammaResult,
    ModelInstance,
    decompose,
    derivative,
    derivative_batch,
    expectation,
    expectation_batch,
    gamma,
    random_instance,
)
from .measures import (
    AtomicMeasure,
    FoldingMap,
    dirichlet_rule,
    fold_mod,
    nyquist,
    nyquist_size_for_error,
    nyquist_truncation_bound,
    tau_pc,
)
from .estimators import EstimateReport, ShotOracle, folding_estimate, obvious_estimate
from .aspsr import (
    AspsrConfig,
    aspsr_derivative,
    aspsr_derivative_batch,
    aspsr_expectation,
    aspsr_mc_estimate,
)

__all__ = [
    "AspsrConfig",
    "AtomicMeasure",
    "Decomposition",
    "DimensionMismatchError",
    "EigenDecomposition",
    "EstimateReport",
    "FoldingMap",
    "GammaResult",
    "ImaginaryResidueError",
    "InvalidKError",
    "ModelInstance",
    "NonHermitianError",
    "NotIntegerError",
    "NotMultipleError",
    "NumericalFailureError",
    "Rng",
    "SchemaError",
    "ShiftRulesError",
    "ShotOracle",
    "SpectrumError",
    "aspsr_derivative",
    "aspsr_derivative_batch",
    "aspsr_expectation",
    "aspsr_mc_estimate",
    "decompose",
    "derivative",
    "derivative_batch",
    "dirichlet_rule",
    "eig_hermitian",
    "exp_i_hermitian",
    "expectation",
    "expectation_batch",
    "fold_mod",
    "folding_estimate",
    "gamma",
    "haar_unitary",
    "nyquist",
    "nyquist_size_for_error",
    "nyquist_truncation_bound",
    "obvious_estimate",
    "random_instance",
    "tau_pc",
    "unitary_and_derivative",
]

__version__ = "0.1.0"
