"""Quadratic forms of distributions, kernel polynomials and certified
localization of their zeros on the real line."""

from .errors import (
    DegenerateDegree,
    DerivativeUnavailable,
    DimensionMismatch,
    EtaOrthogonal,
    IdentityMismatch,
    IllConditionedNodes,
    KernelDimensionNotOne,
    LeadingOrTrailingZero,
    NotEven,
    NotInKernel,
    NotPSD,
    NotSimple,
    NotSymmetric,
    RankDeficiencyNotDetected,
    RepeatedLambda,
    SchemaError,
    ZerolocError,
)
from .formbuilder import (
    DistributionSpec,
    QuadraticFormStructure,
    build_form,
    delta_shift,
    psi_derivative_eval,
    psi_eval,
    recover_distribution,
)
from .toeplitz import (
    CFDecomposition,
    HermitianToeplitz,
    cf_decompose,
    kernel_polynomial_roots,
    kernel_vector,
    palindrome_check,
)
from .spectral import EigenPair, extremal_pair, parity, sym_eig, truncation_sweep
from .rankone import (
    ModelOperator,
    RankOneModifiedOperator,
    build_dprime,
    commutator_residual,
    det_identity_residual,
    dprime_spectrum,
    q_selfadjoint_residual,
)
from .zeros import (
    KernelPolynomial,
    ZeroReport,
    build_p,
    poly_roots,
    shannon_transform,
    xi_hat_eval,
    xi_hat_zeros,
)
from .contkernel import (
    ContinuousKernel,
    StepEigenvector,
    convergence_study,
    discretize,
    named_kernel,
    step_eigen,
    tabulated_kernel,
)
from .specaction import SmoothFunction, divided_difference, gateaux_n, hermite_dd, trace_oracle

__version__ = "0.1.0"
