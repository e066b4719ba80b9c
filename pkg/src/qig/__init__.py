"""q-z quantum relative entropies and the metric tensors they induce.

The package computes the two-parameter family of regularized Renyi-type
relative entropies on invertible density matrices, assembles the induced
Riemannian metric on the unfolded state space SU(n) x simplex in closed form,
and cross-checks every coefficient against a finite-difference extraction of
the same tensor from the divergence itself.
"""

from .channels import (
    DpiScanResult,
    KrausChannel,
    MonotonicityReport,
    apply_channel,
    depolarizing_channel,
    dpi_points_scan,
    dpi_scan,
    identity_channel,
    monotonicity_check,
    random_channel,
    unitary_channel,
)
from .entropies import (
    QZParams,
    bures_divergence,
    q_log,
    qz_divergence,
    trace_functional,
    tsallis_divergence,
    von_neumann_divergence,
    wigner_yanase_divergence,
)
from .fdcheck import (
    DiagonalChart,
    FdMetric,
    criticality_check,
    hessian_metric,
    pullback_metric,
    qz_two_point,
    skewness_tensor,
)
from .linalg import HermitianEig, eig_hermitian, spectral_fn, trace_product_power
from .metric import (
    ECoefficients,
    MetricTensor,
    RadialLimitResult,
    TangentVector,
    apply_metric,
    e_coefficients,
    metric_qz,
    petz_metric_qubit,
    petz_monotone_function,
    qubit_metric_closed_form,
    qubit_q1_limit_metric,
    radial_limit_qubit,
    radial_w_sequence,
    special_metric,
)
from .states import (
    DensityMatrix,
    ProbabilityVector,
    SimplexTangent,
    UnfoldedState,
    fold,
    kernel_basis,
    random_state,
    unfold,
)
from .su import SuBasis, build_su_basis, maurer_cartan_coefficient

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
