"""The two-parameter q-z family of quantum relative entropies.

The regularized family is

    S_{q,z}(rho, sigma) = [1 - Tr((rho^{q/z} sigma^{(1-q)/z})^z)] / (q (1-q))

for q in (0, 1), z > 0.  Named limits (von Neumann, Bures, Wigner-Yanase,
Tsallis) get dedicated entry points; the generic path refuses q within 1e-7
of the endpoints because the 1/(q(1-q)) prefactor amplifies cancellation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, DomainError, NotInvertible
from .linalg import clamp_psd_eigenvalues, eig_hermitian, trace_product_power
from .states import DensityMatrix

Q_ENDPOINT_EPS = 1e-7  # generic-path guard around q in {0, 1}


@dataclass(frozen=True)
class QZParams:
    """Admissible (q, z): q in the open unit interval, z positive."""

    q: float
    z: float

    def __post_init__(self):
        if not (np.isfinite(self.q) and 0.0 < self.q < 1.0):
            raise BadParams(f"q must lie in (0, 1), got {self.q}")
        if not (np.isfinite(self.z) and self.z > 0.0):
            raise BadParams(f"z must be positive, got {self.z}")


def q_log(x: float, q: float) -> float:
    """Deformed logarithm (x^{1-q} - 1)/(1 - q); plain log within 1e-7 of q = 1."""
    if not (np.isfinite(x) and x > 0.0):
        raise DomainError(f"q_log needs x > 0, got {x}")
    if abs(q - 1.0) < Q_ENDPOINT_EPS:
        return math.log(x)
    return (x ** (1.0 - q) - 1.0) / (1.0 - q)


def _require_invertible(*states: DensityMatrix):
    for s in states:
        if not s.invertible:
            raise NotInvertible(
                f"divergence needs full-rank states; min eigenvalue {s.min_eigenvalue:.3e}"
            )


def trace_functional(rho: DensityMatrix, sigma: DensityMatrix, params: QZParams) -> float:
    """Tr((rho^{q/z} sigma^{(1-q)/z})^z).

    The product matrix is not Hermitian but is isospectral to
    b^{1/2} a b^{1/2} with a = rho^{q/z}, b = sigma^{(1-q)/z}, so the value is
    the sum of z-th powers of that real non-negative spectrum.  Equals 1 at
    rho = sigma and lies in (0, 1] for states.
    """
    _require_invertible(rho, sigma)
    if rho.n != sigma.n:
        raise BadParams(f"state dims differ: {rho.n} vs {sigma.n}")
    a = rho.power(params.q / params.z)
    bhalf = sigma.power((1.0 - params.q) / (2.0 * params.z))
    mu = clamp_psd_eigenvalues(eig_hermitian(bhalf @ a @ bhalf).eigenvalues)
    return float(np.sum(mu**params.z))


def qz_divergence(rho: DensityMatrix, sigma: DensityMatrix, params: QZParams) -> float:
    """Regularized q-z relative entropy; symmetric under (q, rho) <-> (1-q, sigma)."""
    if min(params.q, 1.0 - params.q) < Q_ENDPOINT_EPS:
        raise BadParams(
            f"q = {params.q} too close to an endpoint for the generic formula; "
            "use the dedicated limit operations"
        )
    return (1.0 - trace_functional(rho, sigma, params)) / (params.q * (1.0 - params.q))


def tsallis_divergence(rho: DensityMatrix, sigma: DensityMatrix, q: float) -> float:
    """q-z family at z = 1."""
    return qz_divergence(rho, sigma, QZParams(q, 1.0))


def von_neumann_divergence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr rho (log rho - log sigma), the q -> 1, z = 1 limit."""
    _require_invertible(rho, sigma)
    if rho.n != sigma.n:
        raise BadParams(f"state dims differ: {rho.n} vs {sigma.n}")
    lam_r, v_r = rho.eig
    lam_s, v_s = sigma.eig
    log_rho = (v_r * np.log(lam_r)) @ v_r.conj().T
    log_sigma = (v_s * np.log(lam_s)) @ v_s.conj().T
    return float(np.trace(rho.mat @ (log_rho - log_sigma)).real)


def bures_divergence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """4 (1 - Tr sqrt(sqrt(sigma) rho sqrt(sigma))), the (1/2, 1/2) member."""
    _require_invertible(rho, sigma)
    root_fid = trace_product_power(rho.mat, sigma.mat, 0.5)
    return 4.0 * (1.0 - root_fid)


def wigner_yanase_divergence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """4 (1 - Tr(rho^{1/2} sigma^{1/2})), the (1/2, 1) member."""
    _require_invertible(rho, sigma)
    if rho.n != sigma.n:
        raise BadParams(f"state dims differ: {rho.n} vs {sigma.n}")
    val = np.trace(rho.power(0.5) @ sigma.power(0.5)).real
    return 4.0 * (1.0 - float(val))
