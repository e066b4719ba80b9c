"""Dense Hermitian eigendecomposition and spectral calculus for small matrices.

The eigensolver is a cyclic Jacobi iteration on the full complex matrix with a
fixed pivot order, so identical inputs always produce identical output.  All
spectral functions (fractional powers, square roots, logarithms) go through
this one decomposition; nothing here is tuned for matrices beyond n ~ 8.
"""

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NegativeSpectrum, NoConvergence, NotHermitian

EPS_CLAMP = 1e-12       # eigenvalues in [-EPS_CLAMP, 0] clamp to 0; below is an error
HERMITIAN_ATOL = 1e-10  # max |m - m^dag| accepted as Hermitian
OFFDIAG_TOL = 1e-14     # Jacobi stops when ||offdiag||_F <= OFFDIAG_TOL * ||m||_F
MAX_SWEEPS = 100


class HermitianEig(NamedTuple):
    """Spectral decomposition m = V diag(lam) V^dag with lam ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_sweeps(a, v, tol, max_sweeps):
    """Cyclic Jacobi on Hermitian ``a`` (destroyed); rotations accumulate into ``v``.

    Pivots run in fixed lexicographic order (p, q), p < q.  Returns the number
    of sweeps used, or -1 if the off-diagonal norm never reached tolerance.
    """
    n = a.shape[0]
    nrm = 0.0
    for i in range(n):
        for j in range(n):
            nrm += abs(a[i, j]) ** 2
    nrm = math.sqrt(nrm)
    if nrm == 0.0:
        return 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += abs(a[i, j]) ** 2
        off = math.sqrt(2.0 * off)
        if off <= tol * nrm:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = s / phase
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - spc * aiq
                    a[i, q] = sp * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - sp * aqi
                    a[q, i] = spc * api + c * aqi
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - spc * viq
                    v[i, q] = sp * vip + c * viq
    return -1


try:  # pragma: no cover - exercised implicitly by every eig call
    from numba import njit

    _jacobi_sweeps = njit(cache=True)(_jacobi_sweeps)
except ImportError:  # pragma: no cover
    pass


def as_square_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_deviation(m) -> float:
    """Max absolute entry of m - m^dag."""
    m = as_square_matrix(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def eig_hermitian(m) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitian if m deviates from m^dag by more than 1e-10, and
    NoConvergence if the sweep budget runs out (does not happen for sane
    inputs at these sizes).
    """
    m = as_square_matrix(m)
    if hermitian_deviation(m) > HERMITIAN_ATOL:
        raise NotHermitian(
            f"matrix deviates from Hermitian by {hermitian_deviation(m):.3e}"
        )
    a = 0.5 * (m + m.conj().T)
    v = np.eye(m.shape[0], dtype=np.complex128)
    sweeps = _jacobi_sweeps(a, v, OFFDIAG_TOL, MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge within {MAX_SWEEPS} sweeps")
    lam = np.diag(a).real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vecs = np.ascontiguousarray(v[:, order])
    return HermitianEig(lam, vecs)


def clamp_psd_eigenvalues(lam: np.ndarray) -> np.ndarray:
    """Zero out round-off negatives; reject anything below -EPS_CLAMP."""
    lam = np.asarray(lam, dtype=float)
    low = float(lam.min()) if lam.size else 0.0
    if low < -EPS_CLAMP:
        raise NegativeSpectrum(f"eigenvalue {low:.3e} below -{EPS_CLAMP:.0e}")
    return np.where(lam < 0.0, 0.0, lam)


def spectral_fn(m, f: Callable[[float], float]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian PSD matrix through its spectrum.

    Tiny negative eigenvalues (round-off on genuinely PSD inputs) are clamped
    to zero before f is applied; f must be defined on the clamped spectrum.
    """
    eig = eig_hermitian(m)
    lam = clamp_psd_eigenvalues(eig.eigenvalues)
    try:
        flam = np.array([float(f(x)) for x in lam])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"scalar function undefined on spectrum: {exc}") from exc
    if not np.all(np.isfinite(flam)):
        raise DomainError("scalar function returned a non-finite value on the spectrum")
    v = eig.eigenvectors
    out = (v * flam) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def trace_product_power(a, b, z: float) -> float:
    """Tr((b^{1/2} a b^{1/2})^z) for PSD a, b.

    The product ab is not Hermitian but shares the real non-negative spectrum
    of b^{1/2} a b^{1/2}, so this equals Tr((ab)^z).
    """
    if not (np.isfinite(z) and z > 0):
        raise DomainError(f"power z must be positive, got {z}")
    bhalf = spectral_fn(b, math.sqrt)
    a_eig = eig_hermitian(a)  # validates a and its spectrum
    clamp_psd_eigenvalues(a_eig.eigenvalues)
    prod = bhalf @ as_square_matrix(a) @ bhalf
    mu = clamp_psd_eigenvalues(eig_hermitian(prod).eigenvalues)
    return float(np.sum(mu**z))
