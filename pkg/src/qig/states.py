"""Density matrices, the probability simplex, and the unfolding map.

An invertible density matrix rho factors as U diag(p) U^dag with U special
unitary and p in the open simplex; ``fold``/``unfold`` move between the two
descriptions.  ``kernel_basis`` spans the directions the folding map kills,
i.e. the Hermitian traceless matrices commuting with diag(p).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, NegativeSpectrum, NotHermitian, NotInvertible
from .linalg import (
    HERMITIAN_ATOL,
    EPS_CLAMP,
    HermitianEig,
    as_square_matrix,
    eig_hermitian,
    hermitian_deviation,
)

# Relative gap below which two eigenvalues count as degenerate.  Shared with
# the metric coefficients, which vanish quadratically at coinciding
# eigenvalues, so everything below this is numerically zero anyway.
DEGENERACY_RTOL = 1e-8

# Smallest eigenvalue that still counts as full rank.
EPS_FULL_RANK = 1e-10

_SUM_ATOL = 1e-12
_UNITARY_ATOL = 1e-10
_DET_ATOL = 1e-8


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, order="C", copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProbabilityVector:
    """Point of the open simplex interior: strictly positive entries, unit sum."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if p.size < 1:
            raise BadParams("empty probability vector")
        if not np.all(p > 0.0):
            raise BadParams(f"probabilities must be strictly positive, got {p}")
        if abs(p.sum() - 1.0) > _SUM_ATOL:
            raise BadParams(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "p", _readonly(p))

    @property
    def n(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class SimplexTangent:
    """Tangent to the simplex: components summing to zero."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(-1)
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
        if abs(a.sum()) > _SUM_ATOL * scale:
            raise BadParams(f"tangent components sum to {a.sum()!r}, not 0")
        object.__setattr__(self, "a", _readonly(a))

    @property
    def n(self) -> int:
        return self.a.size


def as_prob_vector(p) -> ProbabilityVector:
    return p if isinstance(p, ProbabilityVector) else ProbabilityVector(np.asarray(p))


class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix.  Caches its eigendecomposition."""

    __slots__ = ("mat", "_eig")

    def __init__(self, mat):
        mat = as_square_matrix(mat)
        dev = hermitian_deviation(mat)
        if dev > HERMITIAN_ATOL:
            raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > HERMITIAN_ATOL:
            raise BadParams(f"trace is {tr!r}, must be 1")
        self.mat = _readonly(0.5 * (mat + mat.conj().T))
        self._eig = None
        low = float(self.eig.eigenvalues[0])
        if low < -EPS_CLAMP:
            raise NegativeSpectrum(f"density matrix has eigenvalue {low:.3e}")

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def eig(self) -> HermitianEig:
        if self._eig is None:
            self._eig = eig_hermitian(self.mat)
        return self._eig

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eig.eigenvalues[0])

    @property
    def invertible(self) -> bool:
        return self.min_eigenvalue > EPS_FULL_RANK

    def power(self, s: float) -> np.ndarray:
        """rho^s through the cached spectrum (clamping round-off negatives)."""
        lam = np.maximum(self.eig.eigenvalues, 0.0)
        v = self.eig.eigenvectors
        return (v * lam**s) @ v.conj().T

    def __repr__(self):
        return f"DensityMatrix(n={self.n}, min_eig={self.min_eigenvalue:.3e})"


@dataclass(frozen=True)
class UnfoldedState:
    """Pair (special unitary u, simplex point p) with rho = u diag(p) u^dag."""

    u: np.ndarray
    p: ProbabilityVector

    def __post_init__(self):
        u = as_square_matrix(self.u)
        p = as_prob_vector(self.p)
        if u.shape[0] != p.n:
            raise BadParams(f"unitary dim {u.shape[0]} != simplex dim {p.n}")
        dev = np.max(np.abs(u.conj().T @ u - np.eye(p.n)))
        if dev > _UNITARY_ATOL:
            raise BadParams(f"u is not unitary (deviation {dev:.3e})")
        det = complex(np.linalg.det(u))
        if abs(det - 1.0) > _DET_ATOL:
            raise BadParams(f"det(u) = {det!r}, must be 1")
        object.__setattr__(self, "u", _readonly(u))
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.p.n


def fold(s: UnfoldedState) -> DensityMatrix:
    """u diag(p) u^dag; invertible because p is interior."""
    return DensityMatrix((s.u * s.p.p) @ s.u.conj().T)


def unfold(rho: DensityMatrix) -> UnfoldedState:
    """Invert fold up to the commutant ambiguity.

    Eigenvalues are placed in descending order and the eigenvector matrix is
    rotated by a global phase to det = 1, which makes the roundtrip testable.
    """
    if not rho.invertible:
        raise NotInvertible(
            f"state with min eigenvalue {rho.min_eigenvalue:.3e} cannot be unfolded"
        )
    lam = rho.eig.eigenvalues[::-1].copy()
    v = np.ascontiguousarray(rho.eig.eigenvectors[:, ::-1])
    det = complex(np.linalg.det(v))
    v = v * np.exp(-1j * np.angle(det) / rho.n)
    lam = lam / lam.sum()  # shave round-off so the simplex invariant holds
    return UnfoldedState(v, ProbabilityVector(lam))


def degeneracy_blocks(p) -> list[list[int]]:
    """Indices of p grouped into blocks of (near-)equal values."""
    p = as_prob_vector(p).p
    order = np.argsort(p, kind="stable")
    blocks: list[list[int]] = [[int(order[0])]]
    for idx in order[1:]:
        prev = blocks[-1][-1]
        gap = abs(p[idx] - p[prev])
        if gap <= DEGENERACY_RTOL * max(p[idx], p[prev]):
            blocks[-1].append(int(idx))
        else:
            blocks.append([int(idx)])
    return blocks


def kernel_basis(s: UnfoldedState) -> list[np.ndarray]:
    """Basis of Hermitian traceless H with [H, diag(p)] = 0.

    Always contains the n-1 diagonal traceless generators; degenerate
    eigenvalue blocks contribute their off-diagonal pair generators as well.
    For nondegenerate p this leaves exactly the diagonal directions, and for
    uniform p the full n^2 - 1 dimensional algebra.
    """
    n = s.n
    out: list[np.ndarray] = []
    for d in range(1, n):
        coef = np.sqrt(2.0 / (d * (d + 1)))
        h = np.zeros((n, n), dtype=complex)
        for j in range(d):
            h[j, j] = coef
        h[d, d] = -d * coef
        out.append(h)
    for block in degeneracy_blocks(s.p):
        idx = sorted(block)
        for i, a in enumerate(idx):
            for b in idx[i + 1 :]:
                hs = np.zeros((n, n), dtype=complex)
                hs[a, b] = 1.0
                hs[b, a] = 1.0
                out.append(hs)
                ha = np.zeros((n, n), dtype=complex)
                ha[a, b] = -1j
                ha[b, a] = 1j
                out.append(ha)
    return out


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed special unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    det = complex(np.linalg.det(q))
    return q * np.exp(-1j * np.angle(det) / n)


def random_unfolded(n: int, min_eig: float, rng: np.random.Generator) -> UnfoldedState:
    if not 0.0 < min_eig < 1.0 / n:
        raise BadParams(f"min_eig must lie in (0, 1/{n}), got {min_eig}")
    raw = rng.dirichlet(np.ones(n))
    p = min_eig + (1.0 - n * min_eig) * raw
    p = p / p.sum()
    return UnfoldedState(haar_unitary(n, rng), ProbabilityVector(p))


def random_state(n: int, min_eig: float, seed: int) -> DensityMatrix:
    """Seeded invertible density matrix with spectrum bounded away from 0.

    A Dirichlet sample is pushed off the simplex boundary and conjugated by a
    Haar-random unitary; identical seeds give identical matrices.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return fold(random_unfolded(n, min_eig, rng))
