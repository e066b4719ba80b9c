"""Generalized Gell-Mann basis of su(n) and its matrix-unit expansion.

Generators are Hermitian, traceless, and normalized to Tr(s_j s_k) = 2 d_jk.
The expansion coefficients over matrix units E_ab are just the matrix entries
of each generator, and satisfy M_k^{ba} = conj(M_k^{ab}).  For n = 2 and 3 the
ordering reproduces the Pauli and Gell-Mann numbering; for larger n the
symmetric pairs come first (lexicographic), then the antisymmetric pairs, then
the diagonal generators.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadDim, NotHermitian, NotTraceless
from .linalg import as_square_matrix, hermitian_deviation

_TRACE_ATOL = 1e-10


@dataclass(frozen=True)
class SuBasis:
    """Ordered su(n) generators; ``coeffs[k]`` is the matrix-unit expansion of
    generator k (identical to the generator's entries)."""

    n: int
    generators: np.ndarray  # shape (n^2 - 1, n, n)
    convention: str

    @property
    def dim(self) -> int:
        return self.n * self.n - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self.generators

    def __iter__(self):
        return iter(self.generators)


def _pair_generators(n: int):
    sym, anti = [], []
    for a in range(n - 1):
        for b in range(a + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[a, b] = 1.0
            s[b, a] = 1.0
            sym.append(s)
            t = np.zeros((n, n), dtype=complex)
            t[a, b] = -1j
            t[b, a] = 1j
            anti.append(t)
    return sym, anti


def _diag_generators(n: int):
    out = []
    for d in range(1, n):
        coef = np.sqrt(2.0 / (d * (d + 1)))
        h = np.zeros((n, n), dtype=complex)
        for j in range(d):
            h[j, j] = coef
        h[d, d] = -d * coef
        out.append(h)
    return out


def build_su_basis(n: int) -> SuBasis:
    """Canonical generator family for su(n).

    n = 2 gives the Pauli matrices and n = 3 the eight Gell-Mann matrices in
    their usual numbering; both are permutations of the generic order.
    """
    if n < 2:
        raise BadDim(f"su(n) basis needs n >= 2, got {n}")
    sym, anti = _pair_generators(n)
    diag = _diag_generators(n)
    if n == 2:
        gens = [sym[0], anti[0], diag[0]]
        convention = "pauli"
    elif n == 3:
        # lambda_1..lambda_8: pairs (1,2), (1,3), (2,3) are sym/anti indices 0,1,2
        gens = [sym[0], anti[0], diag[0], sym[1], anti[1], sym[2], anti[2], diag[1]]
        convention = "gell-mann"
    else:
        gens = sym + anti + diag
        convention = "sym-anti-diag"
    stack = np.stack(gens)
    stack.setflags(write=False)
    return SuBasis(n=n, generators=stack, convention=convention)


def check_hermitian_traceless(h) -> np.ndarray:
    h = as_square_matrix(h)
    if hermitian_deviation(h) > 1e-10:
        raise NotHermitian("direction matrix is not Hermitian")
    scale = max(1.0, float(np.max(np.abs(h))))
    if abs(complex(np.trace(h))) > _TRACE_ATOL * scale:
        raise NotTraceless(f"direction matrix has trace {np.trace(h)!r}")
    return h


def maurer_cartan_coefficient(basis: SuBasis, k: int, direction) -> float:
    """Coefficient of generator k in the expansion of a Hermitian traceless
    direction, i.e. Tr(s_k H) / 2 (the dual pairing of the left-invariant
    one-form with the direction)."""
    h = check_hermitian_traceless(direction)
    if h.shape[0] != basis.n:
        raise BadDim(f"direction dim {h.shape[0]} != basis dim {basis.n}")
    return float(np.trace(basis.generators[k] @ h).real) / 2.0


def su_coefficients(basis: SuBasis, direction) -> np.ndarray:
    """All n^2 - 1 expansion coefficients of a Hermitian traceless direction."""
    h = check_hermitian_traceless(direction)
    if h.shape[0] != basis.n:
        raise BadDim(f"direction dim {h.shape[0]} != basis dim {basis.n}")
    return np.einsum("kab,ba->k", basis.generators, h).real / 2.0
