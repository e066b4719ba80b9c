"""Shared helpers for the test suite.

Oracles here deliberately go through numpy.linalg (eigh/eigvals/qr), not the
package's own eigensolver, so every comparison crosses two independent
numerical routes.
"""

import numpy as np


def rand_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.conj().T)


def rand_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def rand_psd(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (g @ g.conj().T) / n


def rand_traceless_hermitian(rng, n):
    h = rand_hermitian(rng, n)
    return h - np.trace(h) / n * np.eye(n)


def np_fn(m, f):
    """Matrix function through numpy's eigh (independent of the package path)."""
    lam, v = np.linalg.eigh(m)
    return (v * f(np.maximum(lam, 0.0))) @ v.conj().T


def np_sqrtm(m):
    return np_fn(m, np.sqrt)


def np_power(m, s):
    return np_fn(m, lambda x: x**s)


def np_logm(m):
    lam, v = np.linalg.eigh(m)
    return (v * np.log(lam)) @ v.conj().T
