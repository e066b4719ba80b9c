import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qig.linalg as linalg
from qig.errors import DomainError, NegativeSpectrum, NoConvergence, NotHermitian
from qig.linalg import eig_hermitian, spectral_fn, trace_product_power
from util import rand_hermitian, rand_psd, rand_unitary


class TestEigHermitian:
    def test_identity(self):
        lam, v = eig_hermitian(np.eye(3))
        np.testing.assert_allclose(lam, [1.0, 1.0, 1.0])
        rec = (v * lam) @ v.conj().T
        np.testing.assert_allclose(rec, np.eye(3), atol=1e-14)

    def test_already_diagonal(self):
        lam, _ = eig_hermitian(np.diag([0.2, 0.8]))
        np.testing.assert_allclose(lam, [0.2, 0.8])

    def test_known_spectrum(self):
        # H = V D V^dag with V from an independent QR; recover D
        rng = np.random.default_rng(42)
        v = rand_unitary(rng, 4)
        d = np.array([-2.0, -0.5, 0.3, 1.7])
        h = (v * d) @ v.conj().T
        lam, vecs = eig_hermitian(h)
        np.testing.assert_allclose(lam, d, atol=1e-12)
        rec = (vecs * lam) @ vecs.conj().T
        assert np.linalg.norm(rec - h) < 1e-12 * np.linalg.norm(h)

    def test_eigenvalues_ascending(self):
        rng = np.random.default_rng(0)
        for n in range(2, 7):
            lam, _ = eig_hermitian(rand_hermitian(rng, n))
            assert np.all(np.diff(lam) >= 0)

    def test_reconstruction_and_unitarity(self):
        rng = np.random.default_rng(7)
        for n in range(2, 7):
            for _ in range(20):
                h = rand_hermitian(rng, n, scale=rng.uniform(1e-3, 1e3))
                lam, v = eig_hermitian(h)
                rec = (v * lam) @ v.conj().T
                assert np.linalg.norm(rec - h) <= 1e-12 * max(1.0, np.linalg.norm(h))
                assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000), n=st.integers(2, 6))
    def test_matches_reference_spectrum(self, seed, n):
        h = rand_hermitian(np.random.default_rng(seed), n)
        lam, _ = eig_hermitian(h)
        np.testing.assert_allclose(lam, np.linalg.eigvalsh(h), atol=1e-12)

    def test_deterministic(self):
        h = rand_hermitian(np.random.default_rng(3), 5)
        a = eig_hermitian(h)
        b = eig_hermitian(h.copy())
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_input_not_mutated(self):
        h = rand_hermitian(np.random.default_rng(4), 3)
        before = h.copy()
        eig_hermitian(h)
        np.testing.assert_array_equal(h, before)

    def test_not_hermitian_raises(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(NotHermitian):
            eig_hermitian(m)

    def test_no_convergence(self, monkeypatch):
        monkeypatch.setattr(linalg, "MAX_SWEEPS", 0)
        with pytest.raises(NoConvergence):
            eig_hermitian(rand_hermitian(np.random.default_rng(1), 3))


class TestSpectralFn:
    def test_sqrt_diagonal(self):
        out = spectral_fn(np.diag([4.0, 9.0]), np.sqrt)
        np.testing.assert_allclose(out, np.diag([2.0, 3.0]), atol=1e-14)

    def test_identity_function(self):
        rho = rand_psd(np.random.default_rng(5), 4)
        np.testing.assert_allclose(spectral_fn(rho, lambda x: x), rho, atol=1e-13)

    def test_power_additivity(self):
        rho = rand_psd(np.random.default_rng(6), 4)
        prod = spectral_fn(rho, lambda x: x**0.3) @ spectral_fn(rho, lambda x: x**0.7)
        assert np.max(np.abs(prod - rho)) < 1e-12 * max(1.0, np.linalg.norm(rho))

    def test_power_eigenvalue_consistency(self):
        rng = np.random.default_rng(8)
        m = rand_psd(rng, 5)
        for s in (0.5, 1.7, 3.0):
            lam_m = np.sort(np.linalg.eigvalsh(m))
            lam_out = np.sort(np.linalg.eigvalsh(spectral_fn(m, lambda x: x**s)))
            np.testing.assert_allclose(lam_out, np.maximum(lam_m, 0.0) ** s, atol=1e-12)

    def test_negative_spectrum_rejected(self):
        with pytest.raises(NegativeSpectrum):
            spectral_fn(np.diag([1.0, -0.5]), np.sqrt)

    def test_tiny_negative_clamped(self):
        out = spectral_fn(np.diag([1.0, -1e-13]), np.sqrt)
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-14)

    def test_log_at_zero_is_domain_error(self):
        import math

        with pytest.raises(DomainError):
            spectral_fn(np.diag([1.0, 0.0]), math.log)


class TestTraceProductPower:
    def test_identity_pair(self):
        for n in (2, 3, 5):
            for z in (0.5, 1.0, 2.7):
                assert trace_product_power(np.eye(n), np.eye(n), z) == pytest.approx(n)

    def test_commuting_diagonal(self):
        p = np.array([0.2, 0.3, 0.5])
        r = np.array([0.6, 0.1, 0.3])
        val = trace_product_power(np.diag(p), np.diag(r), 1.0)
        assert val == pytest.approx(np.sum(p * r), abs=1e-14)

    def test_integer_power_polynomial_oracle(self):
        rng = np.random.default_rng(9)
        a, b = rand_psd(rng, 4), rand_psd(rng, 4)
        direct = np.trace(a @ b @ a @ b).real
        assert trace_product_power(a, b, 2.0) == pytest.approx(direct, rel=1e-12)

    def test_argument_symmetry(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            a, b = rand_psd(rng, 3), rand_psd(rng, 3)
            z = rng.uniform(0.3, 3.0)
            ab = trace_product_power(a, b, z)
            ba = trace_product_power(b, a, z)
            assert abs(ab - ba) <= 1e-10 * max(1.0, abs(ab))

    def test_isospectral_surrogates(self):
        # spectrum of b^(1/2) a b^(1/2) == spectrum of a^(1/2) b a^(1/2)
        from util import np_sqrtm

        rng = np.random.default_rng(11)
        a, b = rand_psd(rng, 4), rand_psd(rng, 4)
        s1 = np.sort(np.linalg.eigvalsh(np_sqrtm(b) @ a @ np_sqrtm(b)))
        s2 = np.sort(np.linalg.eigvalsh(np_sqrtm(a) @ b @ np_sqrtm(a)))
        np.testing.assert_allclose(s1, s2, atol=1e-10)

    def test_bad_power(self):
        with pytest.raises(DomainError):
            trace_product_power(np.eye(2), np.eye(2), 0.0)
