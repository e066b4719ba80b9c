import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qig.entropies import QZParams
from qig.errors import BadParams, DimMismatch
from qig.metric import (
    TangentVector,
    apply_metric,
    e_coefficients,
    metric_qz,
    petz_metric_qubit,
    petz_monotone_function,
    qubit_metric_closed_form,
    qubit_q1_limit_metric,
    qubit_tangential_coefficient,
    radial_limit_qubit,
    radial_w_sequence,
    special_metric,
)
from qig.states import ProbabilityVector, UnfoldedState, kernel_basis
from qig.su import build_su_basis, su_coefficients


def p_of_w(w):
    return np.array([(1 + w) / 2, (1 - w) / 2])


class TestECoefficients:
    def test_zero_diagonal_and_symmetry(self):
        e = e_coefficients(np.array([0.5, 0.3, 0.2]), QZParams(0.3, 1.7)).e
        assert np.all(np.diag(e) == 0.0)
        np.testing.assert_array_equal(e, e.T)

    def test_bures_pair_weight(self):
        p = np.array([0.6, 0.4])
        e = e_coefficients(p, QZParams(0.5, 0.5)).e
        assert e[0, 1] == pytest.approx((0.2) ** 2 / 1.0, rel=1e-12)

    def test_wigner_yanase_pair_weight(self):
        p = np.array([0.6, 0.4])
        e = e_coefficients(p, QZParams(0.5, 1.0)).e
        assert e[0, 1] == pytest.approx((math.sqrt(0.6) - math.sqrt(0.4)) ** 2, rel=1e-12)

    def test_nonnegative_on_interior(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            p = rng.dirichlet(np.ones(4)) * 0.9 + 0.025
            p /= p.sum()
            params = QZParams(rng.uniform(0.05, 0.95), rng.uniform(0.2, 3.0))
            assert np.min(e_coefficients(p, params).e) >= 0.0

    def test_degenerate_pair_is_exactly_zero(self):
        e = e_coefficients(np.array([0.4, 0.4, 0.2]), QZParams(0.3, 1.2)).e
        assert e[0, 1] == 0.0 and e[1, 0] == 0.0
        assert e[0, 2] > 0.0


class TestMetricQz:
    def test_qubit_tangential_structure(self):
        w, params = 0.44, QZParams(0.35, 1.4)
        g = metric_qz(p_of_w(w), params, build_su_basis(2))
        a, b = (1 + w) / 2, (1 - w) / 2
        c = (
            2 * w * params.z / (params.q * (1 - params.q))
            * (a ** (params.q / params.z) - b ** (params.q / params.z))
            * (a ** ((1 - params.q) / params.z) - b ** ((1 - params.q) / params.z))
            / (a ** (1 / params.z) - b ** (1 / params.z))
        )
        np.testing.assert_allclose(g.tangential, np.diag([c, c, 0.0]), atol=1e-13)
        np.testing.assert_allclose(g.transversal, np.diag([1 / a, 1 / b]), atol=1e-14)

    def test_qutrit_block_structure(self):
        p = np.array([0.5, 0.3, 0.2])
        params = QZParams(0.6, 0.9)
        basis = build_su_basis(3)
        g = metric_qz(p, params, basis)
        e = e_coefficients(p, params).e
        pref = 2 * params.z / (params.q * (1 - params.q))
        expect = np.zeros((8, 8))
        for (a, b), pair in [((0, 1), (0, 1)), ((0, 2), (3, 4)), ((1, 2), (5, 6))]:
            for k in pair:
                expect[k, k] = pref * e[a, b]
        np.testing.assert_allclose(g.tangential, expect, atol=1e-13)

    def test_degenerate_pair_block_vanishes(self):
        p = np.array([0.4, 0.4, 0.2])
        g = metric_qz(p, QZParams(0.3, 1.0), build_su_basis(3))
        assert g.tangential[0, 0] == 0.0 and g.tangential[1, 1] == 0.0
        # the two surviving blocks coincide when the degenerate pair is exact
        assert g.tangential[3, 3] == pytest.approx(g.tangential[5, 5], rel=1e-12)

    def test_closed_form_agreement_grid(self):
        basis = build_su_basis(2)
        for w in np.linspace(-0.9, 0.9, 5):
            for q in np.linspace(0.1, 0.9, 5):
                for z in np.linspace(0.4, 2.8, 5):
                    params = QZParams(q, z)
                    g1 = metric_qz(p_of_w(w), params, basis)
                    g2 = qubit_metric_closed_form(w, params)
                    np.testing.assert_allclose(
                        g1.tangential, g2.tangential, atol=1e-12, rtol=1e-12
                    )
                    np.testing.assert_allclose(g1.transversal, g2.transversal, atol=1e-14)

    @pytest.mark.parametrize("n", (2, 3, 4, 5))
    def test_cjk_symmetry(self, n):
        rng = np.random.default_rng(n)
        p = rng.dirichlet(np.ones(n)) * 0.9 + 0.02
        p /= p.sum()
        g = metric_qz(p, QZParams(0.37, 1.9), build_su_basis(n))
        assert np.max(np.abs(g.tangential - g.tangential.T)) < 1e-13

    def test_imaginary_part_antisymmetric(self):
        # Im(M_j^{ab} M_k^{ba}) weighted by the symmetric E is antisymmetric in
        # (j, k), so it cancels from the symmetric tensor
        n = 3
        rng = np.random.default_rng(9)
        p = rng.dirichlet(np.ones(n)) * 0.9 + 0.02
        p /= p.sum()
        e = e_coefficients(p, QZParams(0.3, 0.8)).e
        m = build_su_basis(n).generators
        im_part = np.einsum("jab,ab,kba->jk", m, e, m).imag
        assert np.max(np.abs(im_part + im_part.T)) < 1e-14

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            metric_qz(np.array([0.5, 0.5]), QZParams(0.5, 0.9), build_su_basis(3))


class TestDegeneracyContinuity:
    def test_near_degenerate_gap(self):
        # at gap 1e-6 the (1,2) block is O(gap^2) and the other blocks differ
        # by O(gap); below the shared cutoff the pair weight is exactly zero
        params = QZParams(0.45, 1.1)
        base = np.array([0.35, 0.35, 0.30])

        def perturbed(gap):
            p = base + np.array([gap, 0.0, -gap])
            return e_coefficients(p / p.sum(), params).e

        e6 = perturbed(1e-6)
        assert e6[0, 1] < 1e-8
        assert abs(e6[0, 2] - e6[1, 2]) < 1e-5
        e9 = perturbed(1e-9)
        assert e9[0, 1] == 0.0
        assert abs(e9[0, 2] - e9[1, 2]) < 1e-8


class TestQubitClosedForms:
    def test_bures_coefficient(self):
        for w in (0.2, 0.5, -0.8):
            g = qubit_metric_closed_form(w, QZParams(0.5, 0.5))
            assert g.tangential[0, 0] == pytest.approx(4 * w * w, rel=1e-12)

    def test_wigner_yanase_coefficient(self):
        for w in (0.3, 0.7):
            g = qubit_metric_closed_form(w, QZParams(0.5, 1.0))
            assert g.tangential[0, 0] == pytest.approx(
                8 * (1 - math.sqrt(1 - w * w)), rel=1e-12
            )

    def test_against_general_formula(self):
        g1 = qubit_metric_closed_form(0.5, QZParams(0.3, 0.7))
        g2 = metric_qz(np.array([0.75, 0.25]), QZParams(0.3, 0.7), build_su_basis(2))
        np.testing.assert_allclose(g1.tangential, g2.tangential, atol=1e-13)

    def test_q1_limit_metric(self):
        assert qubit_q1_limit_metric(1e-12).tangential[0, 0] == pytest.approx(0.0, abs=1e-10)
        assert qubit_q1_limit_metric(0.5).tangential[0, 0] == pytest.approx(
            math.log(3.0), rel=1e-14
        )

    def test_q_to_one_convergence(self):
        w = 0.5
        target = qubit_q1_limit_metric(w).tangential[0, 0]
        val = qubit_metric_closed_form(w, QZParams(1 - 1e-5, 1.6)).tangential[0, 0]
        assert val == pytest.approx(target, abs=1e-4)

    def test_w_range_validated(self):
        with pytest.raises(BadParams):
            qubit_metric_closed_form(1.0, QZParams(0.5, 1.0))


class TestPetz:
    def test_bures_function(self):
        params = QZParams(0.5, 0.5)
        for t in (0.1, 1.0, 2.0, 17.0):
            assert petz_monotone_function(t, params) == pytest.approx((1 + t) / 8, abs=1e-14)

    def test_wigner_yanase_function(self):
        params = QZParams(0.5, 1.0)
        for t in (0.2, 2.0, 31.0):
            assert petz_monotone_function(t, params) == pytest.approx(
                (math.sqrt(t) + 1) ** 2 / 16, abs=1e-14
            )

    def test_q_to_one_function(self):
        for t in (0.3, 2.5):
            target = (t - 1) / (4 * math.log(t))
            val = petz_monotone_function(t, QZParams(1 - 1e-7, 1.0))
            assert val == pytest.approx(target, rel=1e-5)

    def test_value_at_one(self):
        assert petz_monotone_function(1.0, QZParams(0.3, 2.2)) == 0.25

    @settings(max_examples=60, deadline=None)
    @given(
        log_t=st.floats(-6.9, 6.9),
        q=st.floats(0.05, 0.95),
        z=st.floats(0.2, 3.0),
    )
    def test_functional_equation(self, log_t, q, z):
        t = math.exp(log_t)
        params = QZParams(q, z)
        lhs = petz_monotone_function(t, params)
        rhs = t * petz_monotone_function(1.0 / t, params)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_metric_matches_closed_form(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            w = rng.uniform(-0.95, 0.95)
            params = QZParams(rng.uniform(0.05, 0.95), rng.uniform(0.25, 3.0))
            a = petz_metric_qubit(w, params).tangential[0, 0]
            b = qubit_metric_closed_form(w, params).tangential[0, 0]
            assert abs(a - b) <= 1e-10 * max(1.0, abs(b))

    def test_continuous_at_zero(self):
        params = QZParams(0.4, 1.1)
        assert petz_metric_qubit(0.0, params).tangential[0, 0] == 0.0
        assert petz_metric_qubit(1e-8, params).tangential[0, 0] == pytest.approx(0.0, abs=1e-12)


class TestRadialLimit:
    @pytest.mark.parametrize("q,z,target", [(0.5, 1.0, 8.0), (0.5, 0.5, 4.0)])
    def test_known_limits(self, q, z, target):
        params = QZParams(q, z)
        res = radial_limit_qubit(params, radial_w_sequence(params))
        assert res.estimate == pytest.approx(target, rel=1e-6)
        assert res.settled

    def test_generic_point(self):
        params = QZParams(0.3, 1.5)
        res = radial_limit_qubit(params, radial_w_sequence(params))
        assert res.estimate == pytest.approx(2 * 1.5 / (0.3 * 0.7), rel=1e-3)
        assert res.settled

    def test_no_settling_near_endpoint(self):
        params = QZParams(1 - 1e-3, 1.0)
        res = radial_limit_qubit(params, radial_w_sequence(params))
        assert not res.settled
        # values keep growing along the sequence
        assert np.all(np.diff(res.values) > 0)

    def test_bad_sequences(self):
        params = QZParams(0.5, 1.0)
        with pytest.raises(BadParams):
            radial_limit_qubit(params, [0.9, 0.8, 0.99])
        with pytest.raises(BadParams):
            radial_limit_qubit(params, [0.5, 0.9])


class TestSpecialMetrics:
    def test_bures_qubit_value(self):
        g = special_metric(np.array([0.75, 0.25]), "bures", build_su_basis(2))
        assert g.tangential[0, 0] == pytest.approx(1.0, rel=1e-12)  # 4 w^2 at w = 1/2

    def test_bures_matches_qz(self):
        rng = np.random.default_rng(3)
        p = rng.dirichlet(np.ones(4)) * 0.9 + 0.02
        p /= p.sum()
        basis = build_su_basis(4)
        g1 = special_metric(p, "bures", basis)
        g2 = metric_qz(p, QZParams(0.5, 0.5), basis)
        np.testing.assert_allclose(g1.tangential, g2.tangential, atol=1e-12)

    def test_wigner_yanase_matches_qz(self):
        p = np.array([0.5, 0.3, 0.2])
        basis = build_su_basis(3)
        g1 = special_metric(p, "wigner_yanase", basis)
        g2 = metric_qz(p, QZParams(0.5, 1.0), basis)
        np.testing.assert_allclose(g1.tangential, g2.tangential, atol=1e-12)

    def test_tsallis_matches_qz(self):
        p = np.array([0.45, 0.55])
        basis = build_su_basis(2)
        g1 = special_metric(p, "tsallis", basis, q=0.3)
        g2 = metric_qz(p, QZParams(0.3, 1.0), basis)
        np.testing.assert_allclose(g1.tangential, g2.tangential, atol=1e-14)

    def test_von_neumann_qubit_form(self):
        w = 0.62
        g = special_metric(p_of_w(w), "von_neumann", build_su_basis(2))
        expect = 2 * w * math.log((1 + w) / (1 - w))
        assert g.tangential[0, 0] == pytest.approx(expect, rel=1e-12)

    def test_tsallis_requires_q(self):
        with pytest.raises(BadParams):
            special_metric(np.array([0.5, 0.5]), "tsallis", build_su_basis(2))

    def test_unknown_name(self):
        with pytest.raises(BadParams):
            special_metric(np.array([0.5, 0.5]), "heisenberg", build_su_basis(2))


class TestApplyMetric:
    def setup_method(self):
        self.p = np.array([0.5, 0.3, 0.2])
        self.g = metric_qz(self.p, QZParams(0.4, 1.2), build_su_basis(3))

    def test_zero_vector(self):
        zero = TangentVector(np.zeros(3), np.zeros(8))
        v = TangentVector(np.array([0.1, -0.1, 0.0]), np.ones(8))
        assert apply_metric(self.g, v, zero) == 0.0

    def test_pure_simplex_is_fisher_rao(self):
        a1 = np.array([0.2, -0.05, -0.15])
        a2 = np.array([-0.1, 0.1, 0.0])
        v1 = TangentVector(a1, np.zeros(8))
        v2 = TangentVector(a2, np.zeros(8))
        expect = np.sum(a1 * a2 / self.p)
        assert apply_metric(self.g, v1, v2) == pytest.approx(expect, rel=1e-14)

    def test_bilinearity(self):
        rng = np.random.default_rng(4)

        def rand_tangent():
            a = rng.standard_normal(3)
            a -= a.mean()
            return TangentVector(a, rng.standard_normal(8))

        u, v, w = rand_tangent(), rand_tangent(), rand_tangent()
        combo = TangentVector(2 * u.simplex + v.simplex, 2 * u.su + v.su)
        lhs = apply_metric(self.g, combo, w)
        rhs = 2 * apply_metric(self.g, u, w) + apply_metric(self.g, v, w)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_symmetry(self):
        v1 = TangentVector(np.array([0.3, -0.3, 0.0]), np.arange(8.0))
        v2 = TangentVector(np.array([0.0, 0.2, -0.2]), np.ones(8))
        assert apply_metric(self.g, v1, v2) == pytest.approx(
            apply_metric(self.g, v2, v1), abs=1e-13
        )

    def test_dim_mismatch(self):
        v = TangentVector(np.array([0.5, -0.5]), np.zeros(3))
        with pytest.raises(DimMismatch):
            apply_metric(self.g, v, v)

    def test_kernel_annihilation(self):
        rng = np.random.default_rng(5)
        basis = build_su_basis(3)
        from util import rand_unitary

        u = rand_unitary(rng, 3)
        u = u * np.exp(-1j * np.angle(np.linalg.det(u)) / 3)
        state = UnfoldedState(u, ProbabilityVector(self.p))
        for h in kernel_basis(state):
            v = TangentVector(np.zeros(3), su_coefficients(basis, h))
            assert abs(apply_metric(self.g, v, v)) < 1e-12
