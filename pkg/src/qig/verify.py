"""Named verification suites: closed-form metric vs finite-difference oracle.

Each check measures one number against one tolerance, so a report is a flat
list the CLI can print and serialize.  These are the same comparisons the
acceptance tests make, packaged for ad-hoc runs at arbitrary parameters.
"""

from dataclasses import dataclass

import numpy as np

from .entropies import QZParams
from .fdcheck import (
    DiagonalChart,
    criticality_check,
    hessian_metric,
    qz_two_point,
    skewness_tensor,
)
from .metric import TangentVector, apply_metric, metric_qz
from .states import random_unfolded
from .su import SuBasis, build_su_basis, su_coefficients


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance


def random_nonkernel_tangents(
    chart: DiagonalChart, count: int, rng: np.random.Generator
) -> list[TangentVector]:
    """Unit tangents with no component along the diagonal su generators (the
    kernel of the folding map at nondegenerate p)."""
    n = chart.n
    basis = chart.su_basis
    diag_idx = [
        k for k, g in enumerate(basis.generators)
        if np.max(np.abs(g - np.diag(np.diag(g)))) == 0.0
    ]
    out = []
    for _ in range(count):
        a = rng.standard_normal(n)
        a -= a.mean()
        c = rng.standard_normal(basis.dim)
        c[diag_idx] = 0.0
        norm = np.sqrt(a @ a + c @ c)
        out.append(TangentVector(simplex=a / norm, su=c / norm))
    return out


def _rel_dev(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-12)


def check_criticality(params: QZParams, chart: DiagonalChart, tol: float = 1e-6):
    value = criticality_check(qz_two_point(params), chart)
    return VerificationCheck("criticality", value, tol)


def check_hessian_agreement(
    params: QZParams,
    chart: DiagonalChart,
    rng: np.random.Generator,
    vectors: int = 20,
    tol: float = 1e-3,
):
    """Closed form vs Richardson-extrapolated FD Hessian, compared as
    quadratic forms on random non-kernel tangents."""
    fd = hessian_metric(qz_two_point(params), chart, richardson=True, variants=False)
    closed = metric_qz(chart.base.p, params, chart.su_basis)
    worst = 0.0
    for x in random_nonkernel_tangents(chart, vectors, rng):
        worst = max(worst, _rel_dev(fd.quadratic_form(x), apply_metric(closed, x, x)))
    return VerificationCheck("hessian_vs_closed_form", worst, tol)


def check_cross_identities(params: QZParams, chart: DiagonalChart, tol: float = 2e-4):
    """g_ll = g_rr = -g_lr, as relative deviations entry by entry."""
    fd = hessian_metric(qz_two_point(params), chart, richardson=True, variants=True)
    scale = max(float(np.max(np.abs(fd.glr))), 1e-9)
    worst = max(
        float(np.max(np.abs(fd.gll - fd.grr))),
        float(np.max(np.abs(fd.gll + fd.glr))),
    ) / scale
    mixed = VerificationCheck("mixed_dp_theta_block", fd.mixed_block_max, 1e-5)
    return VerificationCheck("gll_grr_glr_identities", worst, tol), mixed


def check_skewness(params: QZParams, chart: DiagonalChart, tol: float = 5e-3):
    """Pairwise consistency of the four defining third-difference combos."""
    res = skewness_tensor(qz_two_point(params), chart, all_combos=True)
    t12, t34 = res.combos["t12"], res.combos["t34"]
    t56, t78 = res.combos["t56"], res.combos["t78"]
    worst = max(
        float(np.max(np.abs(t12 - t56))),
        float(np.max(np.abs(t12 + t34))),
        float(np.max(np.abs(t34 - t78))),
    )
    return VerificationCheck("skewness_combo_consistency", worst, tol)


def check_skewness_symmetric(chart: DiagonalChart, z: float = 1.0, tol: float = 5e-3):
    """At q = 1/2 the divergence is argument-symmetric, so T must vanish."""
    res = skewness_tensor(qz_two_point(QZParams(0.5, z)), chart)
    return VerificationCheck("skewness_zero_at_q_half", float(np.max(np.abs(res.t))), tol)


def check_kernel_annihilation(
    params: QZParams, state, basis: SuBasis, tol: float = 1e-12
):
    """The assembled metric must vanish on commutant directions."""
    from .states import kernel_basis

    g = metric_qz(state.p, params, basis)
    worst = 0.0
    for h in kernel_basis(state):
        x = TangentVector(simplex=np.zeros(state.n), su=su_coefficients(basis, h))
        worst = max(worst, abs(apply_metric(g, x, x)))
    return VerificationCheck("kernel_annihilation", worst, tol)


def run_default_suite(
    dims=(2, 3),
    q: float = 0.4,
    z: float = 1.3,
    seed: int = 7,
    tol_scale: float = 1.0,
    only: str | None = None,
) -> list[VerificationCheck]:
    """criticality, Hessian agreement, cross identities, skewness, and kernel
    annihilation over the given dimensions; ``only`` filters by name substring."""
    params = QZParams(q, z)
    checks: list[VerificationCheck] = []
    for n in dims:
        rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
        base = random_unfolded(n, 0.05, rng)
        basis = build_su_basis(n)
        chart = DiagonalChart(base, basis)
        batch = [
            check_criticality(params, chart),
            check_hessian_agreement(params, chart, rng),
            *check_cross_identities(params, chart),
        ]
        if n == 2:
            batch.append(check_skewness(params, chart))
            batch.append(check_skewness_symmetric(chart, z=z))
        batch.append(check_kernel_annihilation(params, base, basis))
        checks.extend(
            VerificationCheck(f"{c.name}@n={n}", c.value, c.tolerance) for c in batch
        )
    if tol_scale != 1.0:
        checks = [
            VerificationCheck(c.name, c.value, c.tolerance * tol_scale) for c in checks
        ]
    if only:
        checks = [c for c in checks if only in c.name]
    return checks
