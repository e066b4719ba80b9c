"""Finite-difference extraction of tensors from two-point functions.

This is the independent check on the closed-form metric: divergences are
differentiated numerically on the diagonal of the doubled unfolding space.
Probes move along n-1 simplex directions (e_m - e_n) and the n^2-1
left-invariant directions (successive right-multiplication by exp(i s sigma)),
second derivatives come from central 4-point stencils, third derivatives from
8-point product stencils.  Nothing here touches the closed-form coefficient
formulas.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .entropies import QZParams, qz_divergence
from .errors import BadParams, ChannelDimMismatch, ProbeOutOfDomain
from .linalg import eig_hermitian
from .metric import MetricTensor, TangentVector
from .states import DensityMatrix, ProbabilityVector, UnfoldedState, fold
from .su import SuBasis, build_su_basis

TwoPointFunction = Callable[[UnfoldedState, UnfoldedState], float]
DensityDivergence = Callable[[DensityMatrix, DensityMatrix], float]

HESSIAN_STEP = 1e-4
SKEWNESS_STEP = 1e-3


def qz_density_divergence(params: QZParams) -> DensityDivergence:
    return lambda rho, sigma: qz_divergence(rho, sigma, params)


def pulled_back(divergence: DensityDivergence) -> TwoPointFunction:
    """Two-point function on the unfolding space obtained by folding both slots."""
    return lambda x, y: divergence(fold(x), fold(y))


def qz_two_point(params: QZParams) -> TwoPointFunction:
    return pulled_back(qz_density_divergence(params))


@dataclass
class DiagonalChart:
    """Probe directions around a base point of the unfolding space.

    Direction indices 0..n-2 are the simplex directions e_m - e_n; the
    remaining n^2 - 1 are the su(n) generators of ``su_basis``.  Probes stay
    valid as long as p +/- 2*step along every simplex direction remains
    interior.
    """

    base: UnfoldedState
    su_basis: SuBasis
    step: float = HESSIAN_STEP
    simplex_dirs: np.ndarray = field(default=None)  # (n-1, n)

    def __post_init__(self):
        n = self.base.n
        if self.su_basis.n != n:
            raise BadParams(f"basis dim {self.su_basis.n} != state dim {n}")
        if self.simplex_dirs is None:
            dirs = np.zeros((n - 1, n))
            for m in range(n - 1):
                dirs[m, m] = 1.0
                dirs[m, n - 1] = -1.0
            self.simplex_dirs = dirs
        self.simplex_dirs = np.asarray(self.simplex_dirs, dtype=float)
        # spectral data of each generator, for exact exponentials
        self._gen_eig = [eig_hermitian(g) for g in self.su_basis.generators]
        self._base_point = self.base

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def n_simplex(self) -> int:
        return self.simplex_dirs.shape[0]

    @property
    def n_dirs(self) -> int:
        return self.n_simplex + self.su_basis.dim

    def _exp_generator(self, k: int, s: float) -> np.ndarray:
        lam, v = self._gen_eig[k]
        return (v * np.exp(1j * s * lam)) @ v.conj().T

    def point(self, moves: list[tuple[int, float]]) -> UnfoldedState:
        """Apply (direction, parameter) moves in order; simplex moves shift p,
        su moves right-multiply u by the generator flow."""
        if not moves:
            return self._base_point
        u = self.base.u
        p = np.array(self.base.p.p)
        for j, s in moves:
            if j < self.n_simplex:
                p = p + s * self.simplex_dirs[j]
            else:
                u = u @ self._exp_generator(j - self.n_simplex, s)
        if p.min() <= 1e-13:
            raise ProbeOutOfDomain(
                f"probe left the simplex interior (min p = {p.min():.3e})"
            )
        return UnfoldedState(u, ProbabilityVector(p))

    def point_along(self, tangent: TangentVector, s: float) -> UnfoldedState:
        """Move simultaneously along a mixed tangent (simplex + su components)."""
        if tangent.n != self.n:
            raise BadParams("tangent dimension does not match chart")
        h = np.einsum("k,kab->ab", tangent.su, self.su_basis.generators)
        lam, v = eig_hermitian(h)
        u = self.base.u @ ((v * np.exp(1j * s * lam)) @ v.conj().T)
        p = np.array(self.base.p.p) + s * tangent.simplex
        if p.min() <= 1e-13:
            raise ProbeOutOfDomain(
                f"probe left the simplex interior (min p = {p.min():.3e})"
            )
        return UnfoldedState(u, ProbabilityVector(p))

    def coords_of(self, tangent: TangentVector) -> np.ndarray:
        """Chart coordinates of a tangent: simplex part expanded over the
        chart's simplex directions, su part passed through."""
        if tangent.n != self.n:
            raise BadParams("tangent dimension does not match chart")
        a_mat = self.simplex_dirs.T  # (n, n-1)
        coef, *_ = np.linalg.lstsq(a_mat, tangent.simplex, rcond=None)
        return np.concatenate([coef, tangent.su])

    def tangent_of(self, coords: np.ndarray) -> TangentVector:
        coords = np.asarray(coords, dtype=float)
        a = coords[: self.n_simplex] @ self.simplex_dirs
        return TangentVector(simplex=a, su=coords[self.n_simplex :])


def criticality_check(S: TwoPointFunction, chart: DiagonalChart) -> float:
    """Max |first derivative| of S over all one-slot directions on the diagonal.

    Vanishes (to FD accuracy) exactly when S is a potential function; this is
    the precondition for the Hessian to define a tensor.
    """
    h = chart.step
    base = chart.point([])
    worst = 0.0
    for j in range(chart.n_dirs):
        plus = chart.point([(j, +h)])
        minus = chart.point([(j, -h)])
        left = (S(plus, base) - S(minus, base)) / (2.0 * h)
        right = (S(base, plus) - S(base, minus)) / (2.0 * h)
        worst = max(worst, abs(left), abs(right))
    return worst


def _second_blocks(S: TwoPointFunction, chart: DiagonalChart, h: float, variants: bool):
    d = chart.n_dirs
    plus = [chart.point([(j, +h)]) for j in range(d)]
    minus = [chart.point([(j, -h)]) for j in range(d)]
    glr = np.empty((d, d))
    for j in range(d):
        for k in range(d):
            glr[j, k] = (
                S(plus[j], plus[k]) - S(plus[j], minus[k])
                - S(minus[j], plus[k]) + S(minus[j], minus[k])
            ) / (4.0 * h * h)
    gll = grr = None
    if variants:
        base = chart.point([])
        gll = np.empty((d, d))
        grr = np.empty((d, d))
        for j in range(d):
            for k in range(d):
                acc_l = acc_r = 0.0
                for s1 in (+h, -h):
                    for s2 in (+h, -h):
                        sign = 1.0 if s1 * s2 > 0 else -1.0
                        pt = chart.point([(j, s1), (k, s2)])
                        acc_l += sign * S(pt, base)
                        acc_r += sign * S(base, pt)
                gll[j, k] = acc_l / (4.0 * h * h)
                grr[j, k] = acc_r / (4.0 * h * h)
    return glr, gll, grr


@dataclass
class FdMetric:
    """Finite-difference tensor in chart coordinates plus its block assembly.

    ``chart_matrix`` is the metric as a quadratic form on chart coordinates
    (-d^2 S/dq dQ on the diagonal); ``glr``/``gll``/``grr`` are the raw
    second-derivative matrices for the cross identities g_ll = g_rr = -g_lr.
    """

    chart: DiagonalChart
    chart_matrix: np.ndarray
    glr: np.ndarray
    gll: np.ndarray | None
    grr: np.ndarray | None
    step: float
    richardson: bool

    @property
    def mixed_block_max(self) -> float:
        ns = self.chart.n_simplex
        return float(np.max(np.abs(self.chart_matrix[:ns, ns:])))

    @property
    def metric(self) -> MetricTensor:
        ns = self.chart.n_simplex
        a_pinv = np.linalg.pinv(self.chart.simplex_dirs.T)  # (n-1, n)
        transversal = a_pinv.T @ self.chart_matrix[:ns, :ns] @ a_pinv
        return MetricTensor(
            n=self.chart.n,
            transversal=transversal,
            tangential=self.chart_matrix[ns:, ns:],
            basis_id=self.chart.su_basis.convention,
            label=f"fd(step={self.step},richardson={self.richardson})",
        )

    def quadratic_form(self, tangent: TangentVector) -> float:
        c = self.chart.coords_of(tangent)
        return float(c @ self.chart_matrix @ c)


def hessian_metric(
    S: TwoPointFunction,
    chart: DiagonalChart,
    richardson: bool = False,
    variants: bool = True,
) -> FdMetric:
    """Extract the metric as mixed second differences of S on the diagonal.

    The metric is -d^2 S in (left, right) directions; with ``richardson`` a
    half-step pass removes the leading O(h^2) truncation term.  ``variants``
    also measures the same-slot second derivatives for the cross-identity
    tests.
    """
    h = chart.step
    glr, gll, grr = _second_blocks(S, chart, h, variants)
    if richardson:
        glr2, gll2, grr2 = _second_blocks(S, chart, h / 2.0, variants)
        glr = (4.0 * glr2 - glr) / 3.0
        if variants:
            gll = (4.0 * gll2 - gll) / 3.0
            grr = (4.0 * grr2 - grr) / 3.0
    return FdMetric(
        chart=chart, chart_matrix=-glr, glr=glr, gll=gll, grr=grr,
        step=h, richardson=richardson,
    )


_SLOT_PATTERNS = {
    "t1": "lll", "t2": "rrr", "t3": "llr", "t4": "rrl",
    "t5": "lrr", "t6": "rll", "t7": "lrl", "t8": "rlr",
}


def _third_mixed(S, chart, slots: str, j: int, k: int, l: int, h: float) -> float:
    total = 0.0
    for s1 in (+h, -h):
        for s2 in (+h, -h):
            for s3 in (+h, -h):
                sign = math.copysign(1.0, s1) * math.copysign(1.0, s2) * math.copysign(1.0, s3)
                left_moves, right_moves = [], []
                for slot, d, s in zip(slots, (j, k, l), (s1, s2, s3)):
                    (left_moves if slot == "l" else right_moves).append((d, s))
                total += sign * S(chart.point(left_moves), chart.point(right_moves))
    return total / (8.0 * h**3)


def _third_tensor(S, chart, slots: str, h: float) -> np.ndarray:
    d = chart.n_dirs
    t = np.empty((d, d, d))
    for j in range(d):
        for k in range(d):
            for l in range(d):
                t[j, k, l] = _third_mixed(S, chart, slots, j, k, l, h)
    return t


@dataclass
class SkewnessResult:
    """Third-derivative tensor T = (lll-slot minus rrl-slot mixed thirds);
    ``combos`` holds the four defining differences t12, t34, t56, t78 which
    must satisfy t12 = t56 = -t34 = -t78."""

    t: np.ndarray
    combos: dict[str, np.ndarray]
    step: float


def skewness_tensor(
    S: TwoPointFunction,
    chart: DiagonalChart,
    step: float = SKEWNESS_STEP,
    all_combos: bool = False,
) -> SkewnessResult:
    """Rank-3 tensor from third differences of a potential function.

    The canonical combination is T = T_llr - T_rrl; with ``all_combos`` the
    other three defining differences are measured as well.
    """
    t3 = _third_tensor(S, chart, _SLOT_PATTERNS["t3"], step)
    t4 = _third_tensor(S, chart, _SLOT_PATTERNS["t4"], step)
    combos = {"t34": t3 - t4}
    if all_combos:
        t1 = _third_tensor(S, chart, _SLOT_PATTERNS["t1"], step)
        t2 = _third_tensor(S, chart, _SLOT_PATTERNS["t2"], step)
        t5 = _third_tensor(S, chart, _SLOT_PATTERNS["t5"], step)
        t6 = _third_tensor(S, chart, _SLOT_PATTERNS["t6"], step)
        t7 = _third_tensor(S, chart, _SLOT_PATTERNS["t7"], step)
        t8 = _third_tensor(S, chart, _SLOT_PATTERNS["t8"], step)
        combos["t12"] = t1 - t2
        combos["t56"] = t5 - t6
        combos["t78"] = t7 - t8
    return SkewnessResult(t=combos["t34"], combos=combos, step=step)


def compose_with_channel(divergence: DensityDivergence, phi) -> TwoPointFunction:
    """(x, y) -> divergence(phi(fold x), phi(fold y))."""
    return lambda x, y: divergence(phi.apply(fold(x)), phi.apply(fold(y)))


def pullback_metric(
    divergence: DensityDivergence,
    phi,
    chart: DiagonalChart,
    richardson: bool = False,
    variants: bool = False,
) -> FdMetric:
    """Hessian-extracted tensor of the divergence composed with a channel,
    expressed in the input chart."""
    if phi.in_dim != chart.n:
        raise ChannelDimMismatch(
            f"channel input dim {phi.in_dim} != chart dim {chart.n}"
        )
    return hessian_metric(
        compose_with_channel(divergence, phi), chart,
        richardson=richardson, variants=variants,
    )


def quadratic_form_fd(
    S: TwoPointFunction,
    chart: DiagonalChart,
    tangent: TangentVector,
    richardson: bool = True,
) -> float:
    """g(X, X) for a single mixed direction, via -d^2/ds dt S(x(s), y(t))."""

    def stencil(h: float) -> float:
        pts = {s: chart.point_along(tangent, s) for s in (+h, -h)}
        val = (
            S(pts[h], pts[h]) - S(pts[h], pts[-h])
            - S(pts[-h], pts[h]) + S(pts[-h], pts[-h])
        )
        return -val / (4.0 * h * h)

    h = chart.step
    g = stencil(h)
    if richardson:
        g = (4.0 * stencil(h / 2.0) - g) / 3.0
    return g
