"""Kraus channels and the empirical DPI / metric-monotonicity harness.

Random CPTP maps are sampled as Haar isometries into system x environment;
the harness tallies violations of S(rho, sigma) >= S(phi rho, phi sigma) over
a (q, z) grid, and compares the closed-form metric against the
finite-difference pullback through sampled channels.  Channel outputs that
lose full rank are mixed with eps * identity (renormalized) before the
divergence, and every such trial is flagged.
"""

from dataclasses import dataclass, field

import numpy as np

from .entropies import QZParams, qz_divergence
from .errors import BadDims, BadGrid, BadParams, DimMismatch
from .fdcheck import (
    DiagonalChart,
    compose_with_channel,
    qz_density_divergence,
    quadratic_form_fd,
)
from .metric import TangentVector, apply_metric, metric_qz
from .states import (
    DensityMatrix,
    _readonly,
    fold,
    haar_unitary,
    random_unfolded,
)
from .su import build_su_basis

EPS_MIX = 1e-9
_TP_ATOL = 1e-10

# (q, z) points where the data processing inequality is established:
# the z = 1 line, the z = q line, and the Bures / Wigner-Yanase members.
PROVEN_QZ_POINTS = (
    (0.25, 1.0),
    (0.5, 1.0),
    (0.75, 1.0),
    (0.6, 0.6),
    (0.9, 0.9),
    (0.5, 0.5),
)


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map rho -> sum_i K_i rho K_i^dag between matrix algebras."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise BadDims("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise BadDims("Kraus operators must share one (out, in) shape")
        acc = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(acc - np.eye(shape[1])))
        if dev > _TP_ATOL:
            raise BadParams(f"channel is not trace preserving (deviation {dev:.3e})")
        object.__setattr__(self, "kraus", tuple(_readonly(k) for k in ops))

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.n != self.in_dim:
            raise DimMismatch(f"channel expects dim {self.in_dim}, got {rho.n}")
        out = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for k in self.kraus:
            out += k @ rho.mat @ k.conj().T
        return DensityMatrix(out)


def apply_channel(phi: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    return phi.apply(rho)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=complex),))


def compose_channels(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    if inner.out_dim != outer.in_dim:
        raise DimMismatch(
            f"cannot compose: inner output {inner.out_dim} != outer input {outer.in_dim}"
        )
    return KrausChannel(tuple(a @ b for a in outer.kraus for b in inner.kraus))


def depolarizing_channel(dim: int, lam: float) -> KrausChannel:
    """rho -> (1 - lam) rho + lam I/dim via Heisenberg-Weyl Kraus operators."""
    if not 0.0 <= lam <= 1.0:
        raise BadParams(f"mixing weight must lie in [0, 1], got {lam}")
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(dim))
    ops = []
    for j in range(dim):
        for k in range(dim):
            w = np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k)
            coef = np.sqrt((1.0 - lam) + lam / dim**2) if j == k == 0 else np.sqrt(lam) / dim
            ops.append(coef * w)
    return KrausChannel(tuple(ops))


def mixing_channel(dim: int, eps: float = EPS_MIX) -> KrausChannel:
    """rho -> (rho + eps I)/(1 + dim * eps), the full-rank restoring map."""
    return depolarizing_channel(dim, dim * eps / (1.0 + dim * eps))


def _random_channel_rng(in_dim, out_dim, env_dim, rng: np.random.Generator) -> KrausChannel:
    if min(in_dim, out_dim, env_dim) < 1:
        raise BadDims(f"channel dims must be >= 1, got {(in_dim, out_dim, env_dim)}")
    if in_dim > out_dim * env_dim:
        raise BadDims(
            f"no isometry into dim {out_dim}x{env_dim} from dim {in_dim}"
        )
    g = rng.standard_normal((out_dim * env_dim, in_dim)) + 1j * rng.standard_normal(
        (out_dim * env_dim, in_dim)
    )
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    blocks = q.reshape(out_dim, env_dim, in_dim)
    return KrausChannel(tuple(blocks[:, e, :] for e in range(env_dim)))


def random_channel(in_dim: int, out_dim: int, env_dim: int, seed: int) -> KrausChannel:
    """Seeded Haar-random CPTP map: orthonormalize a complex Gaussian into an
    isometry V: in -> out x env and slice the environment index into Kraus
    operators.  Trace preservation holds by construction."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return _random_channel_rng(in_dim, out_dim, env_dim, rng)


@dataclass(frozen=True)
class DpiPoint:
    q: float
    z: float
    trials: int
    violations: int
    worst_gap: float
    eps_mixed: int


@dataclass(frozen=True)
class DpiScanResult:
    grid: tuple

    @property
    def total_violations(self) -> int:
        return sum(pt.violations for pt in self.grid)


def _dpi_trial(q: float, z: float, n: int, env_dim: int, rng) -> tuple[float, float, bool]:
    """One (rho, sigma, phi) draw; returns (gap, before, eps_mixed) with
    gap = S(rho, sigma) - S(phi rho, phi sigma)."""
    params = QZParams(q, z)
    rho = fold(random_unfolded(n, 0.01, rng))
    sigma = fold(random_unfolded(n, 0.01, rng))
    phi = _random_channel_rng(n, n, env_dim, rng)
    before = qz_divergence(rho, sigma, params)
    out_r = phi.apply(rho)
    out_s = phi.apply(sigma)
    mixed = not (out_r.invertible and out_s.invertible)
    if mixed:
        # mix both outputs so the comparison is against one stochastic map
        mix = mixing_channel(n)
        out_r = mix.apply(out_r)
        out_s = mix.apply(out_s)
    after = qz_divergence(out_r, out_s, params)
    return before - after, before, mixed


def dpi_scan(
    q_grid, z_grid, n: int, trials: int, seed: int, env_dim: int = 2
) -> DpiScanResult:
    """Tally empirical DPI violations of the q-z divergence over a grid.

    A violation is a trial with S(rho, sigma) - S(phi rho, phi sigma) below
    -1e-8 (1 + |S|).  Per-trial RNG streams derive from (seed, grid indices,
    trial), so results do not depend on evaluation order.
    """
    q_grid = [float(q) for q in q_grid]
    z_grid = [float(z) for z in z_grid]
    if not q_grid or not z_grid:
        raise BadGrid("empty scan grid")
    if any(not 1e-7 < q < 1.0 - 1e-7 for q in q_grid):
        raise BadGrid(f"q grid must lie inside (0, 1), got {q_grid}")
    if any(not z > 0.0 for z in z_grid):
        raise BadGrid(f"z grid must be positive, got {z_grid}")
    if trials < 1:
        raise BadGrid(f"trials must be >= 1, got {trials}")
    points = []
    for iq, q in enumerate(q_grid):
        for iz, z in enumerate(z_grid):
            violations = 0
            mixed_count = 0
            worst = np.inf
            for t in range(trials):
                rng = np.random.default_rng(np.random.SeedSequence([seed, iq, iz, t]))
                gap, before, mixed = _dpi_trial(q, z, n, env_dim, rng)
                mixed_count += mixed
                worst = min(worst, gap)
                if gap < -1e-8 * (1.0 + abs(before)):
                    violations += 1
            points.append(
                DpiPoint(q=q, z=z, trials=trials, violations=violations,
                         worst_gap=float(worst), eps_mixed=mixed_count)
            )
    return DpiScanResult(grid=tuple(points))


def dpi_points_scan(
    points, n: int, trials: int, seed: int, env_dim: int = 2
) -> DpiScanResult:
    """DPI tally over an explicit list of (q, z) points (e.g. the proven set)."""
    out = []
    for i, (q, z) in enumerate(points):
        if not (1e-7 < q < 1.0 - 1e-7 and z > 0.0):
            raise BadGrid(f"point (q={q}, z={z}) outside the admissible range")
        violations = 0
        mixed_count = 0
        worst = np.inf
        for t in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([seed, i, t]))
            gap, before, mixed = _dpi_trial(q, z, n, env_dim, rng)
            mixed_count += mixed
            worst = min(worst, gap)
            if gap < -1e-8 * (1.0 + abs(before)):
                violations += 1
        out.append(
            DpiPoint(q=float(q), z=float(z), trials=trials, violations=violations,
                     worst_gap=float(worst), eps_mixed=mixed_count)
        )
    return DpiScanResult(grid=tuple(out))


@dataclass(frozen=True)
class MonotonicityReport:
    q: float
    z: float
    n: int
    trials: int
    failures: int
    worst_margin: float
    eps_mixed: int
    tolerance: float
    margins: np.ndarray = field(repr=False, default=None)


def monotonicity_check(
    params: QZParams,
    n: int,
    trials: int,
    seed: int,
    env_dim: int = 2,
    tolerance: float = 1e-5,
    assert_mode: bool = False,
) -> MonotonicityReport:
    """Compare the closed-form metric against its finite-difference pullback.

    Per trial: a random base point, unit tangent X and channel phi; the
    closed-form g(X, X) must exceed the FD quadratic form of the pulled-back
    divergence up to the FD tolerance.  ``assert_mode`` raises on the first
    failing trial; params should then lie in the DPI-proven set.
    """
    basis = build_su_basis(n)
    margins = []
    failures = 0
    mixed_count = 0
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, t]))
        base = random_unfolded(n, 0.05, rng)
        a = rng.standard_normal(n)
        a -= a.mean()
        c = rng.standard_normal(n * n - 1)
        norm = np.sqrt(a @ a + c @ c)
        x = TangentVector(simplex=a / norm, su=c / norm)
        phi = _random_channel_rng(n, n, env_dim, rng)
        out = phi.apply(fold(base))
        mixed = not out.invertible
        mixed_count += mixed
        eff = compose_channels(mixing_channel(n), phi) if mixed else phi
        chart = DiagonalChart(base, basis)
        g_fd = quadratic_form_fd(
            compose_with_channel(qz_density_divergence(params), eff),
            chart, x, richardson=True,
        )
        g_closed = apply_metric(metric_qz(base.p, params, basis), x, x)
        margin = g_closed - g_fd
        margins.append(margin)
        if margin < -tolerance:
            failures += 1
            if assert_mode:
                raise AssertionError(
                    f"monotonicity violated at trial {t}: margin {margin:.3e}"
                )
    margins = np.array(margins)
    return MonotonicityReport(
        q=params.q, z=params.z, n=n, trials=trials, failures=failures,
        worst_margin=float(margins.min()) if trials else 0.0,
        eps_mixed=mixed_count, tolerance=tolerance, margins=_readonly(margins),
    )
