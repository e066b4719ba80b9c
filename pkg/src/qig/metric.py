"""Closed-form metric tensors induced by the q-z divergences.

On the unfolding space the metric splits into a Fisher-Rao block on simplex
tangents (diag(1/p) in the overcomplete dp basis) and a tangential block
z/(q(1-q)) * C_jk on the left-invariant directions, with

    C_jk = sum'_{ab} E_ab Re(M_j^{ab} M_k^{ba}),
    E_ab = (p_a - p_b)(p_a^{q/z} - p_b^{q/z})(p_a^{(1-q)/z} - p_b^{(1-q)/z})
           / (p_a^{1/z} - p_b^{1/z}),

where the primed sum drops coinciding eigenvalue pairs (the coefficient
vanishes quadratically there).  Qubit closed forms, the Petz representation,
the weak radial limit, and the named special-limit metrics are provided as
separate entry points so each identity can be cross-checked against the
general formula.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, DimMismatch, DomainError
from .entropies import QZParams
from .states import DEGENERACY_RTOL, _readonly, as_prob_vector
from .su import SuBasis, build_su_basis


@dataclass(frozen=True)
class ECoefficients:
    """Eigenvalue-pair weights of the tangential metric block: symmetric,
    zero diagonal, non-negative on the simplex interior."""

    e: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e", _readonly(np.asarray(self.e, dtype=float)))

    @property
    def n(self) -> int:
        return self.e.shape[0]


@dataclass(frozen=True)
class MetricTensor:
    """Block metric on the unfolding space.

    ``transversal`` is an n x n quadratic form on simplex tangents in the
    overcomplete dp basis (only its restriction to sum-zero vectors is
    meaningful); ``tangential`` acts on the coefficients of left-invariant
    directions in the generator basis tagged by ``basis_id``.
    """

    n: int
    transversal: np.ndarray
    tangential: np.ndarray
    basis_id: str
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.transversal, dtype=float)
        g = np.asarray(self.tangential, dtype=float)
        if t.shape != (self.n, self.n):
            raise DimMismatch(f"transversal shape {t.shape} for n={self.n}")
        d = self.n * self.n - 1
        if g.shape != (d, d):
            raise DimMismatch(f"tangential shape {g.shape} for n={self.n}")
        object.__setattr__(self, "transversal", _readonly(t))
        object.__setattr__(self, "tangential", _readonly(g))


@dataclass(frozen=True)
class TangentVector:
    """Tangent on the unfolding space: a simplex component (entries summing to
    zero) plus coefficients over the su(n) generators."""

    simplex: np.ndarray
    su: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.simplex, dtype=float).reshape(-1)
        c = np.asarray(self.su, dtype=float).reshape(-1)
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
        if abs(a.sum()) > 1e-12 * scale:
            raise BadParams(f"simplex component sums to {a.sum()!r}, not 0")
        object.__setattr__(self, "simplex", _readonly(a))
        object.__setattr__(self, "su", _readonly(c))

    @property
    def n(self) -> int:
        return self.simplex.size


def _pair_weight(pa: float, pb: float, params: QZParams) -> float:
    q, z = params.q, params.z
    num = (pa - pb) * (pa ** (q / z) - pb ** (q / z)) * (
        pa ** ((1.0 - q) / z) - pb ** ((1.0 - q) / z)
    )
    return num / (pa ** (1.0 / z) - pb ** (1.0 / z))


def e_coefficients(p, params: QZParams) -> ECoefficients:
    """Pair weights E_ab; exactly zero for pairs within the degeneracy cutoff."""
    pv = as_prob_vector(p).p
    n = pv.size
    e = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if abs(pv[a] - pv[b]) <= DEGENERACY_RTOL * max(pv[a], pv[b]):
                continue
            e[a, b] = e[b, a] = _pair_weight(pv[a], pv[b], params)
    return ECoefficients(e)


def _tangential_from_weights(weights: np.ndarray, basis: SuBasis) -> np.ndarray:
    """C_jk = sum_ab w_ab Re(M_j^ab M_k^ba) over the generator stack."""
    m = basis.generators
    return np.einsum("jab,ab,kba->jk", m, weights, m).real


def _metric(p, weights, prefactor, basis, label) -> MetricTensor:
    pv = as_prob_vector(p).p
    if basis.n != pv.size:
        raise DimMismatch(f"basis dim {basis.n} != simplex dim {pv.size}")
    transversal = np.diag(1.0 / pv)
    tangential = prefactor * _tangential_from_weights(weights, basis)
    tangential = 0.5 * (tangential + tangential.T)
    return MetricTensor(
        n=pv.size,
        transversal=transversal,
        tangential=tangential,
        basis_id=basis.convention,
        label=label,
    )


def metric_qz(p, params: QZParams, basis: SuBasis) -> MetricTensor:
    """Assembled q-z metric at simplex point p in the given generator basis."""
    e = e_coefficients(p, params)
    pref = params.z / (params.q * (1.0 - params.q))
    return _metric(p, e.e, pref, basis, label=f"qz(q={params.q},z={params.z})")


def special_metric(p, which: str, basis: SuBasis, q: float | None = None) -> MetricTensor:
    """Named limit metrics evaluated directly from their closed forms.

    which: "bures" (pair weight (pa-pb)^2/(pa+pb), prefactor 2),
    "wigner_yanase" ((sqrt(pa)-sqrt(pb))^2, prefactor 4), "tsallis" (needs q;
    weight at z = 1, prefactor 1/(q(1-q))), or "von_neumann" (the analytic
    q -> 1 limit (pa-pb)(log pa - log pb), prefactor 1).
    """
    pv = as_prob_vector(p).p
    n = pv.size
    w = np.zeros((n, n))

    def fill(fn):
        for a in range(n):
            for b in range(a + 1, n):
                if abs(pv[a] - pv[b]) <= DEGENERACY_RTOL * max(pv[a], pv[b]):
                    continue
                w[a, b] = w[b, a] = fn(pv[a], pv[b])

    if which == "bures":
        fill(lambda x, y: (x - y) ** 2 / (x + y))
        pref = 2.0
    elif which == "wigner_yanase":
        fill(lambda x, y: (math.sqrt(x) - math.sqrt(y)) ** 2)
        pref = 4.0
    elif which == "tsallis":
        if q is None:
            raise BadParams("tsallis metric needs the q parameter")
        params = QZParams(q, 1.0)
        fill(lambda x, y: _pair_weight(x, y, params))
        pref = 1.0 / (q * (1.0 - q))
    elif which == "von_neumann":
        fill(lambda x, y: (x - y) * (math.log(x) - math.log(y)))
        pref = 1.0
    else:
        raise BadParams(f"unknown special metric {which!r}")
    return _metric(p, w, pref, basis, label=f"special:{which}")


def apply_metric(g: MetricTensor, v1: TangentVector, v2: TangentVector) -> float:
    """Evaluate the bilinear form on two tangents."""
    if v1.n != g.n or v2.n != g.n:
        raise DimMismatch(
            f"tangent dims {v1.n}, {v2.n} do not match metric dim {g.n}"
        )
    d = g.n * g.n - 1
    if v1.su.size != d or v2.su.size != d:
        raise DimMismatch("tangent su-coefficient length does not match the basis")
    val = v1.simplex @ g.transversal @ v2.simplex
    val += v1.su @ g.tangential @ v2.su
    return float(val)


# ---------------------------------------------------------------------------
# qubit closed forms
# ---------------------------------------------------------------------------


def _check_w(w: float) -> float:
    if not (np.isfinite(w) and -1.0 < w < 1.0):
        raise BadParams(f"Bloch parameter w must lie in (-1, 1), got {w}")
    return float(w)


def qubit_tangential_coefficient(w: float, params: QZParams) -> float:
    """Coefficient of theta^1 x theta^1 (= theta^2 x theta^2) for the qubit:

        2wz/(q(1-q)) * (a_{q/z}-b_{q/z})(a_{(1-q)/z}-b_{(1-q)/z}) / (a_{1/z}-b_{1/z})

    with a = (1+w)/2, b = (1-w)/2 raised to the indicated exponents.
    """
    w = _check_w(w)
    if w == 0.0:
        return 0.0
    q, z = params.q, params.z
    a, b = (1.0 + w) / 2.0, (1.0 - w) / 2.0
    num = (a ** (q / z) - b ** (q / z)) * (a ** ((1.0 - q) / z) - b ** ((1.0 - q) / z))
    return 2.0 * w * z / (q * (1.0 - q)) * num / (a ** (1.0 / z) - b ** (1.0 / z))


def _qubit_metric(w: float, tang_coef: float, label: str) -> MetricTensor:
    a, b = (1.0 + w) / 2.0, (1.0 - w) / 2.0
    transversal = np.diag([1.0 / a, 1.0 / b])
    tangential = np.diag([tang_coef, tang_coef, 0.0])
    return MetricTensor(
        n=2, transversal=transversal, tangential=tangential,
        basis_id="pauli", label=label,
    )


def qubit_metric_closed_form(w: float, params: QZParams) -> MetricTensor:
    """Qubit metric from the scalar closed form (independent of metric_qz)."""
    w = _check_w(w)
    return _qubit_metric(
        w, qubit_tangential_coefficient(w, params),
        label=f"qubit-closed(q={params.q},z={params.z})",
    )


def qubit_q1_limit_metric(w: float) -> MetricTensor:
    """q -> 1 limit of the qubit metric: tangential 2w log((1+w)/(1-w)),
    z-independent, continuous through w = 0."""
    w = _check_w(w)
    coef = 0.0 if w == 0.0 else 2.0 * w * math.log((1.0 + w) / (1.0 - w))
    return _qubit_metric(w, coef, label="qubit-q1-limit")


def petz_monotone_function(t: float, params: QZParams) -> float:
    """Operator monotone representative of the qubit q-z metric:

        f(t) = q(1-q)/(4z) * (t-1)(t^{1/z}-1) / ((t^{q/z}-1)(t^{(1-q)/z}-1)),

    continuously extended to f(1) = 1/4; satisfies f(t) = t f(1/t).
    """
    if not (np.isfinite(t) and t > 0.0):
        raise DomainError(f"operator monotone function needs t > 0, got {t}")
    q, z = params.q, params.z
    if t == 1.0:
        return 0.25
    lt = math.log(t)
    # expm1 keeps each factor accurate when t is close to 1
    num = (t - 1.0) * math.expm1(lt / z)
    den = math.expm1(q * lt / z) * math.expm1((1.0 - q) * lt / z)
    return q * (1.0 - q) / (4.0 * z) * num / den


def petz_metric_qubit(w: float, params: QZParams) -> MetricTensor:
    """Qubit metric in Petz form: tangential w^2 / ((1+w) f((1-w)/(1+w)))."""
    w = _check_w(w)
    if w == 0.0:
        coef = 0.0
    else:
        t = (1.0 - w) / (1.0 + w)
        coef = w * w / ((1.0 + w) * petz_monotone_function(t, params))
    return _qubit_metric(w, coef, label=f"qubit-petz(q={params.q},z={params.z})")


# ---------------------------------------------------------------------------
# weak radial limit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialLimitResult:
    """Tangential coefficient along a sequence w -> 1: raw values, the last
    one, an extrapolated estimate, and whether the sequence settled."""

    values: np.ndarray
    last_value: float
    estimate: float
    settled: bool

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(np.asarray(self.values, float)))


def _boundary_exponents(params: QZParams, s_max: float = 1.05) -> list[float]:
    """Exponents of the 1-w corrections to the boundary coefficient: all sums
    of q/z, (1-q)/z, 1/z and 1 up to s_max, deduplicated."""
    singles = [params.q / params.z, (1.0 - params.q) / params.z, 1.0 / params.z, 1.0]
    tol = 1e-9
    sums = {0.0}
    frontier = {0.0}
    while frontier:
        new = set()
        for base in frontier:
            for s in singles:
                v = base + s
                if v <= s_max + tol:
                    new.add(round(v, 12))
        new -= sums
        sums |= new
        frontier = new
    out: list[float] = []
    for x in sorted(x for x in sums if x > tol):
        if not out or x - out[-1] > tol:
            out.append(x)
    return out


def radial_w_sequence(
    params: QZParams, delta_end: float = 1e-6, ratio: float = 3.0, count: int | None = None
) -> list[float]:
    """Geometric approach to the boundary, w_k = 1 - delta_end * ratio^(count-1-k),
    long enough to eliminate every known correction exponent."""
    if count is None:
        count = min(max(len(_boundary_exponents(params)) + 3, 8), 16)
    count = min(count, 16)
    while count > 4 and delta_end * ratio ** (count - 1) >= 0.5:
        count -= 1
    return [1.0 - delta_end * ratio ** (count - 1 - k) for k in range(count)]


def _aitken_pass(seq: list[float]) -> list[float]:
    out = []
    for f0, f1, f2 in zip(seq, seq[1:], seq[2:]):
        d2 = (f2 - f1) - (f1 - f0)
        out.append(f2 if d2 == 0.0 else f2 - (f2 - f1) ** 2 / d2)
    return out


def radial_limit_qubit(params: QZParams, w_sequence) -> RadialLimitResult:
    """Extrapolate the qubit tangential coefficient toward the pure-state
    boundary.  For q away from 0 and 1 the limit is 2z/(q(1-q)); near the
    endpoints the values grow without settling and ``settled`` comes back
    False.

    A geometric sequence (as produced by ``radial_w_sequence``) is
    extrapolated by Richardson elimination of the known correction exponents;
    anything else falls back to iterated Aitken.
    """
    ws = [float(w) for w in w_sequence]
    if len(ws) < 3:
        raise BadParams("w_sequence needs at least 3 points")
    if any(not (0.0 < w < 1.0) for w in ws) or any(b <= a for a, b in zip(ws, ws[1:])):
        raise BadParams("w_sequence must be strictly increasing inside (0, 1)")
    values = [qubit_tangential_coefficient(w, params) for w in ws]
    increments = np.abs(np.diff(values))
    settled = bool(increments[-1] <= 0.5 * increments[0]) if increments[0] > 0 else True

    deltas = np.array([1.0 - w for w in ws])
    ratios = deltas[:-1] / deltas[1:]
    if np.max(np.abs(ratios - ratios[0])) <= 1e-6 * ratios[0]:
        big_r = float(ratios[0])
        seq = list(values)
        for s in _boundary_exponents(params):
            if len(seq) < 2:
                break
            rho = big_r ** (-s)
            seq = [(seq[k + 1] - rho * seq[k]) / (1.0 - rho) for k in range(len(seq) - 1)]
        estimate = seq[-1]
    else:
        seq = list(values)
        while len(seq) >= 3:
            seq = _aitken_pass(seq)
        estimate = seq[-1]
    return RadialLimitResult(
        values=np.array(values), last_value=values[-1],
        estimate=float(estimate), settled=settled,
    )
