"""Finite-matrix model of the weighted semigroup exp(-t B_beta).

B_beta acts in L^2(|x|^{-beta} dx). Through the unitary u -> |x|^{beta/2} u
it is equivalent to Q = X (H + 1) X on the flat grid, X = |x|^alpha with
alpha = (beta + 2s - d)/2 and H the discrete Hardy operator of the spectral
module. The heat kernel with respect to the weighted measure is

    k_t(x_i, x_j) = |x_i|^{beta/2} exp(-tQ)_{ij} |x_j|^{beta/2} / h.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg
from scipy.special import exp1

from .constants import FracParams
from .errors import DomainError, GridError
from .ltchain import F_transform, nash_exponent, q_from_beta
from .spectral import GridSpec, build_operator

__all__ = [
    "WeightedSemigroup",
    "build_weighted_semigroup",
    "default_semigroup",
    "check_positivity_contraction",
    "check_heat_bound",
    "check_nash_inequality",
    "check_trace_estimate",
    "birman_schwinger_equivalence",
    "nash_probe_vectors",
    "nash_heat_chain",
    "nash_constant_from_probes",
    "column_masses",
]

DEFAULT_PARAMS = FracParams(1, 0.25)
DEFAULT_BETA = 0.75
DEFAULT_GRID = GridSpec(1, 256, 8.0)


@dataclass
class WeightedSemigroup:
    beta: float
    params: FracParams
    grid: GridSpec
    Q: np.ndarray = field(repr=False)
    evals: np.ndarray = field(repr=False)
    evecs: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)

    @property
    def alpha(self):
        return (self.beta + 2 * self.params.s - self.params.d) / 2

    @property
    def p_exp(self):
        return nash_exponent(self.beta, self.params)

    @property
    def q_exp(self):
        return q_from_beta(self.beta, self.params)

    @property
    def weight(self):
        """|x_i|^{-beta} times the cell volume."""
        return np.abs(self.x) ** (-self.beta) * self.grid.cell_volume

    @property
    def min_eigenvalue(self):
        return float(self.evals[0])

    def exp_Q(self, t):
        return (self.evecs * np.exp(-t * self.evals)) @ self.evecs.T

    def kernel(self, t):
        """k_t(x_i, x_j) against the weighted measure."""
        a = np.abs(self.x) ** (self.beta / 2)
        return a[:, None] * self.exp_Q(t) * a[None, :] / self.grid.cell_volume

    def compose(self, k1, k2):
        """(k1 o k2)(x, y) = sum_z k1(x, z) k2(z, y) weight(z)."""
        return (k1 * self.weight[None, :]) @ k2

    def to_flat(self, v):
        """U* v = |x|^{-beta/2} v."""
        return np.abs(self.x) ** (-self.beta / 2) * v

    def form(self, v):
        """b_beta[v] = q_beta[U* v] on the flat grid."""
        u = self.to_flat(v)
        return float(self.grid.cell_volume * (u @ (self.Q @ u)))

    def norm(self, v, r):
        return float(np.sum(self.weight * np.abs(v) ** r) ** (1 / r))


def build_weighted_semigroup(beta, p: FracParams = DEFAULT_PARAMS, grid: GridSpec = DEFAULT_GRID):
    d, s = p.d, p.s
    beta = float(beta)
    if not d - 2 * s < beta < d:
        raise DomainError(f"need {d - 2 * s} < beta < {d}, got {beta}")
    if d != 1 or not s < 0.5:
        raise DomainError("the dense semigroup path needs d = 1 and s < 1/2")
    if grid.d != d or grid.n_points > 512:
        raise GridError("semigroup grids are one-dimensional with at most 512 points")
    H = build_operator(grid, p).matrix()
    x = grid.axis()
    X = np.abs(x) ** ((beta + 2 * s - d) / 2)
    Q = X[:, None] * (H + np.eye(grid.n_points)) * X[None, :]
    Q = (Q + Q.T) / 2
    evals, evecs = linalg.eigh(Q)
    return WeightedSemigroup(beta, p, grid, Q, evals, evecs, x)


def default_semigroup():
    return build_weighted_semigroup(DEFAULT_BETA, DEFAULT_PARAMS, DEFAULT_GRID)


def check_positivity_contraction(sg: WeightedSemigroup, times, pos_tol=1e-10, l1_tol=1e-8):
    rows = []
    for t in times:
        if not t > 0:
            raise DomainError("times must be positive")
        k = sg.kernel(t)
        kmax = float(np.abs(k).max())
        i, j = np.unravel_index(np.argmin(k), k.shape)
        col = sg.weight @ k
        rows.append({
            "t": float(t),
            "min_entry": float(k[i, j]),
            "min_at": [int(i), int(j)],
            "max_entry": kmax,
            "max_column_mass": float(col.max()),
            "positive": bool(k[i, j] >= -pos_tol * kmax),
            "contractive": bool(col.max() <= 1 + l1_tol),
        })
    return {"rows": rows, "passed": all(r["positive"] and r["contractive"] for r in rows)}


def column_masses(sg: WeightedSemigroup, t):
    """sum_x k_t(x, y) weight(x) for every y."""
    return sg.weight @ sg.kernel(t)


def check_heat_bound(sg: WeightedSemigroup, K, p_exp=None, times=(0.01, 0.1, 1.0, 10.0), diag_tol=1e-8):
    p_exp = sg.p_exp if p_exp is None else p_exp
    rows = []
    for t in times:
        if not 0.01 <= t <= 10:
            raise DomainError("heat bound is probed on t in [0.01, 10]")
        k = sg.kernel(t)
        half = sg.kernel(t / 2)
        diag = np.sum(half**2 * sg.weight[None, :], axis=1)
        diag_err = float(np.max(np.abs(diag - np.diag(k))) / np.max(np.diag(k)))
        kmax = float(k.max())
        bound = K * t ** (-p_exp)
        rows.append({
            "t": float(t),
            "max_kernel": kmax,
            "bound": bound,
            "slack": bound / kmax,
            "max_diagonal": float(np.diag(k).max()),
            "diagonal_identity_error": diag_err,
            "passed": bool(kmax <= bound and diag_err <= diag_tol),
        })
    return {"K": K, "p": p_exp, "rows": rows, "passed": all(r["passed"] for r in rows)}


def nash_probe_vectors(sg: WeightedSemigroup, count=20, seed=0):
    """Grid indicators, Gaussians, annular bumps and seeded random vectors."""
    x = sg.x
    n = x.size
    rng = np.random.default_rng(seed)
    probes = []
    for i in (n // 2, n // 2 + n // 8, n - 1):
        e = np.zeros(n)
        e[i] = 1.0
        probes.append(e)
    for w in (0.05, 0.2, 0.5, 1.0, 2.0, 4.0):
        probes.append(np.exp(-((x / w) ** 2)))
    for c in (-3.0, 1.0, 2.5):
        probes.append(np.exp(-(((x - c) / 0.3) ** 2)))
    probes.append(np.abs(x) ** (-0.2) * np.exp(-np.abs(x)))
    probes.append(np.where(np.abs(x) < 1, 1.0, 0.0))
    while len(probes) < count:
        probes.append(rng.standard_normal(n))
    return probes[:count]


def check_nash_inequality(sg: WeightedSemigroup, C_prime, samples, rel_tol=1e-12):
    p = sg.p_exp
    rows = []
    for v in samples:
        v = np.asarray(v, dtype=float)
        lhs = sg.norm(v, 2) ** (1 + 1 / p)
        b = sg.form(v)
        rhs = math.sqrt(C_prime * b) * sg.norm(v, 1) ** (1 / p)
        rows.append({"lhs": lhs, "rhs": rhs, "form": b, "slack": rhs / lhs, "passed": bool(lhs <= rhs * (1 + rel_tol))})
    return {"C_prime": C_prime, "p": p, "rows": rows, "passed": all(r["passed"] for r in rows)}


def nash_constant_from_probes(sg: WeightedSemigroup, samples):
    """Smallest C' making the Nash inequality hold on every probe."""
    p = sg.p_exp
    vals = [(sg.norm(v, 2) ** (1 + 1 / p) / sg.norm(v, 1) ** (1 / p)) ** 2 / sg.form(v) for v in samples]
    return max(vals)


def nash_heat_chain(sg: WeightedSemigroup, samples, times=(0.01, 0.1, 1.0, 10.0)):
    """Heat bound (p C'/2)^p 2^p t^{-p} with C' read off the probe set."""
    C = nash_constant_from_probes(sg, samples)
    p = sg.p_exp
    K = (p * C / 2) ** p * 2**p
    rep = check_heat_bound(sg, K, p, times)
    rep["C_prime_probe"] = C
    return rep


def _F_array(lam, a):
    """Vectorized F(lam; a) with F(0) = 0."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam)
    pos = lam > 0
    z = a / lam[pos]
    out[pos] = lam[pos] * np.exp(-z) - a * exp1(z)
    return out


def check_trace_estimate(sg: WeightedSemigroup, W, a, n_t=200, t_range=(1e-3, 1e3), rel_tol=1e-6):
    """tr F(W^{1/2} B^{-1} W^{1/2}) against int_0^inf tr(exp(-tB) f(tW)) dt/t.

    The right side is reported both by the trapezoid rule in log t and in
    closed form, int_0^inf e^{-t lam} (tW - a)_+ dt/t = F(W/lam; a).
    """
    W = np.asarray(W, dtype=float)
    if W.shape != sg.x.shape or np.any(W < 0):
        raise DomainError("W must be a non-negative grid function")
    if not a > 0:
        raise DomainError("a must be positive")
    if sg.evals[0] <= 0:
        raise DomainError("Q must be positive definite")
    sw = np.sqrt(W)
    Qinv = (sg.evecs / sg.evals) @ sg.evecs.T
    M = sw[:, None] * Qinv * sw[None, :]
    mu = linalg.eigvalsh((M + M.T) / 2)
    lhs = float(np.sum(_F_array(np.clip(mu, 0, None), a)))

    U2 = sg.evecs**2
    ts = np.geomspace(*t_range, n_t)
    diag = U2 @ np.exp(-np.outer(sg.evals, ts))  # exp(-tQ)_{ii} = k_t(x,x) weight(x)
    f = np.clip(np.outer(W, ts) - a, 0, None)
    integrand = np.sum(diag * f, axis=0)
    rhs_quad = float(integrate.trapezoid(integrand, np.log(ts)))
    lam_ratio = W[:, None] / sg.evals[None, :]
    rhs_closed = float(np.sum(U2 * _F_array(lam_ratio, a)))
    # integrand left at the ends of the t-window, a proxy for truncation
    tail = float(max(integrand[0], integrand[-1]))
    if rhs_closed > 0:
        passed = lhs <= rhs_quad * (1 + rel_tol) and lhs <= rhs_closed * (1 + rel_tol)
    else:
        passed = lhs == 0
    return {
        "a": a,
        "lhs": lhs,
        "rhs_quadrature": rhs_quad,
        "rhs_closed": rhs_closed,
        "quadrature_error": abs(rhs_quad - rhs_closed),
        "endpoint_integrand": tail,
        "ratio": lhs / rhs_closed if rhs_closed > 0 else 0.0,
        "passed": bool(passed),
    }


def birman_schwinger_equivalence(sg: WeightedSemigroup, V):
    """Eigenvalues of V^{1/2}(H+1)^{-1}V^{1/2} against W^{1/2}Q^{-1}W^{1/2}, W = |x|^{2 alpha} V."""
    V = np.asarray(V, dtype=float)
    if V.shape != sg.x.shape or np.any(V < 0):
        raise DomainError("V must be a non-negative grid function")
    n = sg.x.size
    H = build_operator(sg.grid, sg.params).matrix()
    sv = np.sqrt(V)
    A = sv[:, None] * np.linalg.solve(H + np.eye(n), np.diag(sv))
    e1 = linalg.eigvalsh((A + A.T) / 2)
    W = np.abs(sg.x) ** (2 * sg.alpha) * V
    sw = np.sqrt(W)
    B = sw[:, None] * np.linalg.solve(sg.Q, np.diag(sw))
    e2 = linalg.eigvalsh((B + B.T) / 2)
    scale = max(np.abs(e1).max(), 1e-300)
    err = float(np.max(np.abs(e1 - e2)) / scale)
    return {"max_relative_difference": err, "largest": float(e1[-1]), "passed": err <= 1e-6}
