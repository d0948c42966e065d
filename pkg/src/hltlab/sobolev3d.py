"""Explicit Sobolev-constant bound for the relativistic case d = 3, s = 1/2.

For 3/2 < q < 3 and alpha = 2 - 3/q,

    rho(lam) = (1-alpha)/(pi lam^{1+alpha}) int_1^inf dr / (r^{(1+alpha)/2}(r - lam^{-2}))

and the Sobolev constant C_{q,3,1/2} is bounded by

    pi^2/(3 q^2) (1-alpha) (3/(4 pi))^{4/3} inf_{lam>1} lam^{2(1-alpha)} / (|Phi(alpha)| - rho(lam))_+^2.

The module also carries the trial function psi^{eps,delta}: its Hardy
energy through the one-dimensional reduction, the limit of that energy as
eps -> 0 in digamma form, the digamma integral identities behind the limit,
and the eps-regularized rho.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, optimize

from .constants import FracParams, phi_explicit_d3, phi_function
from .errors import DomainError, IdentityViolation, OptimizerError
from .quadrature import DEFAULT_QUAD, QuadratureSpec
from .specfun import digamma

__all__ = [
    "SobolevBoundResult",
    "alpha_from_q",
    "rho",
    "rho_decay_constant",
    "bound_prefactor",
    "bound_objective",
    "sobolev_constant_bound",
    "psi_energy_limit",
    "psi_energy_concavity_bound",
    "psi_energy_numeric",
    "psi_energy_extrapolated",
    "digamma_identity_checks",
    "rho_eps_delta",
]

RELATIVISTIC = FracParams(3, 0.5)
LAMBDA_RANGE = (1 + 1e-6, 1e6)
TIGHT = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdivisions=2000)


def alpha_from_q(q):
    q = float(q)
    if not 1.5 < q < 3:
        raise DomainError(f"need 3/2 < q < 3, got {q}")
    return 2 - 3 / q


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def rho(lam, alpha, quad: QuadratureSpec = TIGHT):
    """rho(lam) by quadrature in t with r = 1 + e^t, evaluated in log form."""
    lam = float(lam)
    _check_alpha(alpha)
    if not lam > 1 + 1e-9:
        raise DomainError(f"rho needs lam > 1, got {lam}")
    ec = -math.expm1(-2 * math.log(lam))  # 1 - lam^-2 without cancellation near lam = 1
    c = math.log(ec)
    e = (1 + alpha) / 2

    # e^t / ((1 + e^t)^e (e^c + e^t)), written in e^t or e^-t to avoid overflow
    def f(t):
        if t < 0:
            x = math.exp(t)
            return x / ((1 + x) ** e * (ec + x))
        y = math.exp(-t)
        return y**e / ((1 + y) ** e * (ec * y + 1))

    kw = quad.quad_kwargs()
    v = integrate.quad(f, -math.inf, c, **kw)[0] + integrate.quad(f, c, math.inf, **kw)[0]
    return (1 - alpha) / (math.pi * lam ** (1 + alpha)) * v


def rho_decay_constant(alpha):
    """lim lam^{1+alpha} rho(lam) = (1-alpha)/pi * 2/(1+alpha)."""
    _check_alpha(alpha)
    return (1 - alpha) / math.pi * 2 / (1 + alpha)


def phi_abs(alpha):
    return abs(phi_function(alpha, RELATIVISTIC))


def bound_prefactor(q):
    alpha = alpha_from_q(q)
    return math.pi**2 / (3 * q * q) * (1 - alpha) * (3 / (4 * math.pi)) ** (4 / 3)


def bound_objective(lam, alpha, phi=None):
    """lam^{2(1-alpha)} / (|Phi| - rho(lam))_+^2, +inf where infeasible."""
    phi = phi_abs(alpha) if phi is None else phi
    gap = phi - rho(lam, alpha)
    if gap <= 0:
        return math.inf
    return lam ** (2 * (1 - alpha)) / gap**2


@dataclass
class SobolevBoundResult:
    q_exp: float
    alpha: float
    lambda_star: float
    rho_at_star: float
    phi_abs: float
    bound: float
    prefactor: float
    trace: list = field(default_factory=list, repr=False)

    def recompute(self):
        """Re-evaluate the bound from the stored components."""
        gap = max(self.phi_abs - self.rho_at_star, 0.0)
        return (
            math.pi**2
            / (3 * self.q_exp**2)
            * (1 - self.alpha)
            * (3 / (4 * math.pi)) ** (4 / 3)
            * self.lambda_star ** (2 * (1 - self.alpha))
            / gap**2
        )

    def to_dict(self, with_trace=True):
        out = asdict(self)
        if not with_trace:
            out.pop("trace")
        return out


def sobolev_constant_bound(q, n_grid=48):
    """Minimize the bound over lam > 1: log-grid bracketing, then golden section."""
    alpha = alpha_from_q(q)
    phi = phi_abs(alpha)
    trace = []

    def obj(log_lam):
        lam = math.exp(log_lam)
        v = bound_objective(lam, alpha, phi)
        trace.append((lam, v))
        return v

    lo, hi = (math.log(x) for x in LAMBDA_RANGE)
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([obj(x) for x in grid])
    feasible = np.isfinite(vals)
    if not feasible.any():
        raise OptimizerError("no feasible lambda in [1+1e-6, 1e6]", trace)
    i = int(np.argmin(np.where(feasible, vals, np.inf)))
    if 0 < i < n_grid - 1 and np.isfinite(vals[i - 1]) and np.isfinite(vals[i + 1]):
        res = optimize.minimize_scalar(
            obj, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", options={"xtol": 1e-10}
        )
        x_star = float(res.x) if res.fun <= vals[i] else float(grid[i])
    else:
        x_star = float(grid[i])
    lam = math.exp(x_star)
    r = rho(lam, alpha)
    if not phi - r > 0:
        raise OptimizerError("optimum is infeasible", trace)
    result = SobolevBoundResult(
        q_exp=float(q),
        alpha=alpha,
        lambda_star=lam,
        rho_at_star=r,
        phi_abs=phi,
        bound=0.0,
        prefactor=bound_prefactor(q),
        trace=trace,
    )
    result.bound = result.recompute()
    return result


# ------------------------------------------------------------- psi^{eps,delta}
def _check_psi(alpha, delta):
    _check_alpha(alpha)
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")


def psi_energy_limit(alpha, delta):
    """lim_{eps->0} h[psi^{eps,delta}] = 4(psi(3/2 - alpha/2) + psi(1+delta) - 2 psi(1))."""
    _check_psi(alpha, delta)
    value = 4 * (digamma(1.5 - alpha / 2) + digamma(1 + delta) - 2 * digamma(1))
    bound = psi_energy_concavity_bound(alpha, delta)
    if value > bound * (1 + 1e-14):
        raise IdentityViolation("energy limit exceeds its concavity bound", value - bound)
    return value


def psi_energy_concavity_bound(alpha, delta):
    """(2 pi^2 / 3)((1-alpha)/2 + delta), from concavity of digamma and psi'(1) = pi^2/6."""
    _check_psi(alpha, delta)
    return 2 * math.pi**2 / 3 * ((1 - alpha) / 2 + delta)


def _inner_outer_block(alpha, eps, delta, quad):
    """int_0^1 dr int_1^inf ds (f(r) - f(s))^2 / (s - r)^2 for the transformed psi,
    f(r) = r^{(1-alpha)/2} on [0, 1] and [1 - (eps (s-1))^delta]_+ on s >= 1."""
    a = (1 - alpha) / 2
    M = 1 + 1 / eps
    T = math.log(1 / eps)
    kw = quad.quad_kwargs()

    def inner(r):
        c = 1 - r
        ra = r**a

        # s - 1 = e^t on [1, M]
        def g(t):
            et = math.exp(t)
            fs = 1 - (eps * et) ** delta
            return (ra - fs) ** 2 * et / (et + c) ** 2

        lc = math.log(c) if c > 0 else -60.0
        pts = [p for p in (lc - 3, lc, lc + 3) if -80 < p < T]
        v = integrate.quad(g, -80.0, T, points=pts or None, **kw)[0]
        # s > M, where f = 0
        return v + ra * ra / (M - r)

    return integrate.quad(inner, 0.0, 1.0, points=[0.5, 0.9, 0.99, 0.999, 0.9999], **kw)[0]


def _power_square_block(alpha, quad):
    """iint_{[0,1]^2} (r^a - t^a)^2 / (r - t)^2, a = (1-alpha)/2."""
    a = (1 - alpha) / 2
    kw = quad.quad_kwargs()

    def inner(t):
        ta = t**a
        g = lambda r: ((r**a - ta) / (r - t)) ** 2 if r != t else (a * t ** (a - 1)) ** 2
        return integrate.quad(g, 0.0, t, **kw)[0] if t > 0 else 0.0

    return 2 * integrate.quad(inner, 0.0, 1.0, **kw)[0]


def _plateau_blocks(delta, quad):
    """Scale-free pieces on [1, M]: the square block and its coupling to s > M,
    after the substitution u = eps (r - 1)."""
    kw = quad.quad_kwargs()

    def inner(v):
        vd = v**delta
        g = lambda u: ((u**delta - vd) / (u - v)) ** 2 if u != v else (delta * v ** (delta - 1)) ** 2
        return integrate.quad(g, 0.0, v, **kw)[0] if v > 0 else 0.0

    square = 2 * integrate.quad(inner, 0.0, 1.0, **kw)[0]
    edge = integrate.quad(lambda u: (1 - u**delta) ** 2 / (1 - u) if u < 1 else 0.0, 0.0, 1.0, **kw)[0]
    return square, edge


def psi_energy_numeric(alpha, epsilon, delta, quad: QuadratureSpec = QuadratureSpec(1e-13, 1e-10)):
    """h[psi^{eps,delta}] = 2 iint (f(r) - f(s))^2/(r - s)^2 by block quadrature.

    Returns (total, blocks) with the four contributions on the regions
    [0,1]^2, [0,1]x[1,inf) (twice), [1,M]^2 and [1,M]x[M,inf) (twice).
    """
    _check_psi(alpha, delta)
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    a_block = _power_square_block(alpha, quad)
    b_block = _inner_outer_block(alpha, epsilon, delta, quad)
    square, edge = _plateau_blocks(delta, quad)
    total = 2 * (a_block + 2 * b_block + square + 2 * edge)
    blocks = {"inner_square": a_block, "inner_outer": b_block, "plateau_square": square, "plateau_edge": edge}
    return total, blocks


def psi_energy_extrapolated(alpha, delta, eps_list=(1e-2, 3e-3, 1e-3)):
    """Richardson extrapolation of the numeric energy: a quadratic fit in x = eps^delta."""
    eps_list = sorted(eps_list, reverse=True)
    xs = np.array([e**delta for e in eps_list])
    hs = np.array([psi_energy_numeric(alpha, e, delta)[0] for e in eps_list])
    deg = min(2, len(xs) - 1)
    coef = np.polyfit(xs, hs, deg)
    return float(coef[-1]), dict(zip(map(float, eps_list), map(float, hs)))


def digamma_identity_checks(alpha, delta, quad: QuadratureSpec = QuadratureSpec(1e-13, 1e-11), tol=1e-8, tol_double=1e-7):
    """Check the three integral identities entering the energy limit by quadrature.

    Raises IdentityViolation on failure; otherwise returns a report dict.
    """
    _check_psi(alpha, delta)
    a = (1 - alpha) / 2
    kw = quad.quad_kwargs()
    report = {}

    lhs1 = integrate.quad(lambda t: ((1 - t**a) / (1 - t)) ** 2 if t < 1 else a * a, 0.0, 1.0, **kw)[0]
    rhs1 = (1 - alpha) * (digamma(2 - alpha) - digamma(1.5 - alpha / 2))
    report["square_quotient"] = {"lhs": lhs1, "rhs": rhs1, "residual": abs(lhs1 - rhs1), "tol": tol}

    lhs2 = integrate.quad(lambda r: (1 - r**a) ** 2 / (1 - r) if r < 1 else 0.0, 0.0, 1.0, **kw)[0]
    rhs2 = 2 * digamma(1.5 - alpha / 2) - digamma(1) - digamma(2 - alpha)
    report["edge_quotient"] = {"lhs": lhs2, "rhs": rhs2, "residual": abs(lhs2 - rhs2), "tol": tol}

    lhs3, _ = _plateau_blocks(delta, quad)
    rhs3 = 2 * (digamma(1 + 2 * delta) - digamma(1 + delta))
    report["power_double"] = {"lhs": lhs3, "rhs": rhs3, "residual": abs(lhs3 - rhs3), "tol": tol_double}

    for name, rep in report.items():
        if not rep["residual"] <= rep["tol"]:
            raise IdentityViolation(f"{name}: residual {rep['residual']:.3g}", rep["residual"])
    return report


def rho_eps_delta(lam, alpha, epsilon, delta, quad: QuadratureSpec = TIGHT):
    """2/(pi lam^{1+alpha}) int_1^{1+1/eps} r^{(1-alpha)/2}/(r - lam^{-2})^2
    (1 - (1 - eps^delta (r-1)^delta) / r^{(1-alpha)/2}) dr."""
    _check_psi(alpha, delta)
    lam = float(lam)
    if not lam > 1:
        raise DomainError("need lam > 1")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    a = (1 - alpha) / 2
    c = lam**-2.0
    T = math.log(1 / epsilon)

    # r - 1 = e^t; the integrand is (r^a - 1 + (eps (r-1))^delta) / (r - c)^2
    def g(t):
        et = math.exp(t)
        r = 1 + et
        return (math.expm1(a * math.log1p(et)) + (epsilon * et) ** delta) / (r - c) ** 2 * et

    kw = quad.quad_kwargs()
    pts = [p for p in (-5.0, 0.0, 5.0) if p < T]
    v = integrate.quad(g, -math.inf, pts[0], **kw)[0] if pts else 0.0
    edges = pts + [T]
    for lo, hi in zip(edges[:-1], edges[1:]):
        v += integrate.quad(g, lo, hi, **kw)[0]
    if not pts:
        v = integrate.quad(g, -math.inf, T, **kw)[0]
    return 2 / (math.pi * lam ** (1 + alpha)) * v


def phi_consistency(q):
    """(|Phi| from the Gamma quotient, explicit cotangent form) at alpha = 2 - 3/q."""
    return phi_abs(alpha_from_q(q)), phi_explicit_d3(q)
