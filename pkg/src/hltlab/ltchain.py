"""Constant pipeline from a Sobolev constant to the Lieb-Thirring constant.

    Sobolev C'  ->  heat-kernel K = (p C')^p
                ->  counting constant K' = K inf_a a^{1-p} / (p(p-1) F(1; a))
                ->  C(gamma) = min_p gamma^{gamma+1} K' B(n, p+1) n^{-n} m^{-m}

with m = p - d/2s, n = gamma + d/2s - p, and F(1; a) = e^{-a} - a E1(a)
the transform of f(t) = (t - a)_+.
"""

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from .constants import FracParams
from .errors import DomainError, OptimizerError
from .specfun import exp_int_e1, lbeta

__all__ = [
    "LTChainResult",
    "nash_exponent",
    "beta_from_p",
    "q_from_beta",
    "heat_constant",
    "log_heat_constant",
    "F_transform",
    "F1",
    "power_integral",
    "birman_schwinger_constant",
    "sigma_star",
    "lt_objective",
    "final_lt_constant",
    "tau_beta_identity",
    "default_provider",
    "scaled_count_bound",
]

A_RANGE = (1e-6, 50.0)


def nash_exponent(beta, p: FracParams):
    """p = beta / (beta - d + 2s) for d - 2s < beta < d."""
    d, s = p.d, p.s
    beta = float(beta)
    if not d - 2 * s < beta < d:
        raise DomainError(f"need {d - 2 * s} < beta < {d}, got {beta}")
    return beta / (beta - d + 2 * s)


def beta_from_p(p_exp, p: FracParams):
    """Inverse of nash_exponent: beta = p (d - 2s) / (p - 1), p > d/2s."""
    d, s = p.d, p.s
    if not p_exp > d / (2 * s):
        raise DomainError(f"need p > d/2s = {d / (2 * s)}, got {p_exp}")
    return p_exp * (d - 2 * s) / (p_exp - 1)


def q_from_beta(beta, p: FracParams):
    """Sobolev exponent q = 2 beta / (d - 2s) matching the weight |x|^{-beta}."""
    return 2 * beta / (p.d - 2 * p.s)


def log_heat_constant(sobolev_const, p_exp):
    if not sobolev_const > 0:
        raise DomainError("Sobolev constant must be positive")
    return p_exp * math.log(p_exp * sobolev_const)


def heat_constant(sobolev_const, beta, p: FracParams):
    """K = (p C')^p with p the Nash exponent of beta; computed through logs."""
    p_exp = nash_exponent(beta, p)
    lk = log_heat_constant(sobolev_const, p_exp)
    if lk > 709:
        raise DomainError(f"heat constant overflows (log K = {lk:.1f}); use log_heat_constant")
    return math.exp(lk)


def F_transform(lam, a):
    """F(lam) = int_0^inf (mu - a)_+ e^{-mu/lam} dmu / mu = lam e^{-a/lam} - a E1(a/lam)."""
    if not (lam > 0 and a > 0):
        raise DomainError("need lam > 0 and a > 0")
    return lam * math.exp(-a / lam) - a * exp_int_e1(a / lam)


def F1(a):
    """F(1) = e^{-a} - a E1(a)."""
    return F_transform(1.0, a)


def power_integral(a, p_exp):
    """int_0^inf t^{-p-1} (t - a)_+ dt = a^{1-p} / (p (p - 1))."""
    if not (a > 0 and p_exp > 1):
        raise DomainError("need a > 0 and p > 1")
    return a ** (1 - p_exp) / (p_exp * (p_exp - 1))


def _log_g(a, p_exp):
    return (1 - p_exp) * math.log(a) - math.log(p_exp * (p_exp - 1)) - math.log(F1(a))


def birman_schwinger_constant(K_heat, p_exp, log_K=None, trace=None):
    """(K', a*) with K' = K min_a a^{1-p} / (p(p-1) F(1; a)).

    Pass ``log_K`` instead of a finite ``K_heat`` for large constants;
    the returned K' is then ``exp(log K')`` and may be ``inf``.
    """
    if not p_exp > 1:
        raise DomainError("need p > 1")
    if log_K is None:
        if not K_heat > 0:
            raise DomainError("K must be positive")
        log_K = math.log(K_heat)
    lo, hi = (math.log(x) for x in A_RANGE)
    xs = np.linspace(lo, hi, 81)
    vals = np.array([_log_g(math.exp(x), p_exp) for x in xs])
    i = int(np.argmin(vals))
    if i in (0, len(xs) - 1):
        raise OptimizerError(f"no interior minimum of g in {A_RANGE}", list(zip(np.exp(xs), vals)))
    res = optimize.minimize_scalar(lambda x: _log_g(math.exp(x), p_exp), bracket=(xs[i - 1], xs[i], xs[i + 1]),
                                   method="golden", options={"xtol": 1e-12})
    a_star = math.exp(res.x)
    log_kp = log_K + res.fun
    if trace is not None:
        trace.append({"a_star": a_star, "log_g": res.fun})
    return _safe_exp(log_kp), a_star


def _safe_exp(x):
    return math.exp(x) if x < 709 else math.inf


def sigma_star(gamma, p_exp, p: FracParams):
    """Optimal sigma = (gamma + d/2s - p) / gamma for (1-sigma)^{-m} sigma^{-n}."""
    k = p.d / (2 * p.s)
    return (gamma + k - p_exp) / gamma


def lt_objective(p_exp, gamma, log_K_prime, p: FracParams, sigma=None):
    """log of gamma K' B(n, p+1) (1-sigma)^{-m} sigma^{-n}, sigma defaulting to its optimum."""
    k = p.d / (2 * p.s)
    m, n = p_exp - k, gamma + k - p_exp
    if not (m > 0 and n > 0):
        raise DomainError(f"need d/2s < p < gamma + d/2s, got p = {p_exp}")
    sig = sigma_star(gamma, p_exp, p) if sigma is None else sigma
    if not 0 < sig < 1:
        raise DomainError("sigma must lie in (0, 1)")
    return math.log(gamma) + log_K_prime + lbeta(n, p_exp + 1) - m * math.log1p(-sig) - n * math.log(sig)


def tau_beta_identity(p_exp, gamma, p: FracParams, sigma=0.5, V=1.0):
    """(quadrature, closed form) of int_0^inf (V - sigma tau)_+^p tau^{gamma - p + d/2s - 1} dtau."""
    k = p.d / (2 * p.s)
    ex = gamma - p_exp + k - 1
    top = V / sigma
    f = lambda t: (V - sigma * t) ** p_exp
    num = integrate.quad(f, 0.0, top, weight="alg", wvar=(ex, 0.0), epsabs=0, epsrel=1e-13, limit=200)[0]
    closed = sigma ** (-gamma - k + p_exp) * V ** (gamma + k) * math.exp(lbeta(gamma + k - p_exp, p_exp + 1))
    return num, closed


def scaled_count_bound(K_prime, p_exp, tau, integral_Vp, p: FracParams):
    """K' tau^{-p + d/2s} int V^p, the count bound at threshold -tau."""
    k = p.d / (2 * p.s)
    return K_prime * tau ** (-p_exp + k) * integral_Vp


@dataclass
class LTChainResult:
    gamma: float
    d: int
    s: float
    p_star: float
    beta: float
    q_exp: float
    sobolev_const: float
    K_heat: float
    log_K_heat: float
    a_star: float
    K_prime: float
    log_K_prime: float
    sigma_star: float
    C_final: float
    log_C_final: float
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self, with_trace=True):
        out = asdict(self)
        if not with_trace:
            out.pop("trace")
        return out


def _chain_at(p_exp, params, provider):
    beta = beta_from_p(p_exp, params)
    q = q_from_beta(beta, params)
    c = float(provider(q))
    log_k = log_heat_constant(c, p_exp)
    kp, a_star = birman_schwinger_constant(None, p_exp, log_K=log_k)
    log_kp = log_k + _log_g(a_star, p_exp)
    return {"beta": beta, "q": q, "C": c, "log_K": log_k, "a_star": a_star, "log_Kp": log_kp}


def final_lt_constant(gamma, p: FracParams, sobolev_const_provider=None, n_grid=24, p_range=None):
    """Minimize the Lieb-Thirring constant over p in (d/2s, gamma + d/2s).

    ``sobolev_const_provider`` maps q to the Sobolev constant C'_{q,d,s};
    it defaults to ``default_provider(p)``.
    """
    gamma = float(gamma)
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    provider = sobolev_const_provider or default_provider(p)
    k = p.d / (2 * p.s)
    lo, hi = p_range or (k, k + gamma)
    trace = []
    cache = {}

    def obj(x):
        if x not in cache:
            if not lo < x < hi:
                cache[x] = math.inf
            else:
                ch = _chain_at(x, p, provider)
                v = lt_objective(x, gamma, ch["log_Kp"], p)
                cache[x] = v
                trace.append({"p": x, "q": ch["q"], "sobolev_const": ch["C"], "log_K_prime": ch["log_Kp"], "log_C": v})
        return cache[x]

    # interior grid clustered towards both endpoints
    u = (np.arange(1, n_grid + 1) - 0.5) / n_grid
    grid = lo + (hi - lo) * (0.5 - 0.5 * np.cos(math.pi * u))
    vals = np.array([obj(float(x)) for x in grid])
    if not np.isfinite(vals).any():
        raise OptimizerError("objective infinite on the whole p grid", trace)
    i = int(np.argmin(vals))
    if 0 < i < n_grid - 1:
        res = optimize.minimize_scalar(obj, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                                       options={"xtol": 1e-8})
        p_star = float(res.x) if res.fun <= vals[i] else float(grid[i])
    else:
        # minimum pinned at the edge of the grid: refine towards that endpoint
        a, b = (lo, grid[1]) if i == 0 else (grid[-2], hi)
        res = optimize.minimize_scalar(obj, bounds=(a, b), method="bounded", options={"xatol": 1e-10})
        p_star = float(res.x) if res.fun <= vals[i] else float(grid[i])
    ch = _chain_at(p_star, p, provider)
    log_c = lt_objective(p_star, gamma, ch["log_Kp"], p)
    return LTChainResult(
        gamma=gamma,
        d=p.d,
        s=p.s,
        p_star=p_star,
        beta=ch["beta"],
        q_exp=ch["q"],
        sobolev_const=ch["C"],
        K_heat=_safe_exp(ch["log_K"]),
        log_K_heat=ch["log_K"],
        a_star=ch["a_star"],
        K_prime=_safe_exp(ch["log_Kp"]),
        log_K_prime=ch["log_Kp"],
        sigma_star=sigma_star(gamma, p_star, p),
        C_final=_safe_exp(log_c),
        log_C_final=log_c,
        trace=trace,
    )


@lru_cache(maxsize=4096)
def _sobolev_bound_cached(q):
    from .sobolev3d import sobolev_constant_bound

    return sobolev_constant_bound(q).bound


def default_provider(p: FracParams, **grid_kwargs):
    """Sobolev constant provider: the explicit bound for (3, 1/2), otherwise
    the sup of the discrete Sobolev quotient on a periodic grid."""
    if p.d == 3 and p.s == 0.5:
        return _sobolev_bound_cached
    from .spectral import discrete_sobolev_provider

    return discrete_sobolev_provider(p, **grid_kwargs)
