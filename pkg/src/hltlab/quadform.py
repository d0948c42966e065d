"""Fractional quadratic forms of radial functions.

Two independent routes to the energy  E_s[u] = int |xi|^{2s} |u^(xi)|^2 dxi:

* ``fourier_energy`` computes the radial Fourier (Hankel) transform on
  composite Gauss rules and integrates it against |k|^{2s}; a power-law
  singularity at the origin contributes an analytic high-frequency tail.
* ``double_integral_energy`` evaluates a_{s,d} iint |u(x)-u(y)|^2 |x-y|^{-d-2s}
  after integrating out the angles in closed form.

On top of these sit the Hardy form, the ground-state representation, the
IMS localization identity and the rearrangement inequality check.
"""

import math
from functools import partial

import numpy as np
from scipy import integrate
from scipy.special import betaln, gammaln, hyp2f1, jv

from . import profiles as pf
from .constants import FracParams, fourier_weight_b, hardy_constant, kernel_normalization, sphere_area
from .errors import DomainError, MonotonicityError, PartitionError, QuadratureError
from .quadrature import DEFAULT_QUAD, QuadratureSpec, gauss_jacobi, panels

__all__ = [
    "QuadratureSpec",
    "radial_kernel",
    "radial_fourier_transform",
    "fourier_energy",
    "double_integral_energy",
    "weighted_norm",
    "hardy_form",
    "radial_hardy_form_d3",
    "gsr_energy",
    "ims_decomposition",
    "isoperimetric_check",
    "two_piece_partition",
    "localization_error",
    "gsr_prediction",
    "hardy_ratio",
    "sharpness_sequence",
]

N_GAUSS = 20


# ---------------------------------------------------------------- kernel
def _diff_powers(x, m):
    """(1-x)^{-m} - (1+x)^{-m} without cancellation, 0 <= x < 1."""
    c1 = -m * np.log1p(-x)
    c2 = -m * np.log1p(x)
    return np.exp(c2) * np.expm1(c1 - c2)


def radial_kernel(r, rho, d, s):
    """Angular integral of |x - y|^{-d-2s} over |x| = r, |y| = rho.

    K(r, rho) = int_{S^{d-1}} int_{S^{d-1}} |r w - rho w'|^{-d-2s} dw dw',
    so that iint F(|x|,|y|)|x-y|^{-d-2s} = int int F K r^{d-1} rho^{d-1}.
    For d = 1 the "sphere" is {-1, +1}.
    """
    r = np.asarray(r, dtype=float)
    rho = np.asarray(rho, dtype=float)
    m = 1 + 2 * s
    big = np.maximum(r, rho)
    small = np.minimum(r, rho)
    x = small / big
    if d == 1:
        return 2 * (np.abs(r - rho) ** (-m) + (r + rho) ** (-m))
    if d == 3:
        num = big ** (-m) * _diff_powers(x, m)
        return sphere_area(3) * 2 * math.pi / (m * r * rho) * num
    mu = (d + 2 * s) / 2
    lam = (d - 2) / 2
    pref = sphere_area(d) * sphere_area(d - 1) * math.exp(betaln(lam + 0.5, 0.5))
    return pref * big ** (-2 * mu) * hyp2f1(mu, mu - lam, lam + 1, x * x)


# ------------------------------------------------------- Fourier route
def _radial_bessel(z, d):
    """j_d(z) = z^{-nu} J_nu(z), nu = d/2 - 1, so that u^(k) = int u r^{d-1} j_d(kr) dr."""
    if d == 1:
        return math.sqrt(2 / math.pi) * np.cos(z)
    if d == 3:
        return math.sqrt(2 / math.pi) * np.sinc(z / math.pi)
    nu = d / 2 - 1
    z = np.asarray(z, dtype=float)
    small = z < 1e-6
    out = np.empty_like(z)
    zz = z[~small]
    out[~small] = zz ** (-nu) * jv(nu, zz)
    out[small] = 1.0 / (2**nu * math.gamma(nu + 1)) * (1 - z[small] ** 2 / (4 * (nu + 1)))
    return out


def _origin_edges(r_a, r_first, ratio=2.0):
    """Geometric edges from r_first up to r_a."""
    edges = [r_a]
    while edges[-1] / ratio > r_first:
        edges.append(edges[-1] / ratio)
    return sorted(edges)


def _r_rule(u, d, k_max):
    """Composite rule for int_0^R F(r) r^{d-1} dr resolving oscillations up to k_max."""
    R = u.effective_radius()
    if not math.isfinite(R):
        raise DomainError("profile needs a finite effective radius")
    p0 = u.origin_power
    width = 10.0 / max(k_max, 1e-300)
    bps = sorted(b for b in u.breakpoints if 0 < b < R)
    cap = min(width, u.scale / 2)
    r_first = min(u.scale, R, width) / 2 ** 8 if p0 > 0 else min(u.scale, R, width) / 4
    edges = _grow_edges(r_first, R, r_first, cap, bps)
    x, w = panels(edges, N_GAUSS)
    t0, w0 = gauss_jacobi(edges[0], d - 1 - 2 * 0 - p0, N_GAUSS + 10)
    # first panel carries the weight r^{d-1-p0}; the nodes see u r^{p0}
    x0 = t0.ravel()
    with np.errstate(divide="ignore", invalid="ignore"):
        f0 = u(x0) * x0**p0 if p0 > 0 else u(x0)
    f = u(x) * x ** (d - 1)
    return np.concatenate([x0, x]), np.concatenate([w0.ravel() * f0, w * f])


def radial_fourier_transform(u, d, k):
    """Unitary Fourier transform of the radial function u at radii k (array)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    x, wf = _r_rule(u, d, float(k.max()))
    chunk = max(1, int(4e6 // x.size))
    out = np.empty_like(k)
    for i in range(0, k.size, chunk):
        kk = k[i : i + chunk]
        out[i : i + chunk] = _radial_bessel(np.outer(kk, x), d) @ wf
    return out


def power_tail_coefficient(u, d):
    """c with u^(k) ~ c k^{p-d} as k -> inf, when u = A r^{-p} near the origin."""
    p0 = u.origin_power
    if p0 <= 0 or u.origin_coefficient is None:
        return 0.0
    if not p0 < d:
        raise DomainError("origin singularity too strong for a Fourier transform")
    return u.origin_coefficient * fourier_weight_b(d - p0, d) / fourier_weight_b(p0, d)


def _gaussian_fourier_energy(u, p):
    d, s = p.d, p.s
    w = u.width
    return u.amplitude**2 * w ** (d - 2 * s) * math.pi ** (d / 2) / math.gamma(d / 2) * math.gamma((d + 2 * s) / 2)


def _is_gaussian(u):
    return isinstance(u, pf.Gaussian)


def fourier_energy(u, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD, method="auto", info=None):
    """int |xi|^{2s} |u^(xi)|^2 dxi for a radial profile u.

    ``method='auto'`` uses the closed form for a Gaussian and the numerical
    Hankel route otherwise; ``method='hankel'`` forces the numerical route.
    """
    d, s = p.d, p.s
    if isinstance(u, pf.Zero):
        return 0.0
    if method == "auto" and _is_gaussian(u):
        return _gaussian_fourier_energy(u, p)
    if method not in ("auto", "hankel"):
        raise DomainError(f"unknown method {method!r}")
    R = u.effective_radius()
    if R == 0:
        return 0.0
    area = sphere_area(d)
    c = power_tail_coefficient(u, d)
    p0 = u.origin_power
    tail_exp = 2 * s + 2 * p0 - d
    if c != 0 and not tail_exp < 0:
        raise DomainError("profile has infinite s-energy")

    def tail(K):
        return area * c * c * K**tail_exp / (-tail_exp) if c != 0 else 0.0

    dk = 5.0 / R
    k1 = min(1.0 / R, dk)
    kt, kw = gauss_jacobi(k1, 2 * s + d - 1, N_GAUSS + 10)
    kt, kw = kt.ravel(), kw.ravel()
    total = area * float(kw @ radial_fourier_transform(u, d, kt) ** 2)
    lo = k1
    K = max(32.0 / u.scale, 4 * k1)
    prev = None
    history = []
    for _ in range(int(math.log2(q.max_subdivisions)) + 6):
        n = max(1, int(math.ceil((K - lo) / dk)))
        kx, kw = panels(np.linspace(lo, K, n + 1), N_GAUSS)
        uk = radial_fourier_transform(u, d, kx)
        total += area * float(kw @ (kx ** (2 * s + d - 1) * uk * uk))
        est = total + tail(K)
        history.append((K, est))
        if prev is not None and abs(est - prev) <= max(q.abs_tol, 0.1 * q.rel_tol * abs(est)):
            if info is not None:
                info.update(k_max=K, history=history, tail=tail(K))
            return est
        prev = est
        lo, K = K, 2 * K
    raise QuadratureError(f"Fourier energy did not converge: history {history[-3:]}")


# ---------------------------------------------------- double integrals
class _PairIntegrand:
    """Describes iint_{(0,inf)^2} P(r, rho) K(r, rho) w(r) w(rho) dr drho.

    P vanishes quadratically on the diagonal, so P K behaves like
    |r - rho|^{diag_exp} there; for rho past ``R`` P(r, rho) = tail(r), and
    K w(rho) decays like rho^{-tail_exp - 1 ... } handled by a Jacobi rule
    in t = rho_1 / rho with weight t^{tail_exp}.
    """

    def __init__(self, pair, tail, kernel, weight_exp, diag_exp, tail_exp, R, scale, breakpoints, origin_exp):
        self.pair = pair
        self.tail = tail
        self.kernel = kernel
        self.weight_exp = weight_exp
        self.diag_exp = diag_exp
        self.tail_exp = tail_exp
        self.R = R
        self.scale = scale
        self.breakpoints = tuple(sorted(b for b in breakpoints if 0 < b < R))
        self.origin_exp = origin_exp  # P w ~ rho^{origin_exp} as rho -> 0

    def w(self, x):
        return x**self.weight_exp

    def _right(self, r):
        """int_r^inf P K w(r) w(rho) drho."""
        scale, R = self.scale, self.R
        nxt = [b - r for b in self.breakpoints if b > r] + ([R - r] if R > r else [])
        gap = min(nxt) if nxt else math.inf
        h0 = min(0.25 * r, 0.25 * scale, 0.5 * gap)
        if h0 <= 0:
            h0 = 0.25 * scale
        t, wt = gauss_jacobi(h0, self.diag_exp, N_GAUSS + 10)
        t, wt = t.ravel(), wt.ravel()
        rho = r + t
        with np.errstate(divide="ignore", invalid="ignore"):
            core = self.pair(r, rho) * self.kernel(r, rho) * t ** (-self.diag_exp)
        v = float(wt @ np.nan_to_num(core * self.w(rho)))
        # panels from r + h0 to rho_1, graded away from the diagonal and breakpoints
        rho1 = max(R, 5 * r, r + 4 * scale)
        edges = _grow_edges(r + h0, rho1, h0, scale / 2, self.breakpoints)
        x, w = panels(edges, N_GAUSS)
        v += float(w @ (self.pair(r, x) * self.kernel(r, x) * self.w(x)))
        tr = self.tail(r)
        if tr != 0:
            tt, tw = gauss_jacobi(1.0, self.tail_exp, N_GAUSS + 10)
            tt, tw = tt.ravel(), tw.ravel()
            x = rho1 / tt
            g = self.kernel(r, x) * self.w(x) * rho1 / tt**2 * tt ** (-self.tail_exp)
            v += tr * float(tw @ g)
        return v * self.w(r)

    def _left(self, r):
        """int_0^r P K w(r) w(rho) drho."""
        scale = self.scale
        if r > self.R:
            return self._left_outside(r)
        prev = [r - b for b in self.breakpoints if b < r]
        gap = min(prev) if prev else math.inf
        h0 = min(0.25 * r, 0.25 * scale, 0.5 * gap)
        t, wt = gauss_jacobi(h0, self.diag_exp, N_GAUSS + 10)
        t, wt = t.ravel(), wt.ravel()
        rho = r - t
        core = self.pair(r, rho) * self.kernel(r, rho) * t ** (-self.diag_exp)
        v = float(wt @ (core * self.w(rho)))
        top = r - h0
        # grade away from the diagonal (mirrored growth) and towards rho = 0
        mirrored = [top - e for e in _grow_edges(0.0, top, h0, scale / 2, [top - b for b in self.breakpoints])]
        near0 = _origin_edges(min(top, scale) / 4, min(top, scale) * 1e-12)
        edges = sorted(set(e for e in mirrored + near0 if e > 0))
        x, w = panels(edges, N_GAUSS)
        v += float(w @ (self.pair(r, x) * self.kernel(r, x) * self.w(x)))
        # first tiny panel: Jacobi weight rho^{origin_exp}
        e0 = edges[0] if edges else top
        t0, w0 = gauss_jacobi(e0, self.origin_exp, N_GAUSS)
        t0, w0 = t0.ravel(), w0.ravel()
        with np.errstate(divide="ignore", invalid="ignore"):
            g0 = self.pair(r, t0) * self.kernel(r, t0) * self.w(t0) * t0 ** (-self.origin_exp)
        v += float(w0 @ np.nan_to_num(g0))
        return v * self.w(r)

    def _left_outside(self, r):
        """int_0^R P K w(r) w(rho) drho for r past the support (P = 0 on (R, r))."""
        R, scale = self.R, self.scale
        first = min(max(r - R, 1e-6 * scale), scale / 2)
        mirrored = [R - e for e in _grow_edges(0.0, R, first, scale / 2, [R - b for b in self.breakpoints])]
        near0 = _origin_edges(min(R, scale) / 4, min(R, scale) * 1e-12)
        edges = sorted(set(e for e in mirrored + near0 if e > 0))
        x, w = panels(edges, N_GAUSS)
        v = float(w @ (self.pair(r, x) * self.kernel(r, x) * self.w(x)))
        t0, w0 = gauss_jacobi(edges[0], self.origin_exp, N_GAUSS)
        t0, w0 = t0.ravel(), w0.ravel()
        with np.errstate(divide="ignore", invalid="ignore"):
            g0 = self.pair(r, t0) * self.kernel(r, t0) * self.w(t0) * t0 ** (-self.origin_exp)
        v += float(w0 @ np.nan_to_num(g0))
        return v * self.w(r)

    def integrate(self, q: QuadratureSpec):
        R = self.R
        kw = q.quad_kwargs()
        pts = list(self.breakpoints)
        if q.singularity_handling == "variable_split":
            val, err = integrate.quad(self._right, 0.0, R, points=pts or None, **kw)
            val *= 2
            err *= 2
        else:
            both = lambda r: self._right(r) + (self._left(r) if r > 0 else 0.0)
            val, err = integrate.quad(both, 0.0, R, points=pts or None, **kw)
            v2, e2 = integrate.quad(self._left, R, math.inf, **kw)
            val += v2
            err += e2
        if not math.isfinite(val):
            raise QuadratureError("double integral is not finite")
        if err > max(q.abs_tol, q.rel_tol * abs(val)) * 10:
            raise QuadratureError(f"double integral error estimate {err:.3g} exceeds tolerance (value {val:.6g})")
        return val


def _grow_edges(lo, hi, first, cap, grade_points=()):
    """Edges on [lo, hi]: widths first, 2 first, 4 first, ... capped at ``cap``,
    with extra geometric refinement on both sides of each grade point."""
    if not hi > lo:
        return []
    edges = [lo]
    x, h = lo, max(first, (hi - lo) * 1e-14)
    while x < hi:
        x = min(x + h, hi)
        edges.append(x)
        h = min(2 * h, cap)
    for b in grade_points:
        if lo < b < hi:
            edges.append(b)
            for j in range(1, 13):
                for y in (b - cap * 2.0**-j, b + cap * 2.0**-j):
                    if lo < y < hi:
                        edges.append(y)
    return sorted(set(edges))


# ------------------------------------------------------ public forms
def _origin_samples(u):
    top = min(u.scale, u.effective_radius()) * 1e-3
    return np.geomspace(top * 1e-9, top, 25)


def radial_moment(func, weight_exp, R, breakpoints=(), scale=1.0, q=DEFAULT_QUAD):
    """int_0^R func(r) r^{weight_exp} dr for func bounded and smooth near 0.

    The first piece uses an algebraic-weight rule, so integrable powers at
    the origin are handled exactly.
    """
    if R == 0:
        return 0.0
    if weight_exp <= -1:
        raise DomainError("radial moment diverges at the origin")
    kw = q.quad_kwargs()
    bps = sorted(b for b in breakpoints if 0 < b < R)
    r_a = min([scale, R] + bps) / 2
    g = lambda r: float(func(np.array([r]))[0])
    v, _ = integrate.quad(g, 0.0, r_a, weight="alg", wvar=(weight_exp, 0.0), **kw)
    h = lambda r: g(r) * r**weight_exp
    edges = [r_a] + bps + [R]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            v += integrate.quad(h, lo, hi, **kw)[0]
    return v


def _regular_part(u):
    """r -> u(r) r^{p} with p the origin power, bounded at 0."""
    p0 = u.origin_power
    if p0 == 0:
        return u
    c = u.origin_coefficient

    def f(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = u(r) * r**p0
        return np.where(r > 0, out, c if c is not None else 0.0)

    return f


def weighted_norm(u, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD, exponent=None):
    """int |x|^{-exponent} |u(x)|^2 dx (exponent defaults to 2s)."""
    d = p.d
    exponent = 2 * p.s if exponent is None else exponent
    R = u.effective_radius()
    if isinstance(u, pf.Zero) or R == 0:
        return 0.0
    f = _regular_part(u)
    val = radial_moment(lambda r: f(r) ** 2, d - 1 - exponent - 2 * u.origin_power, R,
                        u.breakpoints, u.scale, q)
    return sphere_area(d) * val


def _engine_for(g, p, weight_exp, R, scale, breakpoints, origin_exp):
    d, s = p.d, p.s
    return _PairIntegrand(
        pair=lambda r, rho: (g(r) - g(rho)) ** 2,
        tail=lambda r: float(g(np.array([r]))[0]) ** 2,
        kernel=partial(radial_kernel, d=d, s=s),
        weight_exp=weight_exp,
        diag_exp=1 - 2 * s,
        tail_exp=2 * s + (d - 1 - weight_exp) - 1,
        R=R,
        scale=scale,
        breakpoints=breakpoints,
        origin_exp=origin_exp,
    )


def double_integral_energy(u, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD):
    """a_{s,d} iint |u(x) - u(y)|^2 / |x - y|^{d+2s} dx dy for radial u."""
    if isinstance(u, pf.Zero) or u.effective_radius() == 0:
        return 0.0
    R = u.effective_radius()
    if not math.isfinite(R):
        raise DomainError("profile needs a finite effective radius")
    eng = _engine_for(u, p, p.d - 1, R, u.scale, u.breakpoints, p.d - 1 - 2 * u.origin_power)
    return kernel_normalization(p) * eng.integrate(q)


def hardy_form(u, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD, route="fourier"):
    """h_s[u] = E_s[u] - C_{s,d} int |x|^{-2s} u^2, energy from the chosen route."""
    if isinstance(u, pf.Zero):
        return 0.0
    if route == "fourier":
        e = fourier_energy(u, p, q)
    elif route == "double":
        e = double_integral_energy(u, p, q)
    else:
        raise DomainError(f"unknown route {route!r}")
    return e - hardy_constant(p) * weighted_norm(u, p, q)


def radial_hardy_form_d3(u, q: QuadratureSpec = DEFAULT_QUAD):
    """Hardy form for d = 3, s = 1/2 through the one-dimensional reduction

        h[u] = 2 int_0^inf int_0^inf (f(r) - f(t))^2 / (r - t)^2 dr dt,
        f(t) = sqrt(t) u(sqrt(t)).
    """
    R = u.effective_radius()
    if not math.isfinite(R):
        raise DomainError("profile needs a finite effective radius")
    if R == 0:
        return 0.0
    if hasattr(u, "transformed"):
        f = u.transformed
    else:
        f = lambda t: np.sqrt(t) * u(np.sqrt(t))
    eng = _PairIntegrand(
        pair=lambda r, rho: (f(r) - f(rho)) ** 2,
        tail=lambda r: float(f(np.array([r]))[0]) ** 2,
        kernel=lambda r, rho: (r - rho) ** -2.0,
        weight_exp=0.0,
        diag_exp=0.0,
        tail_exp=0.0,
        R=R * R,
        scale=min(u.scale**2, u.scale),
        breakpoints=[b * b for b in u.breakpoints],
        origin_exp=0.0,
    )
    return 2 * eng.integrate(q)


def _check_away_from_origin(u):
    inner = getattr(u, "inner", None)
    if inner is not None and inner > 0:
        return
    if np.any(u(_origin_samples(u)) != 0):
        raise DomainError("profile support must avoid the origin")


def gsr_energy(u, p: FracParams, alpha=None, q: QuadratureSpec = DEFAULT_QUAD):
    """Ground-state form  a iint |v(x)-v(y)|^2 |x-y|^{-d-2s} |x|^{-alpha}|y|^{-alpha},  v = |x|^alpha u.

    ``alpha`` defaults to (d-2s)/2.
    """
    d, s = p.d, p.s
    crit = (d - 2 * s) / 2
    alpha = crit if alpha is None else float(alpha)
    if not 0 < alpha <= crit + 1e-15:
        raise DomainError(f"alpha must lie in (0, {crit}]")
    if isinstance(u, pf.Zero):
        return 0.0
    _check_away_from_origin(u)
    R = u.effective_radius()
    v = lambda r: np.asarray(r, dtype=float) ** alpha * u(r)
    eng = _engine_for(v, p, d - 1 - alpha, R, u.scale, u.breakpoints, d - 1 - alpha)
    return kernel_normalization(p) * eng.integrate(q)


def gsr_prediction(u, p: FracParams, alpha, q: QuadratureSpec = DEFAULT_QUAD):
    """E_s[u] - (C + Phi(alpha)) int |x|^{-2s} u^2, the value gsr_energy must match."""
    from .constants import phi_function

    crit = p.critical_alpha
    phi = 0.0 if abs(alpha - crit) < 1e-14 else phi_function(alpha, p)
    return fourier_energy(u, p, q) - (hardy_constant(p) + phi) * weighted_norm(u, p, q)


def two_piece_partition(inner=0.5, outer=1.0):
    """(chi_0, chi_1) with chi_0 = 1 on |x| <= inner, chi_1 = 1 on |x| >= outer,
    chi_0^2 + chi_1^2 = 1."""
    if not 0 < inner < outer:
        raise DomainError("need 0 < inner < outer")
    step = lambda r: pf.smooth_step((np.asarray(r, dtype=float) - inner) / (outer - inner))
    chi0 = pf.Callable(
        lambda r: np.cos(0.5 * math.pi * step(r)),
        support_radius=outer,
        scale=outer - inner,
        origin_coefficient=1.0,
        name="chi0",
    )
    chi1 = pf.Callable(
        lambda r: np.sin(0.5 * math.pi * step(r)),
        support_radius=math.inf,
        scale=outer - inner,
        origin_coefficient=0.0,
        name="chi1",
    )
    return [chi0, chi1]


def localization_error(u, partition, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD):
    """(u, L u) with L(x, y) = a |x-y|^{-d-2s} sum_j (chi_j(x) - chi_j(y))^2."""
    d, s = p.d, p.s
    if len(partition) <= 1 or isinstance(u, pf.Zero):
        return 0.0
    R = u.effective_radius()

    def pair(r, rho):
        acc = 0.0
        for chi in partition:
            acc = acc + (chi(r) - chi(rho)) ** 2
        return u(r) * u(rho) * acc

    scale = min([u.scale] + [c.scale for c in partition])
    eng = _PairIntegrand(
        pair=pair,
        tail=lambda r: 0.0,
        kernel=partial(radial_kernel, d=d, s=s),
        weight_exp=d - 1,
        diag_exp=1 - 2 * s,
        tail_exp=2 * s - 1,
        R=R,
        scale=scale,
        breakpoints=tuple(u.breakpoints) + tuple(b for c in partition for b in c.breakpoints),
        origin_exp=d - 1 - u.origin_power,
    )
    return kernel_normalization(p) * eng.integrate(q)


def ims_decomposition(u, partition, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD):
    """Both sides of  h[u] = sum_j h[chi_j u] - (u, L u).

    Returns a dict with ``lhs``, ``rhs``, the pieces and the localization term.
    """
    R = u.effective_radius()
    grid = np.linspace(0, min(R, 10 * max(c.scale for c in partition)), 2001)
    total = sum(chi(grid) ** 2 for chi in partition)
    dev = float(np.max(np.abs(total - 1.0)))
    if dev > 1e-12:
        raise PartitionError(f"sum of squares deviates from 1 by {dev:.3g}")
    lhs = hardy_form(u, p, q)
    if len(partition) == 1:
        return {"lhs": lhs, "rhs": lhs, "pieces": [lhs], "localization": 0.0}
    pieces = [hardy_form(pf.Product(u, chi), p, q) for chi in partition]
    loc = localization_error(u, partition, p, q)
    return {"lhs": lhs, "rhs": sum(pieces) - loc, "pieces": pieces, "localization": loc}


def isoperimetric_check(u, q_exp, d, quad: QuadratureSpec = DEFAULT_QUAD):
    """(||u||_q, q^{-1} |B|^{-1/q'} int u |x|^{-d/q'} dx) for symmetric decreasing u."""
    q_exp = float(q_exp)
    if not 1 <= q_exp < math.inf:
        raise DomainError("need 1 <= q < inf")
    if isinstance(u, pf.Zero):
        return 0.0, 0.0
    R = u.effective_radius()
    grid = np.linspace(0, R, 4001)[1:]
    vals = u(grid)
    if np.any(vals < 0) or np.any(np.diff(vals) > 1e-14 * max(1.0, float(np.max(np.abs(vals))))):
        raise MonotonicityError("profile is not non-negative and radially decreasing")
    area = sphere_area(d)
    ball = area / d
    inv_qp = 1 - 1 / q_exp
    f = _regular_part(u)
    p0 = u.origin_power
    lhs = (area * radial_moment(lambda r: np.abs(f(r)) ** q_exp, d - 1 - q_exp * p0, R,
                                u.breakpoints, u.scale, quad)) ** (1 / q_exp)
    integral = area * radial_moment(f, d - 1 - d * inv_qp - p0, R, u.breakpoints, u.scale, quad)
    rhs = ball ** (-inv_qp) * integral / q_exp
    return lhs, rhs


def hardy_ratio(u, p: FracParams, q: QuadratureSpec = DEFAULT_QUAD):
    """C_{s,d} int |x|^{-2s} u^2 / E_s[u]; at most 1 by the Hardy inequality."""
    return hardy_constant(p) * weighted_norm(u, p, q) / fourier_energy(u, p, q)


def sharpness_sequence(p: FracParams, n_members=5, lam=1.0, q: QuadratureSpec = DEFAULT_QUAD):
    """Hardy ratios along the cutoff family r^{-alpha_n} chi(r/lam),
    alpha_n = (1 - 2^{-n}) (d - 2s)/2, n = 1..n_members."""
    crit = p.critical_alpha
    rows = []
    for n in range(1, n_members + 1):
        alpha = (1 - 2.0**-n) * crit
        rows.append({"alpha": alpha, "ratio": hardy_ratio(pf.PowerCutoff(alpha, lam), p, q)})
    return rows
