"""Closed-form constants of the fractional Hardy inequality."""

import math
from dataclasses import dataclass

from scipy.special import gammaln

from .errors import DomainError
from .specfun import lgamma

__all__ = [
    "FracParams",
    "hardy_constant",
    "kernel_normalization",
    "fourier_weight_b",
    "phi_function",
    "phi_limit_zero",
    "phi_explicit_d3",
    "sphere_area",
]

ENDPOINT_GAP = 1e-10


@dataclass(frozen=True)
class FracParams:
    """Dimension ``d`` and fractional order ``s``.

    Valid when 0 < s < min(1, d/2); s = 1 is also accepted for d >= 3.
    """

    d: int
    s: float

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be an integer >= 1, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        s = float(self.s)
        object.__setattr__(self, "s", s)
        if not math.isfinite(s):
            raise DomainError(f"s must be finite, got {s}")
        if s == 1.0 and self.d >= 3:
            return
        if not (0.0 < s < min(1.0, self.d / 2.0)):
            raise DomainError(
                f"need 0 < s < min(1, d/2) = {min(1.0, self.d / 2.0)}, got s={s} (d={self.d})"
            )

    @property
    def two_star(self):
        """Critical Sobolev exponent 2d/(d-2s)."""
        return 2.0 * self.d / (self.d - 2.0 * self.s)

    @property
    def critical_alpha(self):
        """(d-2s)/2, the exponent of the virtual ground state."""
        return (self.d - 2.0 * self.s) / 2.0

    @property
    def hardy(self):
        return hardy_constant(self)


def sphere_area(d):
    """Surface area of the unit sphere in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def hardy_constant(p: FracParams):
    """Sharp constant C_{s,d} = 2^{2s} Gamma^2((d+2s)/4) / Gamma^2((d-2s)/4)."""
    d, s = p.d, p.s
    if not 2 * s < d:
        raise DomainError(f"Hardy constant needs 2s < d, got d={d}, s={s}")
    log_c = 2 * s * math.log(2.0) + 2 * (lgamma((d + 2 * s) / 4) - lgamma((d - 2 * s) / 4))
    return math.exp(log_c)


def kernel_normalization(p: FracParams):
    """a_{s,d} in  int |xi|^{2s}|u^|^2 = a_{s,d} iint |u(x)-u(y)|^2 |x-y|^{-d-2s}."""
    d, s = p.d, p.s
    if not 0 < s < 1:
        raise DomainError(f"kernel normalization needs 0 < s < 1, got {s}")
    log_a = (2 * s - 1) * math.log(2.0) - (d / 2) * math.log(math.pi)
    log_a += lgamma((d + 2 * s) / 2) - lgamma(-s)
    return math.exp(log_a)


def fourier_weight_b(alpha, d):
    """b_alpha = 2^{alpha/2} Gamma(alpha/2), the Fourier weight of |x|^{alpha-d}."""
    alpha = float(alpha)
    if not 0 < alpha < d:
        raise DomainError(f"need 0 < alpha < d={d}, got {alpha}")
    return 2 ** (alpha / 2) * math.gamma(alpha / 2)


def _check_alpha(alpha, p):
    upper = p.d - 2 * p.s
    if not (ENDPOINT_GAP < alpha < upper - ENDPOINT_GAP):
        raise DomainError(f"alpha must lie in (0, {upper}) away from the poles, got {alpha}")


def phi_function(alpha, p: FracParams):
    """Phi_{s,d}(alpha) = b_{alpha+2s} b_{d-alpha} / (b_{d-alpha-2s} b_alpha) - C_{s,d}.

    Evaluated from the equivalent Gamma quotient in log form.
    """
    alpha = float(alpha)
    _check_alpha(alpha, p)
    d, s = p.d, p.s
    log_q = 2 * s * math.log(2.0) + (
        gammaln((alpha + 2 * s) / 2)
        + gammaln((d - alpha) / 2)
        - gammaln((d - alpha - 2 * s) / 2)
        - gammaln(alpha / 2)
    )
    return math.exp(log_q) - hardy_constant(p)


def phi_b_quotient(alpha, p: FracParams):
    """The b-quotient of Phi computed literally from fourier_weight_b."""
    alpha = float(alpha)
    _check_alpha(alpha, p)
    d, s = p.d, p.s
    return (fourier_weight_b(alpha + 2 * s, d) * fourier_weight_b(d - alpha, d)) / (
        fourier_weight_b(d - alpha - 2 * s, d) * fourier_weight_b(alpha, d)
    )


def phi_limit_zero(p: FracParams):
    """lim_{alpha -> 0+} Phi_{s,d}(alpha) = -C_{s,d}."""
    return -hardy_constant(p)


def phi_limit_critical(p: FracParams):
    """Phi_{s,d}((d-2s)/2) = 0 by symmetry of the Gamma quotient."""
    hardy_constant(p)
    return 0.0


def phi_explicit_d3(q):
    """|Phi_{1/2,3}(2 - 3/q)| = 2/pi - (1 - 3/q) cot(pi (1 - 3/q) / 2), 3/2 < q < 3."""
    q = float(q)
    if not 1.5 < q < 3:
        raise DomainError(f"need 3/2 < q < 3, got {q}")
    b = 1 - 3 / q
    return 2 / math.pi - b / math.tan(math.pi * b / 2)
