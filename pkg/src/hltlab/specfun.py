"""Scalar special functions with typed domain errors.

Thin wrappers over ``scipy.special``. The wrappers add the domain checks
and never return NaN silently.
"""

import math

import numpy as np
from scipy import special as sp

from .errors import DomainError, PoleError

__all__ = ["gamma", "lgamma", "digamma", "beta", "lbeta", "exp_int_e1"]


def _real(x, name="x"):
    try:
        x = float(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real number, got {x!r}") from exc
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x}")
    return x


def _check_pole(x):
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"pole at non-positive integer {x}")


def gamma(x):
    """Euler Gamma. Negative non-integers are allowed (reflection)."""
    x = _real(x)
    _check_pole(x)
    v = float(sp.gamma(x))
    if not math.isfinite(v):
        raise DomainError(f"gamma({x}) overflows")
    return v


def lgamma(x):
    """log|Gamma(x)|."""
    x = _real(x)
    _check_pole(x)
    return float(sp.gammaln(x))


def digamma(x):
    """psi = Gamma'/Gamma."""
    x = _real(x)
    _check_pole(x)
    return float(sp.digamma(x))


def lbeta(a, b):
    a, b = _real(a, "a"), _real(b, "b")
    if a <= 0 or b <= 0:
        raise DomainError(f"beta needs a, b > 0, got ({a}, {b})")
    return float(sp.betaln(a, b))


def beta(a, b):
    """B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), through log-Gamma."""
    return math.exp(lbeta(a, b))


def exp_int_e1(x):
    """Exponential integral E1(x) = int_x^inf e^{-t}/t dt for x > 0."""
    x = _real(x)
    if x <= 0:
        raise DomainError(f"E1 needs x > 0, got {x}")
    return float(sp.exp1(x))


def exp_int_e1_array(x):
    """Vectorized E1 for arrays with all entries > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("E1 needs x > 0")
    return sp.exp1(x)
