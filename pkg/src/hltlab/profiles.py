"""Radial test functions with support metadata.

A profile is a real function of the radius ``r >= 0`` (for d = 1 read
``r = |x|``, so every profile is even). Besides point evaluation it
reports where it lives and how it behaves at the origin, which the
quadrature routines use to place panels.

Attributes every profile provides:

``support_radius``
    u(r) = 0 for r >= support_radius (``inf`` for the Gaussian).
``breakpoints``
    radii where u is not smooth.
``origin_power``
    p with u(r) = A r^{-p} exactly on a neighbourhood of 0.
``origin_coefficient``
    the A above.
``scale``
    a characteristic length used to size panels.
"""

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

__all__ = [
    "Profile",
    "Gaussian",
    "SmoothBump",
    "PowerCutoff",
    "PsiEpsDelta",
    "Sampled",
    "BallIndicator",
    "Zero",
    "Dilated",
    "Scaled",
    "Product",
    "smooth_step",
    "smooth_cutoff",
]

NEGLIGIBLE = 1e-18


def _f(x):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    a, b = _f(x), _f(1.0 - x)
    return a / (a + b)


def smooth_cutoff(t):
    """chi(t) = 1 on [0, 1], 0 on [2, inf), smooth in between."""
    return 1.0 - smooth_step(np.asarray(t, dtype=float) - 1.0)


class Profile:
    support_radius = math.inf
    breakpoints = ()
    origin_power = 0.0
    origin_coefficient = None
    scale = 1.0
    decreasing = False
    name = "profile"

    def __call__(self, r):
        raise NotImplementedError

    def effective_radius(self):
        """Radius beyond which the profile is zero or negligible."""
        return self.support_radius

    def params(self):
        return {}

    def describe(self):
        return {"family": self.name, **self.params()}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class Zero(Profile):
    name = "zero"
    support_radius = 0.0
    origin_coefficient = 0.0
    decreasing = True

    def __call__(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


class Gaussian(Profile):
    """amplitude * exp(-r^2 / (2 width^2))."""

    name = "gaussian"
    decreasing = True

    def __init__(self, width=1.0, amplitude=1.0):
        if not width > 0:
            raise DomainError("width must be positive")
        self.width = float(width)
        self.amplitude = float(amplitude)
        self.scale = self.width
        self.origin_coefficient = self.amplitude

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-0.5 * (r / self.width) ** 2)

    def effective_radius(self):
        if self.amplitude == 0:
            return 0.0
        return self.width * math.sqrt(2 * math.log(abs(self.amplitude) / NEGLIGIBLE))

    def params(self):
        return {"width": self.width, "amplitude": self.amplitude}


class SmoothBump(Profile):
    """C-infinity bump with values in [0, 1].

    ``inner == 0``: exp(1 - 1/(1 - (r/outer)^2)) on the ball of radius ``outer``.
    ``inner > 0``: the same shape rescaled onto the shell inner < r < outer,
    peaking at the mid radius, so the support avoids the origin.
    """

    name = "smooth_bump"

    def __init__(self, inner=0.0, outer=1.0, amplitude=1.0):
        if not (0 <= inner < outer):
            raise DomainError("need 0 <= inner < outer")
        self.inner = float(inner)
        self.outer = float(outer)
        self.amplitude = float(amplitude)
        self.support_radius = self.outer
        self.scale = (self.outer - self.inner) / 2
        self.origin_coefficient = self.amplitude * (1.0 if self.inner == 0 else 0.0)
        self.decreasing = self.inner == 0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.inner == 0:
            t = r / self.outer
        else:
            mid = (self.inner + self.outer) / 2
            t = (r - mid) / self.scale
        out = np.zeros(np.broadcast(r).shape)
        inside = np.abs(t) < 1
        ti = t[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
        return self.amplitude * out

    def params(self):
        return {"inner": self.inner, "outer": self.outer, "amplitude": self.amplitude}


class PowerCutoff(Profile):
    """chi(r / lam) r^{-alpha} with chi = 1 on [0, 1] and 0 beyond 2."""

    name = "power_cutoff"
    decreasing = True

    def __init__(self, alpha, lam=1.0):
        if not alpha >= 0:
            raise DomainError("alpha must be >= 0")
        if not lam > 0:
            raise DomainError("lam must be positive")
        self.alpha = float(alpha)
        self.lam = float(lam)
        self.support_radius = 2 * self.lam
        self.origin_power = self.alpha
        self.origin_coefficient = 1.0
        self.scale = self.lam

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return smooth_cutoff(r / self.lam) * r ** (-self.alpha)

    def params(self):
        return {"alpha": self.alpha, "lam": self.lam}


class PsiEpsDelta(Profile):
    """Radial trial function with a logarithmic-scale plateau.

    r^{-alpha} for r <= 1, r^{-1}(1 - eps^delta (r^2 - 1)^delta) for
    1 <= r^2 <= 1 + 1/eps, and 0 beyond.
    """

    name = "psi_eps_delta"
    decreasing = True

    def __init__(self, alpha, epsilon, delta):
        if not (0 < alpha < 1):
            raise DomainError("alpha must lie in (0, 1)")
        if not (epsilon > 0 and delta > 0):
            raise DomainError("epsilon and delta must be positive")
        self.alpha = float(alpha)
        self.epsilon = float(epsilon)
        self.delta = float(delta)
        self.outer_sq = 1.0 + 1.0 / self.epsilon
        self.support_radius = math.sqrt(self.outer_sq)
        self.breakpoints = (1.0, self.support_radius)
        self.origin_power = self.alpha
        self.origin_coefficient = 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(np.broadcast(r).shape)
        inner = r <= 1
        mid = (r > 1) & (r * r < self.outer_sq)
        with np.errstate(divide="ignore"):
            out[inner] = r[inner] ** (-self.alpha)
        rm = r[mid]
        out[mid] = (1.0 - (self.epsilon * (rm * rm - 1.0)) ** self.delta) / rm
        return out

    def transformed(self, t):
        """sqrt(t) psi(sqrt(t)), the form entering the one-dimensional reduction."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(np.broadcast(t).shape)
        inner = t <= 1
        mid = (t > 1) & (t < self.outer_sq)
        out[inner] = t[inner] ** ((1 - self.alpha) / 2)
        out[mid] = 1.0 - (self.epsilon * (t[mid] - 1.0)) ** self.delta
        return out

    def params(self):
        return {"alpha": self.alpha, "epsilon": self.epsilon, "delta": self.delta}


class BallIndicator(Profile):
    name = "ball_indicator"
    decreasing = True

    def __init__(self, radius=1.0, height=1.0):
        self.radius = float(radius)
        self.height = float(height)
        self.support_radius = self.radius
        self.breakpoints = (self.radius,)
        self.origin_coefficient = self.height
        self.scale = self.radius

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.radius, self.height, 0.0)

    def params(self):
        return {"radius": self.radius, "height": self.height}


class Sampled(Profile):
    """Shape-preserving cubic interpolant of samples; zero past the last radius."""

    name = "custom_sampled"

    def __init__(self, radii, values):
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.shape != values.shape or radii.size < 2:
            raise DomainError("radii and values must be matching 1-D arrays of length >= 2")
        if np.any(np.diff(radii) <= 0) or radii[0] < 0:
            raise DomainError("radii must be non-negative and strictly increasing")
        self.radii = radii
        self.values = values
        self._interp = PchipInterpolator(radii, values, extrapolate=False)
        self.support_radius = float(radii[-1])
        self.breakpoints = tuple(float(x) for x in radii[1:-1]) if radii.size < 64 else ()
        self.origin_coefficient = float(values[0])
        self.scale = float(radii[-1] - radii[0]) / 4
        self.decreasing = bool(np.all(np.diff(values) <= 0))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        rr = np.clip(r, self.radii[0], None)
        out = self._interp(rr)
        return np.where(r < self.support_radius, np.nan_to_num(out), 0.0)

    def params(self):
        return {"n_samples": int(self.radii.size), "support_radius": self.support_radius}


class Dilated(Profile):
    """r -> base(factor * r)."""

    def __init__(self, base, factor):
        if not factor > 0:
            raise DomainError("dilation factor must be positive")
        self.base = base
        self.factor = float(factor)
        self.name = base.name
        self.support_radius = base.support_radius / self.factor
        self.breakpoints = tuple(b / self.factor for b in base.breakpoints)
        self.origin_power = base.origin_power
        c = base.origin_coefficient
        self.origin_coefficient = None if c is None else c * self.factor ** (-base.origin_power)
        self.scale = base.scale / self.factor
        self.decreasing = base.decreasing

    def __call__(self, r):
        return self.base(self.factor * np.asarray(r, dtype=float))

    def effective_radius(self):
        return self.base.effective_radius() / self.factor

    def params(self):
        return {"base": self.base.describe(), "factor": self.factor}


class Scaled(Profile):
    """r -> coefficient * base(r)."""

    def __init__(self, base, coefficient):
        self.base = base
        self.coefficient = float(coefficient)
        self.name = base.name
        self.support_radius = base.support_radius
        self.breakpoints = base.breakpoints
        self.origin_power = base.origin_power
        c = base.origin_coefficient
        self.origin_coefficient = None if c is None else c * self.coefficient
        self.scale = base.scale
        self.decreasing = base.decreasing and self.coefficient >= 0

    def __call__(self, r):
        return self.coefficient * self.base(r)

    def effective_radius(self):
        return self.base.effective_radius() if self.coefficient != 0 else 0.0

    def params(self):
        return {"base": self.base.describe(), "coefficient": self.coefficient}


class Product(Profile):
    """Pointwise product base * factor. The factor must be bounded at the origin."""

    def __init__(self, base, factor, name=None):
        self.base = base
        self.factor = factor
        self.name = name or f"{base.name}*{factor.name}"
        self.support_radius = min(base.support_radius, factor.support_radius)
        self.breakpoints = tuple(sorted(set(base.breakpoints) | set(factor.breakpoints)))
        self.origin_power = base.origin_power + factor.origin_power
        cb, cf = base.origin_coefficient, factor.origin_coefficient
        self.origin_coefficient = None if cb is None or cf is None else cb * cf
        self.scale = min(base.scale, factor.scale)

    def __call__(self, r):
        return self.base(r) * self.factor(r)

    def effective_radius(self):
        return min(self.base.effective_radius(), self.factor.effective_radius())

    def params(self):
        return {"base": self.base.describe(), "factor": self.factor.describe()}


class Callable(Profile):
    """Wrap a vectorized function of r with explicit metadata."""

    def __init__(self, func, support_radius=math.inf, scale=1.0, breakpoints=(),
                 origin_coefficient=None, name="callable", effective_radius=None):
        self.func = func
        self.support_radius = float(support_radius)
        self.scale = float(scale)
        self.breakpoints = tuple(breakpoints)
        self.origin_coefficient = origin_coefficient
        self.name = name
        self._eff = effective_radius

    def __call__(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)

    def effective_radius(self):
        return self._eff if self._eff is not None else self.support_radius
