"""Quadrature settings and cached Gauss rules."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import DomainError, QuadratureError

__all__ = ["QuadratureSpec", "gauss_legendre", "gauss_jacobi", "panels"]

SINGULARITY_MODES = ("variable_split", "symmetric_difference")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-6
    max_subdivisions: int = 2000
    singularity_handling: str = "variable_split"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if int(self.max_subdivisions) < 16:
            raise DomainError("max_subdivisions must be >= 16")
        if self.singularity_handling not in SINGULARITY_MODES:
            raise DomainError(
                f"singularity_handling must be one of {SINGULARITY_MODES}, "
                f"got {self.singularity_handling!r}"
            )

    def quad_kwargs(self):
        return {"epsabs": self.abs_tol, "epsrel": self.rel_tol, "limit": int(self.max_subdivisions)}


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=None)
def _gl(n):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _gj(n, beta):
    # weight t^beta on [0, 1]
    x, w = roots_jacobi(n, 0.0, beta)
    t = (x + 1) / 2
    w = w / 2 ** (beta + 1)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_legendre(a, b, n=20):
    """Nodes and weights on [a, b] for each panel; a, b may be arrays."""
    x, w = _gl(n)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = (b - a) / 2
    return a + half * (x + 1), half * w


def gauss_jacobi(length, beta, n=20):
    """Nodes t and weights for int_0^length t^beta g(t) dt ~ sum w g(t).

    ``length`` may be an array; the last axis holds the nodes.
    """
    t, w = _gj(n, round(float(beta), 15))
    length = np.asarray(length, dtype=float)[..., None]
    return length * t, w * length ** (beta + 1)


def panels(edges, n=20):
    """Composite Gauss-Legendre on consecutive edges; returns flat nodes and weights."""
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return np.empty(0), np.empty(0)
    x, w = gauss_legendre(edges[:-1], edges[1:], n)
    return x.ravel(), w.ravel()


def check_quad(value, error, spec, what):
    if not np.isfinite(value):
        raise QuadratureError(f"{what}: non-finite value {value}")
    if error > max(spec.abs_tol, spec.rel_tol * abs(value)) * 1e3:
        raise QuadratureError(f"{what}: error estimate {error:.3g} too large for value {value:.6g}")
    return value
