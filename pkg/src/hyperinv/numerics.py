"""Quadrature rules, the complex Gamma function and limit extrapolation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "composite_gauss_legendre",
    "gamma_complex",
    "extrapolate_to_zero",
    "Extrapolation",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights approximating an integral over ``interval``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.nodes) != len(self.weights):
            raise ValueError("a rule needs at least two nodes and matching weights")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def integrate(self, f):
        """Apply the rule to a vectorized callable."""
        return np.sum(self.weights * f(self.nodes))

    def __len__(self):
        return len(self.nodes)


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """``n``-point Gauss-Legendre rule on ``[a, b]``, exact up to degree ``2n - 1``."""
    if int(n) != n or n < 2:
        raise ValueError(f"need an integer n >= 2, got {n!r}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    nodes = half * x + 0.5 * (a + b)
    nodes.setflags(write=False)
    weights = half * w
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, (float(a), float(b)))


def composite_gauss_legendre(breaks, n: int) -> QuadratureRule:
    """Gauss-Legendre with ``n`` nodes on each panel between consecutive ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    if breaks.ndim != 1 or len(breaks) < 2 or np.any(np.diff(breaks) <= 0):
        raise ValueError("breaks must be a strictly increasing sequence")
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * np.diff(breaks)[:, None]
    mid = 0.5 * (breaks[1:] + breaks[:-1])[:, None]
    nodes = (half * x + mid).ravel()
    weights = (half * w).ravel()
    return QuadratureRule(nodes, weights, (float(breaks[0]), float(breaks[-1])))


# Lanczos coefficients for g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def gamma_complex(w: complex) -> complex:
    """Gamma function for complex ``w`` (Lanczos, reflection for ``Re w < 1/2``).

    Raises ``ValueError`` at the poles ``0, -1, -2, ...``.
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError(f"non-finite argument {w}")
    if w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real):
        raise ValueError(f"Gamma has a pole at {w.real:g}")
    if w.real < 0.5:
        return math.pi / (cmath.sin(math.pi * w) * gamma_complex(1.0 - w))
    w -= 1.0
    acc = _LANCZOS_COEF[0]
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (w + k)
    t = w + _LANCZOS_G + 0.5
    # exp of the log keeps large |Im w| from overflowing t**(w + 1/2)
    return _SQRT_2PI * cmath.exp((w + 0.5) * cmath.log(t) - t) * acc


@dataclass(frozen=True)
class Extrapolation:
    """Result of a zero-limit extrapolation.

    ``estimates[k]`` is the value at zero of the interpolant through the first
    ``k + 1`` samples; ``error`` is the gap between the last two estimates.
    """

    value: complex
    error: float
    estimates: tuple

    @property
    def increments(self):
        e = self.estimates
        return tuple(abs(e[k + 1] - e[k]) for k in range(len(e) - 1))


def extrapolate_to_zero(samples) -> Extrapolation:
    """Neville extrapolation of ``(z, value)`` samples to ``z = 0``."""
    zs = np.array([float(s[0]) for s in samples])
    vals = [complex(s[1]) for s in samples]
    if len(zs) < 3:
        raise ValueError("need at least three samples")
    if np.any(zs <= 0):
        raise ValueError("sample abscissae must be positive")
    if len(np.unique(zs)) != len(zs):
        raise ValueError("duplicate abscissae")
    n = len(zs)
    # column j of the tableau holds interpolants of degree j
    p = list(vals)
    estimates = [p[0]]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            p[i] = (zs[i] * p[i - 1] - zs[i - j] * p[i]) / (zs[i] - zs[i - j])
        estimates.append(p[j])
    value = estimates[-1]
    return Extrapolation(value, abs(estimates[-1] - estimates[-2]), tuple(estimates))
