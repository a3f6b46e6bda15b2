"""Spherical functions and the spherical transform of radial functions on the disk."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .geometry import DiskPoint, _coord
from .numerics import composite_gauss_legendre, gamma_complex

__all__ = [
    "RadialFunction",
    "DivergenceError",
    "phi_lambda",
    "spherical_transform",
    "tau_tilde_closed",
    "sigma_tilde_closed",
    "radial_symmetrize",
    "radial_laplacian",
]


class DivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RadialFunction:
    """A function of the hyperbolic distance to the origin.

    ``times_sinh``, when given, evaluates ``F(r) * sinh(r)`` directly; it is
    how kernels singular at ``r = 0`` enter polar-coordinate integrals.
    ``decay_rate`` is a ``c`` with ``|F(r) sinh r| <~ exp(-c r)``, used to
    pick truncation radii for infinite support.
    """

    eval: Callable
    support_radius: float = math.inf
    times_sinh: Optional[Callable] = None
    decay_rate: Optional[float] = None

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.eval(r), dtype=complex)
        if math.isfinite(self.support_radius):
            out = np.where(r > self.support_radius, 0.0, out)
        return out

    def jacobian_form(self, r):
        """``F(r) sinh(r)``."""
        r = np.asarray(r, dtype=float)
        if self.times_sinh is not None:
            out = np.asarray(self.times_sinh(r), dtype=complex)
            if math.isfinite(self.support_radius):
                out = np.where(r > self.support_radius, 0.0, out)
            return out
        return self(r) * np.sinh(r)


@lru_cache(maxsize=512)
def _graded_theta_rule(levels: int, per_panel: int):
    # panels halve in width towards theta = 0, where the integrand peaks
    breaks = np.concatenate(([0.0], math.pi * 2.0 ** -np.arange(levels, -1, -1.0)))
    rule = composite_gauss_legendre(breaks, per_panel)
    return rule.nodes, rule.weights


def _phi_scalar(lam: complex, r: float, n_theta: int) -> complex:
    if r == 0.0:
        return 1.0 + 0j
    levels = max(1, math.ceil((r + math.log(math.pi) + 1.0) / math.log(2.0)))
    theta, w = _graded_theta_rule(levels, max(8, n_theta // 2))
    # cosh r - sinh r cos t, written to stay accurate when it is near exp(-r)
    base = np.exp(-r) + 2.0 * np.sinh(r) * np.sin(theta / 2.0) ** 2
    return complex(np.sum(w * np.exp((1j * lam - 0.5) * np.log(base))) / math.pi)


def phi_lambda(lam, r, n_theta: int = 32):
    """Spherical function with eigenvalue ``-(lam^2 + 1/4)`` at radius ``r``.

    Computed from ``(1/pi) int_0^pi (cosh r - sinh r cos t)^(i lam - 1/2) dt``
    by Gauss-Legendre on panels graded geometrically towards ``t = 0``.
    ``n_theta`` sets the resolution (nodes on every pair of panels).
    """
    if n_theta < 16:
        raise ValueError("n_theta must be at least 16")
    lam = complex(lam)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be non-negative")
    if r_arr.ndim == 0:
        return _phi_scalar(lam, float(r_arr), n_theta)
    return np.array([_phi_scalar(lam, float(x), n_theta) for x in r_arr.ravel()]).reshape(r_arr.shape)


def _radial_rule(R: float, n_r: int):
    panels = max(1, math.ceil(R))
    per = max(8, math.ceil(n_r / panels))
    return composite_gauss_legendre(np.linspace(0.0, R, panels + 1), per), panels, per


def spherical_transform(f: RadialFunction, lam, R: Optional[float] = None, n_r: int = 800, n_theta: int = 32):
    """``2 pi int_0^R F(r) phi_{-lam}(r) sinh r dr``.

    When ``R`` is omitted it is taken as ``max(support, 40 / decay_rate)``.
    """
    lam = complex(lam)
    if R is None:
        if math.isfinite(f.support_radius):
            R = f.support_radius
        elif f.decay_rate:
            R = 40.0 / f.decay_rate
        else:
            raise ValueError("infinite support needs R or a decay_rate")
        if f.decay_rate and math.isfinite(f.support_radius):
            R = min(R, max(f.support_radius, 40.0 / f.decay_rate))
    rule, panels, per = _radial_rule(R, n_r)
    integrand = f.jacobian_form(rule.nodes) * phi_lambda(-lam, rule.nodes, n_theta)
    if not math.isfinite(f.support_radius) and panels >= 3:
        seg = np.abs(rule.weights * integrand).reshape(panels, per).sum(axis=1)
        total = np.abs(np.sum(rule.weights * integrand))
        if seg[-1] > seg[-2] and seg[-1] > 1e-8 * max(total, 1e-300):
            raise DivergenceError(
                f"integrand grows towards R={R:g}; need decay faster than exp(-(|Im lam| + 1/2) r)"
            )
    return complex(2.0 * math.pi * np.sum(rule.weights * integrand))


def _gamma_pair(a: complex, lam: complex) -> complex:
    return gamma_complex(a + 0.5j * lam) * gamma_complex(a - 0.5j * lam)


def _check_z(z):
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"need Re z > 0, got {z}")
    return z


def tau_tilde_closed(z, lam) -> complex:
    """Closed-form spherical transform of ``exp(-z r) / sinh r``."""
    z, lam = _check_z(z), complex(lam)
    return math.pi * _gamma_pair(z / 2 + 0.25, lam) / _gamma_pair(z / 2 + 0.75, lam)


def sigma_tilde_closed(z, lam) -> complex:
    """Closed-form spherical transform of ``exp(-(z + 1) r) / sinh r``."""
    z, lam = _check_z(z), complex(lam)
    pref = math.pi / ((z / 2 + 0.25) ** 2 + (lam / 2) ** 2)
    return pref * _gamma_pair(z / 2 + 0.75, lam) / _gamma_pair(z / 2 + 0.25, lam)


def radial_symmetrize(f: Callable, x, n: int = 64) -> complex:
    """Average of ``f`` over the rotation orbit of ``x`` (Haar probability on rotations)."""
    if n < 8:
        raise ValueError("need at least eight rotation samples")
    w = complex(_coord(x))
    pts = w * np.exp(2j * np.pi * np.arange(n) / n)
    return complex(np.mean(np.asarray(f(pts), dtype=complex)))


def radial_laplacian(F: Callable, r, h: float = 1e-3):
    """``F'' + coth(r) F'`` by central differences; at ``r = 0`` uses ``2 F''(0)``."""
    r = np.asarray(r, dtype=float)
    fp, f0 = F(r + h), F(r)
    if np.any(r < h):
        # even extension across the origin
        fm = F(np.abs(r - h))
    else:
        fm = F(r - h)
    d2 = (fp - 2 * f0 + fm) / h**2
    d1 = (fp - fm) / (2 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(r > 0, d2 + d1 / np.tanh(np.where(r > 0, r, 1.0)), 2.0 * d2)
    return out
