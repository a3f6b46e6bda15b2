"""Attenuated normal operator, smoothing operator and reconstruction on the disk.

Every operator here takes the field as a vectorized callable on complex disk
coordinates and evaluates at one point or an array of points.  Curvature
``K != -1`` is handled by rescaling the unit-curvature model: distances
shrink by ``sqrt(-K)``, so ``Pi_0^(z) = Pi~_0^(z/sqrt(-K)) / sqrt(-K)`` and
``Delta = -K Delta~``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import _coord, distance
from .numerics import composite_gauss_legendre
from .spherical import RadialFunction

__all__ = [
    "ScalarField",
    "AttenuationParam",
    "OperatorResolution",
    "ResolutionError",
    "truncation_radius",
    "normal_op_attenuated",
    "convolve_radial",
    "kernel_tau",
    "kernel_sigma",
    "s_op",
    "laplace_beltrami",
    "l_op",
    "reconstruct_disk",
    "radial_field",
    "smooth_bump",
    "normal_op_radial_profile",
    "radial_data_field",
    "spherical_mean_profile",
]


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarField:
    """A bounded complex function on the disk.

    ``eval`` maps an array of complex coordinates to values.  ``support_radius``
    is a hyperbolic radius about 0 outside which the field vanishes.
    """

    eval: Callable
    bound: float
    support_radius: float = math.inf

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return np.asarray(self.eval(w), dtype=complex) * np.ones(w.shape)


@dataclass(frozen=True)
class AttenuationParam:
    z: complex
    K: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if not self.K < 0:
            raise ValueError(f"curvature must be negative, got K={self.K}")
        if self.z.real < 0:
            raise ValueError(f"need Re z >= 0, got z={self.z}")

    @property
    def sqrt_neg_k(self):
        return math.sqrt(-self.K)


@dataclass(frozen=True)
class OperatorResolution:
    n_theta: int = 64
    n_r: int = 600
    R: Optional[float] = None
    h: float = 1e-3
    eps: float = 1e-10

    def __post_init__(self):
        if self.n_theta < 4 or self.n_r < 2 or self.h <= 0 or self.eps <= 0:
            raise ValueError("resolution parameters must be positive")
        if self.R is not None and self.R <= 0:
            raise ValueError("R must be positive")


def truncation_radius(z, C: float, eps: float) -> float:
    """Radius ``R`` at which the tail bound ``(4 pi / Re z) C exp(-R Re z)`` equals ``eps``."""
    a = complex(z).real
    if not (a > 0 and C > 0 and eps > 0):
        raise ValueError("need Re z > 0, C > 0 and eps > 0")
    return max(math.log(4.0 * math.pi * C / (eps * a)) / a, 0.0)


def _ray_rule(R: float, n_r: int):
    panels = max(1, math.ceil(R))
    per = max(4, math.ceil(n_r / panels))
    return composite_gauss_legendre(np.linspace(0.0, R, panels + 1), per)


def _as_points(x):
    x = _coord(x)
    arr = np.asarray(x, dtype=complex)
    return arr, arr.ndim == 0


def _ray_radius(bound, support, decay, x, res):
    if res.R is not None:
        return res.R
    R = truncation_radius(decay, bound, res.eps * bound)
    if math.isfinite(support):
        # rays leave the support ball for good beyond d(x, 0) + support
        R = min(R, float(np.max(distance(x, 0j))) + support + 1e-9)
    return max(R, 1e-6)


def _fiber_ray_sum(f, x, weight_r, R, res):
    """``sum_theta sum_r w_theta w_r weight_r(r) f(exp_x(r, theta))`` for every point of ``x``."""
    rule = _ray_rule(R, res.n_r)
    theta = 2.0 * np.pi * np.arange(res.n_theta) / res.n_theta
    w0 = (np.tanh(rule.nodes / 2.0)[None, :] * np.exp(1j * theta)[:, None]).ravel()
    wr = np.broadcast_to(rule.weights * weight_r(rule.nodes), (res.n_theta, len(rule.nodes))).ravel()
    wr = wr * (2.0 * np.pi / res.n_theta)
    out = np.empty(x.size, dtype=complex)
    flat = x.ravel()
    chunk = max(1, 2_000_000 // w0.size)
    for s in range(0, flat.size, chunk):
        c = flat[s : s + chunk, None]
        # the transvection taking 0 to c, applied to the origin-centred ray nodes
        pts = (w0[None, :] + c) / (np.conj(c) * w0[None, :] + 1.0)
        out[s : s + chunk] = (f(pts) * wr[None, :]).sum(axis=1)
    return out.reshape(x.shape)


def _bound_of(f):
    b = getattr(f, "bound", None)
    if b is None or not math.isfinite(b):
        raise ValueError("the field must declare a finite bound")
    return max(float(b), 1e-300)


def normal_op_attenuated(f, p: AttenuationParam, x, res: OperatorResolution = OperatorResolution()):
    """``Pi_0^(z) f(x) = int_{S_x} int_R exp(-z|t|) f(gamma_{x,v}(t)) dt dS_x(v)``."""
    zt = p.z / p.sqrt_neg_k
    if not zt.real > 0:
        raise ValueError("the normal operator needs Re z > 0")
    bound = _bound_of(f)
    pts, scalar = _as_points(x)
    support = getattr(f, "support_radius", math.inf)
    R = _ray_radius(bound, support, zt, pts, res)
    val = 2.0 * _fiber_ray_sum(f, pts, lambda r: np.exp(-zt * r), R, res) / p.sqrt_neg_k
    return complex(val) if scalar else val


def s_op(f, p: AttenuationParam, x, res: OperatorResolution = OperatorResolution()):
    """``S_K^(z) f = Pi_0^(z + sqrt(-K)) f / 2``."""
    return 0.5 * normal_op_attenuated(f, replace(p, z=p.z + p.sqrt_neg_k), x, res)


def kernel_tau(z) -> RadialFunction:
    """``exp(-z r) / sinh r``."""
    z = complex(z)
    if not z.real > 0:
        raise ValueError("need Re z > 0")

    def ev(r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 1e-12):
            raise ValueError("kernel is singular at r = 0; integrate it through convolve_radial")
        return np.exp(-z * r) / np.sinh(r)

    return RadialFunction(ev, times_sinh=lambda r: np.exp(-z * np.asarray(r)), decay_rate=z.real)


def kernel_sigma(z) -> RadialFunction:
    """``exp(-(z + 1) r) / sinh r``, the kernel of the smoothing operator."""
    return kernel_tau(complex(z) + 1.0)


def convolve_radial(f, kernel: RadialFunction, x, res: OperatorResolution = OperatorResolution()):
    """``int_D f(y) k(d(x, y)) dvol(y)`` in geodesic polar coordinates about ``x``."""
    near = complex(np.asarray(kernel.jacobian_form(np.array([1e-9, 1e-6])))[0])
    if not math.isfinite(abs(near)):
        raise ValueError("kernel * sinh r must stay bounded near r = 0")
    bound = _bound_of(f)
    pts, scalar = _as_points(x)
    decay = kernel.decay_rate if kernel.decay_rate else 1.0
    R = _ray_radius(bound, getattr(f, "support_radius", math.inf), decay, pts, res)
    if math.isfinite(kernel.support_radius):
        R = min(R, kernel.support_radius)
    val = _fiber_ray_sum(f, pts, kernel.jacobian_form, R, res)
    return complex(val) if scalar else val


def laplace_beltrami(f, x, h: float = 1e-3, K: float = -1.0):
    """Laplace-Beltrami operator by the conformally scaled 5-point stencil."""
    if not 0 < h:
        raise ValueError("h must be positive")
    pts, scalar = _as_points(x)
    gap = 1.0 - float(np.max(np.abs(pts)))
    if gap < 10 * h:
        h = gap / 10
        if h < 1e-6:
            raise ResolutionError("point too close to the boundary for the stencil")
    stencil = pts[..., None] + np.array([0, h, -h, 1j * h, -1j * h])
    vals = np.asarray(f(stencil), dtype=complex)
    lap = (vals[..., 1:].sum(axis=-1) - 4.0 * vals[..., 0]) / h**2
    out = (1.0 - np.abs(pts) ** 2) ** 2 / 4.0 * lap * (-K)
    return complex(out) if scalar else out


def l_op(f, p: AttenuationParam, x, h: float = 1e-3):
    """``(Delta - z (z + sqrt(-K))) f``."""
    pts, scalar = _as_points(x)
    val = laplace_beltrami(f, pts, h, p.K) - p.z * (p.z + p.sqrt_neg_k) * np.asarray(f(pts), dtype=complex)
    return complex(val) if scalar else val


def reconstruct_disk(
    g,
    p: AttenuationParam,
    x,
    res: OperatorResolution = OperatorResolution(),
    symmetrize: bool = False,
    mean_radius: float = 7.0,
    far_value: complex = 0.0,
):
    """``-(8 pi^2)^-1 (Delta - z(z + sqrt(-K))) S^(z) g`` at ``x``.

    With ``symmetrize`` the data are first replaced by their spherical means
    about ``x`` (out to ``mean_radius``, relaxing to ``far_value`` beyond),
    which leaves the value at ``x`` unchanged since every operator involved
    is isometry invariant, and removes angular undersampling from the
    finite-difference Laplacian.
    """
    if not p.z.real > 0:
        raise ValueError("reconstruction needs Re z > 0")
    pts, scalar = _as_points(x)
    if not symmetrize:
        sg = lambda w: s_op(g, p, w, res)
        val = -l_op(sg, p, pts, res.h) / (8.0 * math.pi**2)
        return complex(val) if scalar else val
    out = np.empty(pts.size, dtype=complex)
    for i, c in enumerate(pts.ravel()):
        prof = spherical_mean_profile(g, c, mean_radius, far_value=far_value)
        field = radial_field(prof, bound=_bound_of(g))
        sg = lambda w: s_op(field, p, w, res)
        out[i] = -l_op(sg, p, 0j, res.h) / (8.0 * math.pi**2)
    return complex(out[0]) if scalar else out.reshape(pts.shape)


def radial_field(F: Callable, bound: float, support_radius: float = math.inf) -> ScalarField:
    """Field ``w -> F(d(0, w))`` on the unit-curvature disk."""
    def ev(w):
        with np.errstate(divide="ignore"):
            return F(2.0 * np.arctanh(np.minimum(np.abs(w), 1.0)))

    return ScalarField(ev, bound, support_radius)


def smooth_bump(radius: float, height: float = 1.0) -> Callable:
    """``height * exp(1 - 1 / (1 - (r / radius)^2))`` inside ``radius``, 0 outside."""

    def F(r):
        r = np.asarray(r, dtype=float)
        s = np.clip(r / radius, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            v = np.exp(1.0 - 1.0 / (1.0 - s * s))
        return height * np.where(s < 1.0, v, 0.0)

    return F


def normal_op_radial_profile(F: Callable, support: float, z, radii, n_angle: int = 96, n_t: int = 96):
    """``Pi_0^(z)`` of the radial bump ``F`` (vanishing beyond ``support``) at distances ``radii``.

    Rays are integrated only across the support ball: for ``r > support`` the
    ball subtends the half angle ``arcsin(sinh(support) / sinh(r))``.  This
    is an independent discretization from :func:`normal_op_attenuated`.
    """
    z = complex(z)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    out = np.zeros(radii.shape, dtype=complex)
    xa, wa = np.polynomial.legendre.leggauss(n_angle)
    xt, wt = np.polynomial.legendre.leggauss(n_t)
    for i, r in enumerate(radii):
        if r < support:
            theta = 2.0 * np.pi * np.arange(2 * n_angle) / (2 * n_angle)
            w_theta = np.full(theta.shape, np.pi / n_angle)
            t_lo, t_hi = 0.0, r + support
        else:
            half = math.asin(min(1.0, math.sinh(support) / math.sinh(r)))
            theta = half * xa
            w_theta = half * wa
            t_lo, t_hi = max(r - support, 0.0), r + support
        # split at the chord midpoint region so the bump is resolved on both halves
        breaks = np.linspace(t_lo, t_hi, 5)
        t = (0.5 * np.diff(breaks)[:, None] * xt + 0.5 * (breaks[1:] + breaks[:-1])[:, None]).ravel()
        w_t = (0.5 * np.diff(breaks)[:, None] * wt).ravel()
        # law of cosines for the distance from the bump centre
        ch = math.cosh(r) * np.cosh(t)[None, :] - math.sinh(r) * np.sinh(t)[None, :] * np.cos(theta)[:, None]
        d = np.arccosh(np.maximum(ch, 1.0))
        vals = F(d) * np.exp(-z * t)[None, :]
        out[i] = 2.0 * np.einsum("i,ij,j->", w_theta, vals, w_t)
    return out


def radial_data_field(F: Callable, support: float, z, r_max: float = 30.0, step: float = 0.01) -> ScalarField:
    """Tabulated ``Pi_0^(z) f`` for a radial bump ``f`` centred at 0, as a disk field."""
    r = np.arange(0.0, r_max + step / 2, step)
    G = normal_op_radial_profile(F, support, z, r)
    spline = CubicSpline(np.concatenate((-r[:0:-1], r)), np.concatenate((G[:0:-1], G)))
    bound = float(np.max(np.abs(G))) * 1.001

    def prof(d):
        d = np.asarray(d, dtype=float)
        return np.where(d <= r_max, spline(np.minimum(d, r_max)), 0.0)

    return radial_field(prof, bound)


def spherical_mean_profile(
    g,
    center,
    radius: float,
    step: float = 0.02,
    density: float = 4.0,
    n_min: int = 64,
    far_value: complex = 0.0,
    blend: float = 1.0,
) -> Callable:
    """Spherical means of ``g`` about ``center`` as a smooth function of the distance.

    Circles of radius ``t`` are sampled with ``max(n_min, density * 2 pi sinh t)``
    equispaced points.  Beyond ``radius - blend`` the means are blended
    smoothly into ``far_value``.
    """
    c = complex(_coord(center))
    t = np.arange(0.0, radius + step / 2, step)
    means = np.empty(t.shape, dtype=complex)
    for i, ti in enumerate(t):
        n = max(n_min, int(math.ceil(density * 2.0 * math.pi * math.sinh(ti))))
        w0 = math.tanh(ti / 2.0) * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
        pts = (w0 + c) / (np.conj(c) * w0 + 1.0)
        means[i] = np.mean(np.asarray(g(pts), dtype=complex))
    spline = CubicSpline(np.concatenate((-t[:0:-1], t)), np.concatenate((means[:0:-1], means)))
    t1 = radius - blend

    def prof(d):
        d = np.asarray(d, dtype=float)
        inner = spline(np.minimum(d, radius))
        s = np.clip((d - t1) / blend, 0.0, 1.0)
        # C^2 smoothstep
        chi = 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
        return far_value + chi * (inner - far_value)

    return prof
