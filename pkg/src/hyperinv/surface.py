"""Closed hyperbolic surfaces as quotients of the disk by a Fuchsian group.

The concrete surface is the genus-2 quotient of the regular octagon with
opposite sides glued.  Surface operators are evaluated on the disk after
pulling fields back through the covering map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline
from scipy.spatial import cKDTree

from .geometry import DiskPoint, IsometryElement, _coord, distance
from .numerics import composite_gauss_legendre, extrapolate_to_zero
from .xray_disk import (
    AttenuationParam,
    OperatorResolution,
    ScalarField,
    normal_op_radial_profile,
    reconstruct_disk,
    smooth_bump,
    truncation_radius,
)

__all__ = [
    "FuchsianGroup",
    "SurfaceField",
    "BumpData",
    "octagon_group",
    "reduce_to_fundamental",
    "reduce_points",
    "pullback_field",
    "surface_bump",
    "surface_normal_op",
    "orbit_normal_op_field",
    "rescale_to_unit_curvature",
    "surface_mean",
    "reconstruct_surface",
    "reconstruct_surface_limit",
    "LimitResult",
]

MAX_REDUCTION_STEPS = 10_000

# Word in the side pairings (index s = translation towards side s) that
# multiplies to the identity; lower/upper case in the usual notation
# a0 A1 a2 A3 A0 a1 A2 a3.
OCTAGON_RELATOR = (0, 5, 2, 7, 4, 1, 6, 3)


class GroupError(RuntimeError):
    pass


@dataclass(frozen=True)
class FuchsianGroup:
    """Side pairings of a regular polygon fundamental domain centred at 0.

    ``pairings[s]`` maps the side opposite to side ``s`` onto side ``s``;
    side ``s`` has its midpoint in direction ``s * 2 pi / n``.
    """

    pairings: tuple
    vertex_radius: float
    edge_midpoint_radius: float
    relator: tuple = OCTAGON_RELATOR

    @property
    def n_sides(self):
        return len(self.pairings)

    @property
    def vertices(self):
        n = self.n_sides
        ang = 2 * np.pi * (np.arange(n) + 0.5) / n
        return math.tanh(self.vertex_radius / 2) * np.exp(1j * ang)

    def side_endpoints(self, s):
        v = self.vertices
        return v[(s - 1) % self.n_sides], v[s]

    def relator_product(self):
        m = IsometryElement.identity()
        for s in self.relator:
            m = m @ self.pairings[s]
        return m

    def check(self, tol_side=1e-9, tol_rel=1e-7):
        """Raise :class:`GroupError` unless the pairing and relator invariants hold."""
        n = self.n_sides
        for s, g in enumerate(self.pairings):
            if not abs(g.trace) > 2.0:
                raise GroupError(f"pairing {s} is not hyperbolic")
            src = np.array(self.side_endpoints((s + n // 2) % n))
            dst = np.array(self.side_endpoints(s))
            img = g(src)
            err = min(np.max(np.abs(img - dst)), np.max(np.abs(img[::-1] - dst)))
            if err > tol_side:
                raise GroupError(f"pairing {s} misses its side by {err:.3g}")
        m = self.relator_product()
        if abs(m.b) > tol_rel or abs(abs(m.a.real) - 1.0) > tol_rel:
            raise GroupError(f"relator is not the identity: a={m.a}, b={m.b}")
        return True

    def _arrays(self):
        a = np.array([g.a for g in self.pairings])
        b = np.array([g.b for g in self.pairings])
        return a, b


def octagon_group(perturbation: float = 0.0, check: bool = True) -> FuchsianGroup:
    """The genus-2 surface group of the regular octagon with angles pi/4.

    The centre, an edge midpoint and a vertex span a right triangle with
    angles pi/8, pi/8 and pi/2, so ``cosh(vertex radius) = cot^2(pi/8)``
    and ``cosh(midpoint radius) = cot(pi/8)``.  ``perturbation`` distorts
    the translation lengths; it exists for negative controls.
    """
    cot = 1.0 / math.tan(math.pi / 8)
    vr = math.acosh(cot * cot)
    mr = math.acosh(cot)
    pairings = tuple(
        IsometryElement.translation(2.0 * mr + perturbation, s * math.pi / 4) for s in range(8)
    )
    G = FuchsianGroup(pairings, vr, mr)
    if check:
        G.check()
    return G


def reduce_points(w, G: FuchsianGroup, angles=None, with_words: bool = False):
    """Greedy distance descent of points into the closed Dirichlet domain about 0.

    ``angles`` (directions of tangent vectors at ``w``) are carried along
    by the derivative of each applied pairing.  Returns the reduced points,
    and the angles and/or per-point lists of applied pairing indices when
    requested.
    """
    w = np.array(w, dtype=complex, copy=True)
    shape = w.shape
    w = w.ravel()
    ang = None if angles is None else np.array(angles, dtype=float, copy=True).ravel()
    a, b = G._arrays()
    words = [[] for _ in range(w.size)] if with_words else None
    active = np.arange(w.size)
    for _ in range(MAX_REDUCTION_STEPS):
        if active.size == 0:
            break
        wa = w[active]
        den = np.conj(b)[:, None] * wa[None, :] + np.conj(a)[:, None]
        cand = (a[:, None] * wa[None, :] + b[:, None]) / den
        mod = np.abs(cand)
        best = np.argmin(mod, axis=0)
        best_mod = mod[best, np.arange(active.size)]
        # d(0, w) grows with |w|; a margin of ~1e-11 in distance stops ties on the boundary
        aw = np.abs(wa)
        improve = best_mod < aw - 5e-12 * (1 - aw * aw)
        if not np.any(improve):
            break
        idx = active[improve]
        sel = best[improve]
        w[idx] = cand[sel, np.nonzero(improve)[0]]
        if ang is not None:
            ang[idx] += -2.0 * np.angle(den[sel, np.nonzero(improve)[0]])
        if with_words:
            for i, s in zip(idx, sel):
                words[i].append(int(s))
        active = idx
    else:
        raise GroupError("reduction did not terminate; the group data are inconsistent")
    out = [w.reshape(shape)]
    if ang is not None:
        out.append(np.mod(ang, 2 * np.pi).reshape(shape))
    if with_words:
        out.append(words)
    return out[0] if len(out) == 1 else tuple(out)


def reduce_to_fundamental(p, G: FuchsianGroup):
    """Reduce one point; returns the reduced point and the element ``g`` with ``g p`` = it."""
    w, words = reduce_points(np.array([complex(_coord(p))]), G, with_words=True)
    g = IsometryElement.identity()
    for s in words[0]:
        g = G.pairings[s] @ g
    return DiskPoint(w[0]), g


@dataclass(frozen=True)
class BumpData:
    center: complex
    radius: float
    height: float = 1.0
    offset: float = 0.0

    @property
    def profile(self):
        return smooth_bump(self.radius, self.height)

    @property
    def mass(self):
        """Integral of the bump over the disk."""
        rule = composite_gauss_legendre(np.linspace(0, self.radius, 9), 16)
        return float(2 * np.pi * np.sum(rule.weights * self.profile(rule.nodes) * np.sinh(rule.nodes)))


@dataclass(frozen=True)
class SurfaceField:
    """A function on the surface given by its values on the fundamental domain."""

    eval_on_domain: Callable
    bound: float
    smooth_margin: Optional[float] = None
    bump: Optional[BumpData] = None

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return np.asarray(self.eval_on_domain(w), dtype=complex) * np.ones(w.shape)

    def shifted(self, c):
        """The field ``f + c``."""
        bump = None if self.bump is None else replace(self.bump, offset=self.bump.offset + c)
        return SurfaceField(lambda w: self.eval_on_domain(w) + c, self.bound + abs(c), self.smooth_margin, bump)


def surface_bump(G: FuchsianGroup, center=0j, margin: float = 0.2, radius: Optional[float] = None, height: float = 1.0):
    """Smooth radial bump about ``center`` kept ``margin`` away from the domain boundary."""
    center = complex(center)
    c_dist = float(distance(center, 0j))
    # the inscribed ball of the octagon has the edge-midpoint radius
    room = G.edge_midpoint_radius - c_dist
    if radius is None:
        radius = room - margin
    if radius <= 0 or radius > room - margin + 1e-12:
        raise ValueError("bump does not fit inside the fundamental domain with the requested margin")
    data = BumpData(center, radius, height)
    F = data.profile
    return SurfaceField(lambda w: F(distance(w, center)), abs(height), margin, data)


def pullback_field(f: SurfaceField, G: FuchsianGroup) -> ScalarField:
    """The Gamma-invariant disk field ``f o pi``."""
    return ScalarField(lambda w: f(reduce_points(w, G)), f.bound)


def rescale_to_unit_curvature(p: AttenuationParam):
    """Unit-curvature attenuation ``z / sqrt(-K)`` and the operator prefactors.

    Returns ``(p_unit, {"pi": .., "s": .., "l": ..})`` with
    ``Pi_0 = pi * Pi~_0``, ``S_K = s * S~`` and ``L_K = l * L~``.
    """
    k = p.sqrt_neg_k
    return AttenuationParam(p.z / k, -1.0), {"pi": 1.0 / k, "s": 1.0 / k, "l": -p.K}


def _march_ray_sum(f: SurfaceField, G: FuchsianGroup, q: complex, zt: complex, R: float, res, seg: float = 3.0):
    rule_breaks = np.linspace(0.0, R, max(1, math.ceil(R)) + 1)
    per = max(4, math.ceil(res.n_r / (len(rule_breaks) - 1)))
    rule = composite_gauss_legendre(rule_breaks, per)
    base = np.full(res.n_theta, q, dtype=complex)
    ang = 2 * np.pi * np.arange(res.n_theta) / res.n_theta
    total = 0j
    t0 = 0.0
    while t0 < R:
        m = (rule.nodes >= t0) & (rule.nodes < t0 + seg)
        if np.any(m):
            loc = rule.nodes[m] - t0
            w0 = np.tanh(loc / 2)[None, :] * np.exp(1j * ang)[:, None]
            pts = (w0 + base[:, None]) / (np.conj(base)[:, None] * w0 + 1.0)
            vals = f(reduce_points(pts, G))
            total += np.sum(vals * (rule.weights[m] * np.exp(-zt * rule.nodes[m]))[None, :])
        # move every ray's base point to the end of the segment and fold it back
        w0 = math.tanh(seg / 2) * np.exp(1j * ang)
        den = np.conj(base) * w0 + 1.0
        new_base = (w0 + base) / den
        ang = ang - 2.0 * np.angle(den)
        base, ang = reduce_points(new_base, G, angles=ang)
        t0 += seg
    return total * (2 * np.pi / res.n_theta)


def surface_normal_op(
    f: SurfaceField,
    p: AttenuationParam,
    q,
    G: FuchsianGroup,
    res: OperatorResolution = OperatorResolution(),
    method: str = "rays",
):
    """``Pi_0^(z) f`` at the surface point represented by the disk point ``q``.

    ``method="rays"`` integrates along geodesics, folding every ray back into
    the fundamental domain as it goes.  ``method="orbit"`` (bumps only) sums
    the disk operator over the Gamma-orbit of the bump.
    """
    pu, pref = rescale_to_unit_curvature(p)
    if not pu.z.real > 0:
        raise ValueError("the normal operator needs Re z > 0")
    qs = np.atleast_1d(np.asarray(_coord(q), dtype=complex))
    qs = reduce_points(qs, G)
    if method == "orbit":
        vals = _orbit_values(f, pu.z, G, qs)
    elif method == "rays":
        R = res.R or truncation_radius(pu.z, f.bound, res.eps * f.bound)
        vals = np.array([_march_ray_sum(f, G, c, pu.z, R, res) for c in qs]) * 2.0
    else:
        raise ValueError(f"unknown method {method!r}")
    vals = pref["pi"] * vals
    return complex(vals[0]) if np.ndim(_coord(q)) == 0 else vals


# ---------------------------------------------------------------------------
# Gamma-orbit sums for bump data


@lru_cache(maxsize=8)
def _orbit(G: FuchsianGroup, radius: float):
    """Group elements (as (a, b) arrays) whose image of 0 lies within ``radius``."""
    pa, pb = G._arrays()
    A = np.array([1.0 + 0j])
    B = np.array([0j])

    def hyperboloid(a, b):
        w = b / np.conj(a)
        v = 2 * w * np.abs(a) ** 2  # 2 w / (1 - |w|^2)
        return np.column_stack((v.real, v.imag))

    known = hyperboloid(A, B)
    fa, fb = A, B
    limit = math.cosh(radius)
    while fa.size:
        na = (fa[:, None] * pa[None, :] + fb[:, None] * np.conj(pb)[None, :]).ravel()
        nb = (fa[:, None] * pb[None, :] + fb[:, None] * np.conj(pa)[None, :]).ravel()
        # cosh d(0, g 0) = |a|^2 + |b|^2
        keep = np.abs(na) ** 2 + np.abs(nb) ** 2 <= limit
        na, nb = na[keep], nb[keep]
        if na.size == 0:
            break
        h = hyperboloid(na, nb)
        d, _ = cKDTree(known).query(h, distance_upper_bound=0.5)
        new = np.isinf(d)
        na, nb, h = na[new], nb[new], h[new]
        if na.size == 0:
            break
        _, first = np.unique(np.round(h / 0.5).astype(np.int64), axis=0, return_index=True)
        first = np.sort(first)
        na, nb, h = na[first], nb[first], h[first]
        # rounding may split one point into two cells; drop near-duplicates
        pairs = cKDTree(h).query_pairs(0.5, output_type="ndarray")
        if len(pairs):
            drop = np.zeros(len(h), bool)
            drop[pairs.max(axis=1)] = True
            na, nb, h = na[~drop], nb[~drop], h[~drop]
        A, B = np.concatenate((A, na)), np.concatenate((B, nb))
        known = np.vstack((known, h))
        fa, fb = na, nb
    return A, B


def _smooth_cut(d, T, width):
    """C-infinity step: 1 below ``T - width``, 0 beyond ``T``."""
    s = np.clip((np.asarray(d, dtype=float) - (T - width)) / width, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
        b = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    return a / (a + b)


@dataclass
class _OrbitKernel:
    bump: BumpData
    z: complex
    cutoff: float
    width: float
    grid_step: float = 1e-3
    _d: np.ndarray = field(init=False, repr=False)
    _vals: np.ndarray = field(init=False, repr=False)
    tail: complex = field(init=False)

    def __post_init__(self):
        coarse = np.arange(0.0, self.cutoff + 0.05, 0.005)
        G = normal_op_radial_profile(self.bump.profile, self.bump.radius, self.z, coarse)
        spline = CubicSpline(np.concatenate((-coarse[:0:-1], coarse)), np.concatenate((G[:0:-1], G)))
        self._d = np.arange(0.0, self.cutoff + self.grid_step, self.grid_step)
        self._vals = spline(self._d) * _smooth_cut(self._d, self.cutoff, self.width)
        rule = composite_gauss_legendre(np.linspace(0, self.cutoff, int(self.cutoff * 4) + 1), 16)
        inner = 0.5 * np.sum(rule.weights * spline(rule.nodes) * _smooth_cut(rule.nodes, self.cutoff, self.width) * np.sinh(rule.nodes))
        # orbit points beyond the cutoff are replaced by their mean density
        # 1 / area(F) = 1 / (4 pi); summed against G this gives mass / z
        self.tail = self.bump.mass / self.z - inner + 4 * math.pi * self.bump.offset / self.z

    def __call__(self, d):
        return np.interp(d, self._d, self._vals.real, right=0.0) + 1j * np.interp(d, self._d, self._vals.imag, right=0.0)


def _orbit_points(f: SurfaceField, G: FuchsianGroup, cutoff: float):
    c = f.bump.center
    A, B = _orbit(G, cutoff + G.vertex_radius + float(distance(c, 0j)) + 0.3)
    return (A * c + B) / (np.conj(B) * c + np.conj(A))


def _orbit_sum(pts, orb, ker):
    pts = np.asarray(pts, dtype=complex).ravel()
    out = np.zeros(pts.size, dtype=complex)
    if orb.size == 0:
        return out
    one_minus = 1 - np.abs(orb) ** 2
    chunk = max(1, 4_000_000 // orb.size)
    for s in range(0, pts.size, chunk):
        y = pts[s : s + chunk, None]
        ch = 1 + 2 * np.abs(y - orb[None, :]) ** 2 / ((1 - np.abs(y) ** 2) * one_minus[None, :])
        out[s : s + chunk] = ker(np.arccosh(ch)).sum(axis=1)
    return out


def _orbit_values(f: SurfaceField, z, G: FuchsianGroup, pts, cutoff: float = 12.0, width: float = 4.0, kernel=None):
    if f.bump is None:
        raise ValueError("the orbit method needs a bump field (see surface_bump)")
    ker = kernel or _OrbitKernel(f.bump, complex(z), cutoff, width)
    return _orbit_sum(pts, _orbit_points(f, G, cutoff), ker) + ker.tail


def _polar_grid(r_hi, dr, arc, sector):
    r = np.arange(-3 * dr, r_hi + 3 * dr + dr / 2, dr)
    n_a = max(8, math.ceil(sector * math.sinh(r_hi) / arc))
    alpha = np.arange(-3, n_a + 4) * (sector / n_a)
    return r, alpha


def orbit_normal_op_field(
    f: SurfaceField,
    p: AttenuationParam,
    G: FuchsianGroup,
    cutoff: float = 12.0,
    width: float = 4.0,
    dr: float = 0.04,
    arc: float = 0.05,
    near: float = 7.0,
    far_step: float = 0.2,
) -> SurfaceField:
    """``Pi_0^(z) f`` for a bump field, tabulated on the fundamental domain.

    Values come from the Gamma-orbit sum of the disk operator applied to
    the bump.  Orbit points are weighted by a smooth cutoff reaching zero
    at ``cutoff``; the ones beyond are replaced by their mean density.
    Orbit points farther than ``near`` from 0 give a smooth contribution,
    summed on a coarse grid with spacing ``far_step``; the rest are summed
    on the fine grid (spacings ``dr`` radially, ``arc`` along circles).
    Everything is tabulated in geodesic polar coordinates about 0 and
    interpolated with bicubic splines.  A bump centred at 0 inherits the
    dihedral symmetry of the octagon, which shrinks the table to one
    sixteenth of the domain.
    """
    pu, pref = rescale_to_unit_curvature(p)
    if not pu.z.real > 0:
        raise ValueError("the normal operator needs Re z > 0")
    if f.bump is None:
        raise ValueError("tabulated data need a bump field (see surface_bump)")
    ker = _OrbitKernel(f.bump, pu.z, cutoff, width)
    symmetric = abs(f.bump.center) < 1e-14
    sector = math.pi / G.n_sides if symmetric else 2 * math.pi
    r_hi = G.vertex_radius + 0.1
    orb = _orbit_points(f, G, cutoff)
    is_near = 2 * np.arctanh(np.abs(orb)) <= near
    r, alpha = _polar_grid(r_hi, dr, arc, sector)
    pts = np.tanh(r[:, None] / 2) * np.exp(1j * alpha[None, :])
    vals = _orbit_sum(pts, orb[is_near], ker).reshape(pts.shape)
    if not np.all(is_near):
        rc, ac = _polar_grid(r_hi, far_step, far_step, sector)
        cpts = np.tanh(rc[:, None] / 2) * np.exp(1j * ac[None, :])
        far = _orbit_sum(cpts, orb[~is_near], ker).reshape(cpts.shape)
        fre = RectBivariateSpline(rc, ac, far.real, kx=3, ky=3, s=0)
        fim = RectBivariateSpline(rc, ac, far.imag, kx=3, ky=3, s=0)
        rr, aa = np.meshgrid(r, alpha, indexing="ij")
        vals = vals + fre.ev(rr, aa) + 1j * fim.ev(rr, aa)
    vals = (vals + ker.tail) * pref["pi"]
    sre = RectBivariateSpline(r, alpha, vals.real, kx=3, ky=3, s=0)
    sim = RectBivariateSpline(r, alpha, vals.imag, kx=3, ky=3, s=0)
    n = G.n_sides

    def ev(w):
        w = np.asarray(w, dtype=complex)
        rr = 2 * np.arctanh(np.abs(w))
        aa = np.mod(np.angle(w), 2 * np.pi)
        if symmetric:
            aa = np.mod(aa, 2 * math.pi / n)
            aa = np.where(aa > math.pi / n, 2 * math.pi / n - aa, aa)
        return sre.ev(rr, aa) + 1j * sim.ev(rr, aa)

    bound = float(np.max(np.abs(vals))) * 1.01
    return SurfaceField(ev, bound)


# ---------------------------------------------------------------------------
# Integrals over the fundamental domain


def surface_mean(f, G: FuchsianGroup, n_angle: int = 48, n_r: int = 48, return_area: bool = False):
    """Mean of ``f`` over the fundamental polygon in geodesic polar coordinates.

    Each side contributes a sector on which the boundary radius is
    ``artanh(tanh(midpoint radius) / cos(angle to the midpoint))``.
    """
    n = G.n_sides
    half = math.pi / n
    xa, wa = np.polynomial.legendre.leggauss(n_angle)
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    beta = half * xa
    rho = np.arctanh(math.tanh(G.edge_midpoint_radius) / np.cos(beta))
    r = 0.5 * rho[:, None] * (xr[None, :] + 1)
    w = (half * wa)[:, None] * (0.5 * rho[:, None] * wr[None, :]) * np.sinh(r)
    total = 0j
    area = 0.0
    for s in range(n):
        ang = 2 * math.pi * s / n + beta
        pts = np.tanh(r / 2) * np.exp(1j * ang)[:, None]
        total += np.sum(w * np.asarray(f(pts), dtype=complex))
        area += float(np.sum(w))
    mean = total / area
    return (mean, area) if return_area else mean


# ---------------------------------------------------------------------------
# Reconstruction


def reconstruct_surface(
    g: SurfaceField,
    p: AttenuationParam,
    q,
    G: FuchsianGroup,
    res: OperatorResolution = OperatorResolution(),
    mean_radius: float = 7.0,
):
    """``-(8 pi^2)^-1 L_K^(z) S_K^(z) g`` at the surface point ``q``.

    The data are pulled back to the disk and the disk operators are applied
    at the reduced lift of ``q``; curvature enters through the unit-curvature
    rescaling.
    """
    pu, pref = rescale_to_unit_curvature(p)
    if not pu.z.real > 0:
        raise ValueError("reconstruction needs Re z > 0")
    qs = np.atleast_1d(np.asarray(_coord(q), dtype=complex))
    qs = reduce_points(qs, G)
    far = surface_mean(g, G)
    disk = pullback_field(g, G)
    vals = reconstruct_disk(disk, pu, qs, res, symmetrize=True, mean_radius=mean_radius, far_value=far)
    vals = vals * pref["l"] * pref["s"]
    return complex(vals[0]) if np.ndim(_coord(q)) == 0 else vals


@dataclass(frozen=True)
class LimitResult:
    value: complex
    error: float
    per_z: tuple
    estimates: tuple

    @property
    def increments(self):
        e = self.estimates
        return tuple(abs(e[k + 1] - e[k]) for k in range(len(e) - 1))


def reconstruct_surface_limit(
    f: SurfaceField,
    data: Callable,
    q,
    G: FuchsianGroup,
    K: float = -1.0,
    res: OperatorResolution = OperatorResolution(),
    z_list=(0.4, 0.2, 0.1, 0.05),
    mean_tol: float = 1e-8,
) -> LimitResult:
    """The unattenuated inversion as the ``z -> 0`` limit of the attenuated one.

    The mean of ``f`` is removed first; ``data(f0, p)`` must return the
    normal-operator data ``Pi_0^(z) f0`` as a :class:`SurfaceField`.
    """
    z_list = tuple(float(z) for z in z_list)
    if len(z_list) < 3 or any(not 0 < z <= 0.5 for z in z_list):
        raise ValueError("need at least three attenuations in (0, 0.5]")
    f0 = f.shifted(-surface_mean(f, G).real)
    m = surface_mean(f0, G)
    if abs(m) > mean_tol * max(1.0, f.bound):
        raise ValueError(f"field is not mean-zero after centring (mean {abs(m):.3g})")
    per_z = []
    for z in z_list:
        p = AttenuationParam(z, K)
        per_z.append((z, reconstruct_surface(data(f0, p), p, q, G, res)))
    ex = extrapolate_to_zero(per_z)
    return LimitResult(ex.value, ex.error, tuple(per_z), ex.estimates)
