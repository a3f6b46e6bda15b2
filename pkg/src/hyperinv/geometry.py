"""Poincare disk model: points, SU(1,1) isometries, distance and geodesics.

Functions accept either :class:`DiskPoint` instances or plain complex
coordinates; most are vectorized over numpy arrays of complex coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BOUNDARY_GUARD",
    "DiskPoint",
    "IsometryElement",
    "UnitTangent",
    "apply_isometry",
    "distance",
    "geodesic_point",
    "translate_to_origin",
    "fiber_nodes",
    "geodesic_tangent",
    "polar_point",
]

BOUNDARY_GUARD = 1e-12


class GeometryError(ValueError):
    pass


def _coord(p):
    return p.coord if isinstance(p, DiskPoint) else p


@dataclass(frozen=True)
class DiskPoint:
    coord: complex

    def __post_init__(self):
        c = complex(self.coord)
        if not abs(c) < 1.0 - BOUNDARY_GUARD:
            raise GeometryError(f"{c} is not inside the open unit disk")
        object.__setattr__(self, "coord", c)

    def __complex__(self):
        return self.coord


@dataclass(frozen=True)
class IsometryElement:
    """The SU(1,1) matrix ``[[a, b], [conj(b), conj(a)]]``."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if not abs(det - 1.0) <= 1e-10 * max(1.0, abs(a) ** 2):
            raise GeometryError(f"|a|^2 - |b|^2 = {det}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def normalized(cls, a, b):
        """Build an element after rescaling ``(a, b)`` onto ``|a|^2 - |b|^2 = 1``."""
        a, b = complex(a), complex(b)
        det = abs(a) ** 2 - abs(b) ** 2
        if det <= 0:
            raise GeometryError("matrix is not in SU(1,1) up to scale")
        s = math.sqrt(det)
        return cls(a / s, b / s)

    @classmethod
    def identity(cls):
        return cls(1.0 + 0j, 0j)

    @classmethod
    def rotation(cls, angle):
        """Rotation of the disk about 0 by ``angle``."""
        return cls(complex(math.cos(angle / 2), math.sin(angle / 2)), 0j)

    @classmethod
    def translation(cls, distance, direction=0.0):
        """Hyperbolic translation moving 0 a ``distance`` along the ray at angle ``direction``."""
        e = complex(math.cos(direction), math.sin(direction))
        return cls(math.cosh(distance / 2), math.sinh(distance / 2) * e)

    def __matmul__(self, other):
        a = self.a * other.a + self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        return IsometryElement.normalized(a, b)

    def inverse(self):
        return IsometryElement(self.a.conjugate(), -self.b)

    @property
    def trace(self):
        return 2.0 * self.a.real

    def __call__(self, w):
        return apply_isometry(self, w)

    def matrix(self):
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])


@dataclass(frozen=True)
class UnitTangent:
    base: DiskPoint
    angle: float

    def __post_init__(self):
        if not isinstance(self.base, DiskPoint):
            object.__setattr__(self, "base", DiskPoint(self.base))
        object.__setattr__(self, "angle", float(self.angle) % (2 * math.pi))


def apply_isometry(g: IsometryElement, p):
    """Mobius action ``(a w + b) / (conj(b) w + conj(a))``."""
    w = _coord(p)
    den = g.b.conjugate() * w + g.a.conjugate()
    if np.any(np.abs(den) < 1e-300):
        raise ArithmeticError("degenerate Mobius denominator")
    out = (g.a * w + g.b) / den
    return DiskPoint(out) if isinstance(p, DiskPoint) else out


def distance(p, q):
    """Hyperbolic distance for the metric ``4|dw|^2 / (1 - |w|^2)^2``."""
    p, q = _coord(p), _coord(q)
    # 2 artanh |(p - q) / (1 - conj(q) p)| loses less precision than arccosh near 0
    rho = np.abs(p - q) / np.abs(1.0 - np.conj(q) * p)
    # points that round onto the unit circle are infinitely far away
    with np.errstate(divide="ignore"):
        return 2.0 * np.arctanh(np.minimum(rho, 1.0))


def translate_to_origin(p) -> IsometryElement:
    """The transvection along the geodesic through ``p`` and 0 sending ``p`` to 0."""
    w = complex(_coord(p))
    s = math.sqrt(1.0 - abs(w) ** 2)
    return IsometryElement(1.0 / s, -w / s)


def polar_point(center, r, theta):
    """Point at distance ``r`` from ``center`` in direction ``theta`` (measured at ``center``).

    Directions at ``center`` are the ones carried from the origin by the
    transvection ``translate_to_origin(center).inverse()``, which is
    conformal, so disk-coordinate angles at ``center`` agree with them.
    """
    w0 = np.tanh(np.asarray(r) / 2.0) * np.exp(1j * np.asarray(theta))
    c = complex(_coord(center))
    if c == 0:
        return w0
    return apply_isometry(translate_to_origin(c).inverse(), w0)


def geodesic_point(x: UnitTangent, t):
    """Position at time ``t`` along the unit-speed geodesic with initial data ``x``."""
    t = np.asarray(t, dtype=float)
    # negative times run along the opposite direction
    out = polar_point(x.base, np.abs(t), x.angle + np.where(t < 0, math.pi, 0.0))
    return DiskPoint(complex(out)) if out.ndim == 0 else out


def geodesic_tangent(x: UnitTangent, t: float) -> UnitTangent:
    """Velocity of the geodesic ``x`` at time ``t`` as a unit tangent."""
    # in the origin frame the geodesic is the diameter tanh(t/2) e^{i angle}
    w0 = math.tanh(t / 2.0) * complex(math.cos(x.angle), math.sin(x.angle))
    g = translate_to_origin(x.base).inverse()
    # the Mobius derivative 1 / (conj(b) w + conj(a))^2 rotates directions
    turn = -2.0 * np.angle(g.b.conjugate() * w0 + g.a.conjugate())
    angle = x.angle + turn
    return UnitTangent(DiskPoint(apply_isometry(g, w0)), angle)


def fiber_nodes(x, n: int):
    """``n`` equispaced unit tangents at ``x``, each with weight ``2 pi / n``."""
    if n < 4:
        raise ValueError("need at least four fiber nodes")
    base = x if isinstance(x, DiskPoint) else DiskPoint(x)
    w = 2.0 * math.pi / n
    return [(UnitTangent(base, 2.0 * math.pi * k / n), w) for k in range(n)]
