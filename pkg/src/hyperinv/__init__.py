"""Inversion of attenuated geodesic normal operators on hyperbolic surfaces.

Modules
-------
numerics    quadrature rules, complex Gamma, zero-limit extrapolation
geometry    Poincare disk points, isometries, geodesics
spherical   spherical functions and transforms of radial functions
xray_disk   attenuated normal operator and reconstruction on the disk
surface     genus-2 octagon surface, surface operators and reconstruction
cli         command-line front end (``python -m hyperinv``)
"""

from .geometry import DiskPoint, IsometryElement, UnitTangent, distance
from .numerics import extrapolate_to_zero, gamma_complex
from .spherical import RadialFunction, phi_lambda, sigma_tilde_closed, spherical_transform, tau_tilde_closed
from .surface import (
    FuchsianGroup,
    SurfaceField,
    octagon_group,
    reconstruct_surface,
    reconstruct_surface_limit,
    surface_mean,
    surface_normal_op,
)
from .xray_disk import AttenuationParam, OperatorResolution, ScalarField, normal_op_attenuated, reconstruct_disk, s_op

__version__ = "0.1.0"
