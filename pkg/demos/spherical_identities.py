"""Spherical transforms of the two attenuated kernels.

Prints quadrature against closed form for the transform of exp(-z r)/sinh r,
and checks that the two transforms multiply to the resolvent symbol
4 pi^2 / ((z + 1/2)^2 + lambda^2).
"""

import math

from hyperinv.spherical import sigma_tilde_closed, spherical_transform, tau_tilde_closed
from hyperinv.xray_disk import kernel_tau

print(f"{'z':>5} {'lambda':>7} {'quadrature':>22} {'closed form':>22} {'product ratio':>14}")
for z in (0.25, 1.0):
    for lam in (0.0, 1.0, 3.0):
        quad = spherical_transform(kernel_tau(z), lam)
        tau = tau_tilde_closed(z, lam)
        ratio = tau * sigma_tilde_closed(z, lam) * ((z + 0.5) ** 2 + lam**2) / (4 * math.pi**2)
        print(f"{z:5.2f} {lam:7.2f} {quad.real:22.15f} {tau.real:22.15f} {ratio.real:14.12f}")
