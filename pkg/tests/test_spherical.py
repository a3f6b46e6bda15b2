import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from hyperinv.spherical import (
    DivergenceError,
    RadialFunction,
    phi_lambda,
    radial_laplacian,
    radial_symmetrize,
    sigma_tilde_closed,
    spherical_transform,
    tau_tilde_closed,
)
from hyperinv.xray_disk import kernel_sigma, kernel_tau, smooth_bump


def phi_ref(lam, r):
    # P_{-1/2 + i lam}(cosh r), the Legendre function on the cut-free branch
    return complex(mpmath.legenp(-0.5 + 1j * lam, 0, mpmath.cosh(r), type=3))


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("r", [0.01, 0.5, 2.0, 8.0, 25.0])
def test_phi_against_legendre(lam, r):
    ref = phi_ref(lam, r)
    scale = max(abs(ref), math.exp(-r / 2))
    assert abs(phi_lambda(lam, r) - ref) <= 1e-12 * scale


def test_phi_normalized_and_even_in_lambda():
    assert phi_lambda(1.3, 0.0) == 1.0
    r = np.linspace(0.1, 4, 9)
    assert np.allclose(phi_lambda(0.7, r), phi_lambda(-0.7, r), rtol=0, atol=1e-13)


def test_phi_complex_lambda():
    lam = 0.4 + 0.2j
    assert abs(phi_lambda(lam, 1.5) - phi_ref(lam, 1.5)) < 1e-12


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
def test_phi_eigenfunction(lam):
    r = np.linspace(0.2, 3.0, 15)
    F = lambda x: np.asarray(phi_lambda(lam, np.asarray(x)))
    resid = radial_laplacian(F, r, 1e-3) + (lam**2 + 0.25) * F(r)
    assert np.max(np.abs(resid)) < 1e-5 * (lam**2 + 0.25)


def test_printed_exponent_sign_is_not_an_eigenfunction():
    # the integrand exponent must be i*lam - 1/2; with -i*lam + 1/2 the
    # integral is not an eigenfunction and is not normalized sensibly
    lam = 1.0

    def wrong(r):
        th = np.linspace(0, np.pi, 4001)
        base = np.cosh(r)[:, None] - np.sinh(r)[:, None] * np.cos(th)[None, :]
        vals = base ** (-1j * lam + 0.5)
        return np.trapezoid(vals, th, axis=1) / np.pi

    r = np.linspace(0.5, 2.5, 5)
    resid = radial_laplacian(wrong, r, 1e-3) + (lam**2 + 0.25) * wrong(r)
    assert np.max(np.abs(resid)) > 1e-2


def test_phi_rejects_bad_args():
    with pytest.raises(ValueError):
        phi_lambda(1.0, -0.1)
    with pytest.raises(ValueError):
        phi_lambda(1.0, 1.0, n_theta=8)


def _ode_phi(lam, r_max):
    # phi'' + coth(r) phi' + (lam^2 + 1/4) phi = 0 with phi(0) = 1; start from the series
    k = lam**2 + 0.25
    r0 = 1e-3
    y0 = [1 - k * r0**2 / 4, -k * r0 / 2]
    rhs = lambda r, y: [y[1], -y[1] / math.tanh(r) - k * y[0]]
    grid = np.linspace(r0, r_max, 4001)
    sol = solve_ivp(rhs, (r0, r_max), y0, t_eval=grid, rtol=1e-12, atol=1e-14, method="DOP853")
    spline = CubicSpline(np.concatenate(([0.0], grid)), np.concatenate(([1.0], sol.y[0])))
    return spline


@pytest.mark.parametrize("lam", [0.0, 1.5])
def test_spherical_transform_against_cartesian_quadrature(lam):
    # independent oracle: trapezoid rule on a Cartesian grid of disk coordinates
    rho = 1.0
    F = smooth_bump(rho)
    phi = _ode_phi(lam, rho + 0.1)
    n = 1201
    x = np.linspace(-0.5, 0.5, n)
    X, Y = np.meshgrid(x, x)
    W = X + 1j * Y
    d = 2 * np.arctanh(np.abs(W))
    dens = F(d) * phi(d) * 4 / (1 - np.abs(W) ** 2) ** 2
    ref = np.trapezoid(np.trapezoid(dens, x, axis=1), x)
    val = spherical_transform(RadialFunction(F, support_radius=rho), lam)
    assert abs(val - ref) < 1e-8 * abs(ref)


@pytest.mark.parametrize("z", [0.25, 1.0, 2.0])
@pytest.mark.parametrize("lam", [0.0, 0.5, 2.0, 5.0])
def test_kernel_transforms_match_closed_forms(z, lam):
    tau = spherical_transform(kernel_tau(z), lam)
    assert abs(tau - tau_tilde_closed(z, lam)) < 1e-8 * abs(tau)
    sig = spherical_transform(kernel_sigma(z), lam)
    assert abs(sig - sigma_tilde_closed(z, lam)) < 1e-8 * abs(sig)


def test_tau_closed_form_mpmath():
    # 2 pi int_0^inf e^{-zr} phi(r) dr evaluated with mpmath quadrature
    z, lam = 0.5, 1.0
    ref = 2 * mpmath.pi * mpmath.quad(lambda r: mpmath.exp(-z * r) * mpmath.legenp(-0.5 + 1j * lam, 0, mpmath.cosh(r), type=3), [0, 5, 20, 80])
    assert abs(tau_tilde_closed(z, lam) - complex(ref)) < 1e-10 * abs(complex(ref))


@given(st.floats(0.05, 5.0), st.floats(0.0, 8.0))
def test_product_identity(z, lam):
    prod = tau_tilde_closed(z, lam) * sigma_tilde_closed(z, lam)
    target = 4 * math.pi**2 / ((z + 0.5) ** 2 + lam**2)
    assert abs(prod - target) <= 1e-12 * target


def test_closed_forms_need_positive_z():
    with pytest.raises(ValueError):
        tau_tilde_closed(0.0, 1.0)
    with pytest.raises(ValueError):
        sigma_tilde_closed(-1.0, 1.0)


def test_divergence_detected():
    # exp(-0.2 r) / sinh r against phi with |Im lam| = 1 does not decay
    with pytest.raises(DivergenceError):
        spherical_transform(kernel_tau(0.2), 1.0j, R=60)


def test_radial_symmetrize():
    f = lambda w: np.real(w) ** 2
    # mean of cos^2 over the circle is 1/2
    assert radial_symmetrize(f, 0.4, 64) == pytest.approx(0.08, rel=1e-13)
    radial = lambda w: np.abs(w) ** 2
    assert radial_symmetrize(radial, 0.3j, 16) == pytest.approx(0.09, rel=1e-13)
    with pytest.raises(ValueError):
        radial_symmetrize(f, 0.1, 4)


def test_radial_laplacian_at_origin():
    # Delta cosh r = 2 cosh r on the unit-curvature plane
    F = np.cosh
    r = np.array([0.0, 0.5, 1.0])
    assert np.allclose(radial_laplacian(F, r, 1e-3), 2 * np.cosh(r), rtol=1e-6)
