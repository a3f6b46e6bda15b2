import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperinv.geometry import IsometryElement, distance
from hyperinv.surface import (
    GroupError,
    MAX_REDUCTION_STEPS,
    _orbit,
    octagon_group,
    orbit_normal_op_field,
    reconstruct_surface,
    reconstruct_surface_limit,
    reduce_points,
    reduce_to_fundamental,
    rescale_to_unit_curvature,
    surface_bump,
    surface_mean,
    surface_normal_op,
    SurfaceField,
)
from hyperinv.xray_disk import AttenuationParam, OperatorResolution

G = octagon_group()
CONST = SurfaceField(lambda w: np.ones(np.shape(w), complex), 1.0)
disk_pts = st.builds(
    lambda r, t: complex(r * math.cos(t), r * math.sin(t)),
    st.floats(0, 0.97),
    st.floats(0, 2 * math.pi),
)


def in_domain(w, tol=1e-9):
    """Closed Dirichlet domain: no pairing moves w closer to 0."""
    a, b = G._arrays()
    img = np.abs((a * w + b) / (np.conj(b) * w + np.conj(a)))
    return np.all(img >= abs(w) - tol)


def test_octagon_constants():
    dm = math.acosh(1 / math.tan(math.pi / 8))
    assert G.edge_midpoint_radius == pytest.approx(dm, rel=1e-14)
    assert G.vertex_radius == pytest.approx(math.acosh(1 / math.tan(math.pi / 8) ** 2), rel=1e-14)
    assert G.n_sides == 8
    G.check()


def test_side_pairings_map_sides():
    for s in range(8):
        v0, v1 = G.side_endpoints(s)
        # the pairing for side s sends the opposite side onto side s
        u0, u1 = G.side_endpoints((s + 4) % 8)
        img = {complex(G.pairings[s](u0)), complex(G.pairings[s](u1))}
        for v in (v0, v1):
            assert min(abs(v - x) for x in img) < 1e-9


def test_relator_is_identity():
    m = G.relator_product()
    assert abs(m.b) < 1e-7 and abs(abs(m.a) - 1) < 1e-7


def test_perturbed_group_fails_check():
    with pytest.raises(GroupError):
        octagon_group(perturbation=0.01)


def test_surface_area_is_4pi():
    mean, area = surface_mean(CONST, G, return_area=True)
    assert area == pytest.approx(4 * math.pi, rel=1e-12)
    assert mean == pytest.approx(1.0, rel=1e-12)


def test_orbit_counts_grow_like_area():
    # number of orbit points of 0 in a ball of radius D is about (cosh D - 1) / 2
    for D in (8.0, 10.0):
        n = len(_orbit(G, D)[0])
        assert n == pytest.approx((math.cosh(D) - 1) / 2, rel=0.1)


@settings(max_examples=60)
@given(disk_pts)
def test_reduction_lands_in_domain_and_is_idempotent(w):
    r = reduce_points(np.array([w]), G)
    assert in_domain(r[0])
    assert reduce_points(r, G)[0] == r[0]
    assert distance(r[0], 0j) <= distance(w, 0j) + 1e-12


@settings(max_examples=40)
@given(disk_pts, st.lists(st.integers(0, 7), min_size=1, max_size=3))
def test_reduction_is_gamma_invariant(w, word):
    g = IsometryElement.identity()
    for s in word:
        g = G.pairings[s] @ g
    a = reduce_points(np.array([w]), G)[0]
    b = reduce_points(np.array([complex(g(w))]), G)[0]
    # boundary points may land on either paired side
    a_cands = [a] + [complex(P(a)) for P in G.pairings]
    assert min(abs(b - c) for c in a_cands) < 1e-7


def test_reduce_to_fundamental_element():
    p = 0.93 * np.exp(0.4j)
    q, g = reduce_to_fundamental(p, G)
    assert abs(complex(g(p)) - q.coord) < 1e-10
    assert in_domain(q.coord)


def test_rescale_example():
    pu, pref = rescale_to_unit_curvature(AttenuationParam(1.0, -4.0))
    assert pu.z == 0.5 and pu.K == -1.0
    assert pref == {"pi": 0.5, "s": 0.5, "l": 4.0}


@pytest.mark.parametrize("K", [-1.0, -4.0])
def test_constant_normal_op(K):
    z = 0.8
    p = AttenuationParam(z, K)
    val = surface_normal_op(CONST, p, 0.3 + 0.1j, G, OperatorResolution(n_theta=16))
    assert val == pytest.approx(4 * math.pi / z, rel=1e-9)


def test_constant_reconstruction_chain():
    z, K = 1.0, -4.0
    p = AttenuationParam(z, K)
    data = SurfaceField(lambda w: np.full(np.shape(w), 4 * math.pi / z, complex), 4 * math.pi / z)
    assert reconstruct_surface(data, p, 0.2j, G) == pytest.approx(1.0, rel=1e-6)


def test_lift_independence_rays():
    f = surface_bump(G, center=0.1 + 0.05j, radius=0.9)
    p = AttenuationParam(0.7)
    res = OperatorResolution(n_theta=32, n_r=300)
    qs = np.array([0.0, 0.2 + 0.1j, -0.3j])
    base = surface_normal_op(f, p, qs, G, res)
    for s in (0, 3, 6):
        lifted = np.array([complex(G.pairings[s](q)) for q in qs])
        assert np.allclose(surface_normal_op(f, p, lifted, G, res), base, rtol=1e-6)


def test_orbit_data_matches_rays():
    f = surface_bump(G, radius=1.0)
    p = AttenuationParam(1.0)
    g = orbit_normal_op_field(f, p, G, cutoff=10.0, dr=0.05, arc=0.06)
    qs = np.array([0.0, 0.3 + 0.1j])
    rays = surface_normal_op(f, p, qs, G, OperatorResolution(n_theta=256, n_r=400))
    assert np.allclose(g(qs), rays, rtol=2e-3)


def test_orbit_data_is_lift_independent():
    f = surface_bump(G, center=0.1j, radius=0.9)
    g = surface_normal_op(f, AttenuationParam(1.0), np.array([0.1, complex(G.pairings[2](0.1))]), G, method="orbit")
    assert abs(g[0] - g[1]) < 1e-12 * abs(g[0])


def test_bump_must_fit():
    with pytest.raises(ValueError):
        surface_bump(G, radius=2.0)
    with pytest.raises(ValueError):
        orbit_normal_op_field(CONST, AttenuationParam(1.0), G)


def test_mean_zero_shift():
    f = surface_bump(G, radius=1.0)
    f0 = f.shifted(-surface_mean(f, G).real)
    assert abs(surface_mean(f0, G)) < 1e-12


def test_limit_preconditions():
    f = surface_bump(G, radius=1.0)
    with pytest.raises(ValueError):
        reconstruct_surface_limit(f, None, 0j, G, z_list=(0.4, 0.2))
    with pytest.raises(ValueError):
        reconstruct_surface_limit(f, None, 0j, G, z_list=(0.8, 0.2, 0.1))


def test_step_cap_is_finite():
    assert MAX_REDUCTION_STEPS == 10_000
