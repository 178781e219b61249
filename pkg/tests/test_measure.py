from __future__ import annotations

import math

import numpy as np
import pytest

from wittenlap import (
    DomainError,
    ball_weighted_boundary_area,
    ball_weighted_volume,
    builtin_profile,
    solve_radius,
    space_form,
    unit_sphere_area,
)

ZERO = builtin_profile("zero")


def test_unit_sphere_area_closed_forms():
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert unit_sphere_area(4) == pytest.approx(2 * math.pi**2, rel=1e-15)
    assert unit_sphere_area(5) == pytest.approx(8 * math.pi**2 / 3, rel=1e-15)


def test_euclidean_disk_and_ball():
    m2 = space_form(0, 2)
    assert ball_weighted_volume(m2, ZERO, 1.0) == pytest.approx(math.pi, rel=1e-13)
    assert ball_weighted_boundary_area(m2, ZERO, 1.0) == pytest.approx(
        2 * math.pi, rel=1e-15
    )
    m3 = space_form(0, 3)
    assert ball_weighted_volume(m3, ZERO, 2.0) == pytest.approx(
        4 * math.pi * 8 / 3, rel=1e-13
    )


def test_gaussian_type_weight_closed_form():
    # phi = -t^2 in the plane: vol = 2 pi int_0^R t e^{t^2} dt = pi (e^{R^2}-1)
    m = space_form(0, 2)
    w = builtin_profile("quad_neg", 1.0)
    assert ball_weighted_volume(m, w, 1.0) == pytest.approx(
        math.pi * (math.e - 1.0), rel=1e-12
    )


def test_hyperbolic_disk_closed_form():
    m = space_form(-1, 2)
    for R in (0.5, 1.0, 2.0):
        assert ball_weighted_volume(m, ZERO, R) == pytest.approx(
            2 * math.pi * (math.cosh(R) - 1.0), rel=1e-12
        )


def test_spherical_cap_closed_form():
    m = space_form(1, 2)
    for R in (0.4, 1.0, math.pi / 2):
        assert ball_weighted_volume(m, ZERO, R) == pytest.approx(
            2 * math.pi * (1.0 - math.cos(R)), rel=1e-12
        )


def test_hemisphere_log_cos_volume():
    # e^{-phi} = cos t, so vol = 2 pi int_0^{pi/2} sin t cos t dt = pi
    m = space_form(1, 2)
    w = builtin_profile("log_cos", 1.0)
    assert ball_weighted_volume(m, w, math.pi / 2) == pytest.approx(math.pi, rel=1e-12)
    assert ball_weighted_volume(m, w, 0.8) == pytest.approx(
        math.pi * math.sin(0.8) ** 2, rel=1e-12
    )


def test_boundary_area_weighted():
    m = space_form(-1, 2)
    w = builtin_profile("linear_neg", 0.5)
    R = 1.2
    assert ball_weighted_boundary_area(m, w, R) == pytest.approx(
        2 * math.pi * math.sinh(R) * math.exp(0.5 * R), rel=1e-14
    )


def test_volume_monotone_in_radius():
    m = space_form(1, 3)
    w = builtin_profile("exp_dec", 0.4)
    radii = np.linspace(0.1, math.pi / 2, 12)
    vols = [ball_weighted_volume(m, w, float(R)) for R in radii]
    assert all(b > a for a, b in zip(vols, vols[1:]))


@pytest.mark.parametrize("kappa,R", [(-1, 0.6), (0, 1.3), (1, 1.1)])
def test_solve_radius_roundtrip(kappa, R):
    m = space_form(kappa, 2)
    w = builtin_profile("quad_neg", 0.3)
    vol = ball_weighted_volume(m, w, R)
    assert solve_radius(m, w, vol) == pytest.approx(R, abs=1e-11)


def test_solve_radius_hemisphere_near_total():
    m = space_form(1, 2)
    w = builtin_profile("log_cos", 1.0)
    target = math.pi * math.sin(1.5) ** 2
    assert solve_radius(m, w, target) == pytest.approx(1.5, abs=1e-10)


def test_solve_radius_overflow_target():
    m = space_form(1, 2)
    with pytest.raises(DomainError):
        # exceeds hemisphere total volume 2 pi
        solve_radius(m, ZERO, 10.0)


def test_domain_errors():
    m = space_form(1, 2)
    with pytest.raises(DomainError):
        ball_weighted_volume(m, ZERO, math.pi)  # beyond the closed hemisphere
    with pytest.raises(DomainError):
        ball_weighted_volume(m, ZERO, -1.0)
    with pytest.raises(DomainError):
        solve_radius(m, ZERO, -2.0)


def test_mesh_volume_against_closed_form():
    # a coarse structured fan over the unit disk integrates rho^2 e^{-phi}
    from wittenlap import mesh_weighted_volume

    class _M:
        pass

    n_ring, n_ang = 40, 64
    rs = np.linspace(0.0, 1.0, n_ring + 1)
    verts = [(0.0, 0.0)]
    for r in rs[1:]:
        for k in range(n_ang):
            a = 2 * math.pi * k / n_ang
            verts.append((r * math.cos(a), r * math.sin(a)))
    tris = []
    for k in range(n_ang):
        tris.append((0, 1 + k, 1 + (k + 1) % n_ang))
    for i in range(1, n_ring):
        base_in, base_out = 1 + (i - 1) * n_ang, 1 + i * n_ang
        for k in range(n_ang):
            k2 = (k + 1) % n_ang
            tris.append((base_in + k, base_out + k, base_out + k2))
            tris.append((base_in + k, base_out + k2, base_in + k2))
    mesh = _M()
    mesh.vertices = np.asarray(verts)
    mesh.triangles = np.asarray(tris)
    m = space_form(0, 2)
    got = mesh_weighted_volume(m, ZERO, mesh)
    # the fan covers the inscribed regular n_ang-gon exactly and the 3-point
    # edge-midpoint rule is exact for the constant integrand
    polygon = 0.5 * n_ang * math.sin(2 * math.pi / n_ang)
    assert got == pytest.approx(polygon, rel=1e-12)
    assert got == pytest.approx(math.pi, rel=2e-3)
