from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wittenlap import (
    Curvature,
    DomainError,
    c_kappa,
    conformal_factor,
    geodesic_distance,
    geodesic_distance_to_origin,
    mobius_shift,
    s_kappa,
    space_form,
)

HYP = space_form(-1, 2)
EUC = space_form(0, 2)
SPH = space_form(1, 2)


def test_kernel_values():
    assert s_kappa(EUC, 0.7) == 0.7
    assert c_kappa(EUC, 0.7) == 1.0
    assert s_kappa(SPH, math.pi / 4) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert s_kappa(HYP, 1.0) == pytest.approx(math.sinh(1.0), rel=1e-15)
    assert c_kappa(HYP, 1.0) == pytest.approx(math.cosh(1.0), rel=1e-15)


def test_sinh_cosh_against_arbitrary_precision():
    import mpmath as mp

    mp.mp.dps = 40
    for t in (0.1, 0.5, 1.3, 2.7):
        assert s_kappa(HYP, t) == pytest.approx(float(mp.sinh(t)), rel=1e-15)
        assert c_kappa(HYP, t) == pytest.approx(float(mp.cosh(t)), rel=1e-15)
        assert s_kappa(SPH, t / 2) == pytest.approx(float(mp.sin(t / 2)), rel=1e-15)


@pytest.mark.parametrize("model", [HYP, EUC, SPH])
def test_pythagorean_kernel_identity(model):
    t = np.linspace(0.0, min(model.max_radius * 0.999, 3.0), 100)
    s, c = s_kappa(model, t), c_kappa(model, t)
    assert np.max(np.abs(c**2 + int(model.kappa) * s**2 - 1.0)) < 1e-12


@pytest.mark.parametrize("model", [HYP, EUC, SPH])
def test_c_is_derivative_of_s(model):
    t = np.linspace(0.05, min(model.max_radius * 0.95, 2.5), 50)
    eps = 1e-6
    fd = (s_kappa(model, t + eps) - s_kappa(model, t - eps)) / (2 * eps)
    assert np.max(np.abs(fd - c_kappa(model, t)) / np.abs(c_kappa(model, t))) < 1e-6


def test_kernel_domain_errors():
    with pytest.raises(DomainError):
        s_kappa(SPH, math.pi / 2)
    with pytest.raises(DomainError):
        s_kappa(EUC, -0.1)
    with pytest.raises(DomainError):
        space_form(0, 1)


def test_conformal_factors():
    assert conformal_factor(EUC, [0.3, 0.4]) == 1.0
    assert conformal_factor(HYP, [0.0, 0.0]) == 2.0
    assert conformal_factor(SPH, [0.0, 0.0]) == 2.0
    # equator of the hemisphere
    assert conformal_factor(SPH, [1.0, 0.0]) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        conformal_factor(HYP, [1.0, 0.0])


def test_distance_formulas():
    assert geodesic_distance_to_origin(EUC, [0.3, 0.4]) == pytest.approx(0.5)
    r = 0.5
    assert geodesic_distance_to_origin(HYP, [r, 0.0]) == pytest.approx(
        math.log((1 + r) / (1 - r))
    )
    assert geodesic_distance_to_origin(SPH, [1.0, 0.0]) == pytest.approx(math.pi / 2)
    assert geodesic_distance_to_origin(SPH, [r, 0.0]) == pytest.approx(2 * math.atan(r))


@pytest.mark.parametrize("model", [HYP, EUC, SPH])
def test_distance_rotation_invariance(model):
    rng = np.random.default_rng(7)
    r = rng.uniform(0.05, 0.9, size=40)
    th = rng.uniform(0, 2 * math.pi, size=40)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    d0 = geodesic_distance_to_origin(model, pts)
    rot = math.pi / 5
    Q = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    d1 = geodesic_distance_to_origin(model, pts @ Q.T)
    assert np.max(np.abs(d0 - d1)) < 1e-14


@given(st.floats(0.01, 0.95), st.floats(0.0, 2 * math.pi))
def test_hyperbolic_distance_increases_along_rays(r, theta):
    p1 = [r * math.cos(theta), r * math.sin(theta)]
    p2 = [1.02 * r * math.cos(theta), 1.02 * r * math.sin(theta)]
    if 1.02 * r < 1.0:
        assert geodesic_distance_to_origin(HYP, p2) > geodesic_distance_to_origin(HYP, p1)


@pytest.mark.parametrize("model", [HYP, EUC, SPH])
def test_mobius_shift_recenters(model):
    origin = np.array([0.25, -0.1])
    assert np.allclose(mobius_shift(model, origin, origin), 0.0, atol=1e-15)
    # distance from the shifted origin via the isometry matches direct formula
    pts = np.array([[0.1, 0.2], [-0.3, 0.15], [0.0, 0.5]])
    d = geodesic_distance(model, pts, origin)
    d2 = geodesic_distance_to_origin(model, mobius_shift(model, pts, origin))
    assert np.allclose(d, d2, atol=1e-14)


def test_hyperbolic_shift_is_isometry():
    # pairwise distances are preserved under the disk automorphism
    origin = np.array([0.3, 0.2])
    a, b = np.array([0.1, -0.4]), np.array([-0.2, 0.35])

    def dist(p, q):
        w = mobius_shift(HYP, q, p)
        return geodesic_distance_to_origin(HYP, w)

    sa, sb = mobius_shift(HYP, np.stack([a, b]), origin)
    assert dist(a, b) == pytest.approx(dist(sa, sb), rel=1e-12)


def test_max_radius():
    assert SPH.max_radius == math.pi / 2
    assert math.isinf(EUC.max_radius)
    assert math.isinf(HYP.max_radius)
