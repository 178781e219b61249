"""Weighted volumes, boundary areas, and radius matching.

The weighted volume of a geodesic ball of radius R in a space form of
curvature kappa with radial weight phi is

    |B_R|_{n,phi} = omega_{n-1} * int_0^R S_kappa(t)^(n-1) exp(-phi(t)) dt,

with omega_{n-1} the area of the Euclidean unit (n-1)-sphere.  solve_radius
inverts that strictly increasing map, which is how an arbitrary domain is
matched to its comparison ball.  Mesh volumes use the same degree-2 triangle
quadrature (edge midpoints) as the FEM mass matrix so that the two agree to
rounding.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError, QuadratureError
from .spaceform import Curvature, SpaceFormModel, conformal_factor, geodesic_distance
from .weights import WeightProfile

__all__ = [
    "unit_sphere_area",
    "ball_weighted_volume",
    "ball_weighted_boundary_area",
    "solve_radius",
    "mesh_weighted_volume",
]


def _gamma_half_integer(two_m: int) -> float:
    """Gamma(two_m / 2) by the recurrence from Gamma(1/2) = sqrt(pi), Gamma(1) = 1."""
    if two_m < 1:
        raise DomainError("gamma recurrence needs a positive half-integer argument")
    val = math.sqrt(math.pi) if two_m % 2 == 1 else 1.0
    x = two_m / 2.0
    arg = 0.5 if two_m % 2 == 1 else 1.0
    while arg < x - 0.25:
        val *= arg
        arg += 1.0
    return val


def unit_sphere_area(dimension: int) -> float:
    """omega_{n-1} = 2 pi^(n/2) / Gamma(n/2), area of the unit sphere in R^n."""
    if dimension < 1:
        raise DomainError("dimension must be >= 1")
    return 2.0 * math.pi ** (dimension / 2.0) / _gamma_half_integer(dimension)


def _s_pow(model: SpaceFormModel, t: np.ndarray) -> np.ndarray:
    # Unchecked kernel: volume integrals may evaluate on the closed interval
    # [0, max_radius], e.g. up to the equator at t = pi/2.
    t = np.asarray(t, dtype=float)
    if model.kappa == Curvature.SPHERICAL:
        s = np.sin(t)
    elif model.kappa == Curvature.EUCLIDEAN:
        s = t
    else:
        s = np.sinh(t)
    return s ** (model.dimension - 1)


def _check_ball_radius(model: SpaceFormModel, profile: WeightProfile, radius: float) -> None:
    if not radius > 0:
        raise DomainError(f"ball radius must be positive, got {radius}")
    if radius > model.max_radius + 1e-15:
        raise DomainError(
            f"radius {radius} exceeds the model bound {model.max_radius} (kappa=+1 caps at pi/2)"
        )
    profile.require_domain(radius)


def ball_weighted_boundary_area(
    model: SpaceFormModel, profile: WeightProfile, radius: float
) -> float:
    """Weighted area of the geodesic sphere: omega_{n-1} S_kappa(R)^(n-1) e^(-phi(R))."""
    _check_ball_radius(model, profile, radius)
    w = float(np.exp(-np.asarray(profile.phi(radius), dtype=float)))
    return unit_sphere_area(model.dimension) * float(_s_pow(model, radius)) * w


def ball_weighted_volume(model: SpaceFormModel, profile: WeightProfile, radius: float) -> float:
    """Weighted volume of the geodesic ball of the given radius."""
    _check_ball_radius(model, profile, radius)

    def integrand(t: float) -> float:
        return float(_s_pow(model, t)) * math.exp(-float(np.asarray(profile.phi(t))))

    val, abserr = quad(integrand, 0.0, radius, epsabs=1e-14, epsrel=1e-12, limit=200)
    if abserr > 1e-8 * max(abs(val), 1e-8):
        raise QuadratureError(
            f"ball volume quadrature did not converge (estimate {val}, abserr {abserr})"
        )
    return unit_sphere_area(model.dimension) * val


def solve_radius(
    model: SpaceFormModel,
    profile: WeightProfile,
    target: float,
    hi_hint: float | None = None,
) -> float:
    """Radius R with |B_R|_{n,phi} = target, to 1e-10 relative accuracy.

    Bisection on a doubling bracket down to width 1e-12, then one Newton
    polish using the boundary-area derivative.
    """
    if not target > 0:
        raise DomainError(f"target volume must be positive, got {target}")
    sup = min(model.max_radius, profile.domain_sup)
    if math.isfinite(sup):
        vol_sup = ball_weighted_volume(model, profile, sup)
        if target > vol_sup * (1.0 + 1e-12):
            raise DomainError(
                f"target volume {target} exceeds the total admissible volume {vol_sup}"
            )
        hi = sup
    else:
        hi = hi_hint if hi_hint else 1.0
        for _ in range(200):
            if ball_weighted_volume(model, profile, hi) >= target:
                break
            hi *= 2.0
        else:
            raise ConvergenceError("could not bracket the target volume from above")
    lo = 0.0
    f_hi = ball_weighted_volume(model, profile, hi) - target
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = ball_weighted_volume(model, profile, mid) - target
        if f_mid >= 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo = mid
    r = hi
    # Newton polish: d|B_R|/dR is the weighted boundary area.
    slope = ball_weighted_boundary_area(model, profile, r)
    if slope > 0:
        r = min(max(r - f_hi / slope, lo), sup if math.isfinite(sup) else r + 1.0)
    if abs(ball_weighted_volume(model, profile, r) - target) > 1e-10 * target:
        raise ConvergenceError("radius solve missed its 1e-10 relative tolerance")
    return r


def triangle_midpoint_weights(model, profile, vertices, triangles, origin=(0.0, 0.0)):
    """Per-triangle (area, weight-at-edge-midpoints) for degree-2 quadrature.

    weights hold rho^2 exp(-phi(t)) at the three edge midpoints of every
    triangle, with t the geodesic distance from `origin`.  Shared by mass
    assembly, mesh volumes, and level-set volumes so they are consistent.
    """
    v = np.asarray(vertices, dtype=float)
    tri = np.asarray(triangles, dtype=int)
    p0, p1, p2 = v[tri[:, 0]], v[tri[:, 1]], v[tri[:, 2]]
    area = 0.5 * np.abs(
        (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
        - (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1])
    )
    mids = np.stack([(p1 + p2) / 2.0, (p0 + p2) / 2.0, (p0 + p1) / 2.0], axis=1)
    t = geodesic_distance(model, mids, origin)
    profile.require_domain(float(np.max(t)) if t.size else 0.0)
    rho = conformal_factor(model, mids)
    w = rho**2 * np.exp(-np.asarray(profile.phi(t), dtype=float))
    return area, w


def mesh_weighted_volume(model, profile, mesh, origin=(0.0, 0.0)) -> float:
    """Weighted area of a 2-D triangulated domain (3-point Gauss per triangle)."""
    if model.dimension != 2:
        raise DomainError("mesh volumes are 2-D only; use ball_weighted_volume for n >= 3")
    area, w = triangle_midpoint_weights(
        model, profile, mesh.vertices, mesh.triangles, origin
    )
    return float(np.sum(area * np.mean(w, axis=1)))
