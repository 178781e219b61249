"""Constant-curvature kernels and conformal disk models.

The three simply connected space forms are handled through a single planar
chart.  For curvature kappa the radial kernels are

    S_kappa(t) = sin t, t, sinh t      (kappa = +1, 0, -1)
    C_kappa(t) = S_kappa'(t)

and the 2-D models are conformal to a disk (or the whole plane):

    kappa = -1 : Poincare disk, factor 2 / (1 - r^2), r < 1
    kappa =  0 : the Euclidean plane, factor 1
    kappa = +1 : stereographic chart of the open hemisphere, factor
                 2 / (1 + r^2); the equator is the unit circle r = 1

On the sphere only the hemisphere is used, so radial coordinates are
confined to [0, pi/2).  Because the 2-D Dirichlet integral is a conformal
invariant, downstream FEM stiffness assembly is curvature-independent;
curvature enters through the area factor and through geodesic distance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Curvature",
    "SpaceFormModel",
    "space_form",
    "s_kappa",
    "c_kappa",
    "conformal_factor",
    "geodesic_distance_to_origin",
    "geodesic_distance",
    "mobius_shift",
]


class Curvature(enum.IntEnum):
    HYPERBOLIC = -1
    EUCLIDEAN = 0
    SPHERICAL = 1


@dataclass(frozen=True)
class SpaceFormModel:
    """A space form of curvature kappa in dimension n >= 2."""

    kappa: Curvature
    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise DomainError(f"dimension must be >= 2, got {self.dimension}")
        object.__setattr__(self, "kappa", Curvature(self.kappa))

    @property
    def max_radius(self) -> float:
        """Supremum of admissible geodesic radii (pi/2 on the hemisphere)."""
        return math.pi / 2 if self.kappa == Curvature.SPHERICAL else math.inf


def space_form(kappa: int, dimension: int = 2) -> SpaceFormModel:
    return SpaceFormModel(Curvature(kappa), dimension)


def _check_radial(model: SpaceFormModel, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t >= model.max_radius):
        raise DomainError(
            f"radial coordinate outside [0, {model.max_radius}) for kappa={int(model.kappa)}"
        )
    return t


def s_kappa(model: SpaceFormModel, t):
    """Radial kernel S_kappa(t); accepts scalars or arrays on [0, max_radius)."""
    t = _check_radial(model, t)
    if model.kappa == Curvature.SPHERICAL:
        out = np.sin(t)
    elif model.kappa == Curvature.EUCLIDEAN:
        out = t.copy()
    else:
        out = np.sinh(t)
    return float(out) if out.ndim == 0 else out


def c_kappa(model: SpaceFormModel, t):
    """Derivative kernel C_kappa(t) = S_kappa'(t)."""
    t = _check_radial(model, t)
    if model.kappa == Curvature.SPHERICAL:
        out = np.cos(t)
    elif model.kappa == Curvature.EUCLIDEAN:
        out = np.ones_like(t)
    else:
        out = np.cosh(t)
    return float(out) if out.ndim == 0 else out


def _radius_sq(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != 2:
        raise DomainError("conformal model points must have shape (..., 2)")
    return np.einsum("...i,...i->...", pts, pts)


def conformal_factor(model: SpaceFormModel, points):
    """Conformal factor rho(x) of the 2-D model metric rho^2 (dx^2 + dy^2).

    Hyperbolic points must satisfy |x| < 1; spherical points |x| <= 1 (the
    equator itself is admissible and carries factor 1).
    """
    r2 = _radius_sq(points)
    if model.kappa == Curvature.HYPERBOLIC:
        if np.any(r2 >= 1.0):
            raise DomainError("hyperbolic model points must lie strictly inside the unit disk")
        out = 2.0 / (1.0 - r2)
    elif model.kappa == Curvature.EUCLIDEAN:
        out = np.ones_like(r2)
    else:
        if np.any(r2 > 1.0 + 1e-12):
            raise DomainError("hemisphere model points must lie in the closed unit disk")
        out = 2.0 / (1.0 + r2)
    return float(out) if np.ndim(out) == 0 else out


def geodesic_distance_to_origin(model: SpaceFormModel, points):
    """Geodesic distance from the model origin.

    kappa = 0: r.   kappa = -1: log((1+r)/(1-r)).   kappa = +1: 2 arctan r,
    so the equator r = 1 maps to distance pi/2.
    """
    r = np.sqrt(_radius_sq(points))
    if model.kappa == Curvature.HYPERBOLIC:
        if np.any(r >= 1.0):
            raise DomainError("hyperbolic model points must lie strictly inside the unit disk")
        out = np.log((1.0 + r) / (1.0 - r))
    elif model.kappa == Curvature.EUCLIDEAN:
        out = r
    else:
        if np.any(r > 1.0 + 1e-12):
            raise DomainError("hemisphere model points must lie in the closed unit disk")
        out = 2.0 * np.arctan(r)
    return float(out) if np.ndim(out) == 0 else out


def mobius_shift(model: SpaceFormModel, points, origin):
    """Model coordinates of `points` after moving `origin` to the center.

    The shift is the model's isometry taking `origin` to 0: a translation for
    kappa = 0 and the standard disk Mobius transform otherwise.  Used when a
    radial weight is centered away from the chart origin.
    """
    pts = np.asarray(points, dtype=float)
    o = np.asarray(origin, dtype=float)
    if o.shape != (2,):
        raise DomainError("origin must be a single model point of shape (2,)")
    if model.kappa == Curvature.EUCLIDEAN:
        return pts - o
    z = pts[..., 0] + 1j * pts[..., 1]
    a = complex(o[0], o[1])
    if model.kappa == Curvature.HYPERBOLIC:
        if abs(a) >= 1.0:
            raise DomainError("hyperbolic origin must lie strictly inside the unit disk")
        w = (z - a) / (1.0 - np.conj(a) * z)
    else:
        w = (z - a) / (1.0 + np.conj(a) * z)
    return np.stack([w.real, w.imag], axis=-1)


def geodesic_distance(model: SpaceFormModel, points, origin=(0.0, 0.0)):
    """Geodesic distance from an arbitrary base point of the 2-D model."""
    o = np.asarray(origin, dtype=float)
    if o.shape == (2,) and o[0] == 0.0 and o[1] == 0.0:
        return geodesic_distance_to_origin(model, points)
    return geodesic_distance_to_origin(model, mobius_shift(model, points, origin))
