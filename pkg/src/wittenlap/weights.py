"""Radial weight profiles phi and their admissibility classes.

A weight profile is a C^2 function phi of the geodesic distance t from a
chosen origin; the weighted measure is exp(-phi) dv.  Each sharp inequality
downstream assumes a structural class of phi (concave, strictly concave,
non-increasing convex, ...), and those hypotheses are checked numerically by
dense sampling rather than trusted.  Only phi, phi', phi'' are ever used, so
regularity beyond C^2 is neither required nor probed.

Derivative-sign checks use a fixed tolerance of 1e-9, so phi = 0 passes
CONCAVE, CONVEX, and NON_INCREASING simultaneously.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError

__all__ = [
    "WeightProfile",
    "Admissibility",
    "AdmissibilityVerdict",
    "builtin_profile",
    "parse_weight",
    "check_admissibility",
    "BUILTIN_WEIGHTS",
]

SIGN_TOL = 1e-9


@dataclass(frozen=True)
class WeightProfile:
    """phi together with its first two derivatives, all vectorized in t.

    domain_sup bounds the t-range on which the profile may be evaluated
    (pi/2 for -log cos t, +inf otherwise).
    """

    phi: Callable
    dphi: Callable
    ddphi: Callable
    domain_sup: float = math.inf
    label: str = "custom"

    def require_domain(self, t_max: float) -> None:
        if t_max > self.domain_sup:
            raise DomainError(
                f"profile '{self.label}' is only defined for t < {self.domain_sup}, "
                f"requested t up to {t_max}"
            )


class Admissibility(enum.Enum):
    CONCAVE = "concave"
    STRICTLY_CONCAVE = "strictly_concave"
    CONVEX = "convex"
    NON_INCREASING = "non_increasing"
    BBMP_CONVEXITY = "bbmp_convexity"
    LOG_COS_HEMISPHERE = "log_cos_hemisphere"


@dataclass(frozen=True)
class AdmissibilityVerdict:
    passed: bool
    failed: Admissibility | None = None
    witness: float | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _zero_like(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def builtin_profile(name: str, parameter: float | None = None) -> WeightProfile:
    """Construct one of the named weight families.

    zero            phi = 0
    linear_neg(a)   phi = -a t, a > 0
    quad_neg(c)     phi = -c t^2, c > 0
    exp_dec(a)      phi = a exp(-t), a > 0 (default 1)
    log_cos(a)      phi = -a log cos t on [0, pi/2), default exponent a = 1
    """
    if name == "zero":
        return WeightProfile(_zero_like, _zero_like, _zero_like, label="zero")
    if name == "linear_neg":
        if parameter is None or parameter <= 0:
            raise DomainError("linear_neg requires a slope parameter a > 0")
        a = float(parameter)
        return WeightProfile(
            lambda t: -a * np.asarray(t, dtype=float),
            lambda t: np.full_like(np.asarray(t, dtype=float), -a),
            _zero_like,
            label=f"linear_neg:{a:g}",
        )
    if name == "quad_neg":
        if parameter is None or parameter <= 0:
            raise DomainError("quad_neg requires a coefficient c > 0")
        c = float(parameter)
        return WeightProfile(
            lambda t: -c * np.asarray(t, dtype=float) ** 2,
            lambda t: -2.0 * c * np.asarray(t, dtype=float),
            lambda t: np.full_like(np.asarray(t, dtype=float), -2.0 * c),
            label=f"quad_neg:{c:g}",
        )
    if name == "exp_dec":
        a = 1.0 if parameter is None else float(parameter)
        if a <= 0:
            raise DomainError("exp_dec requires an amplitude a > 0")
        return WeightProfile(
            lambda t: a * np.exp(-np.asarray(t, dtype=float)),
            lambda t: -a * np.exp(-np.asarray(t, dtype=float)),
            lambda t: a * np.exp(-np.asarray(t, dtype=float)),
            label="exp_dec" if parameter is None else f"exp_dec:{a:g}",
        )
    if name == "log_cos":
        a = 1.0 if parameter is None else float(parameter)

        def _check(t):
            t = np.asarray(t, dtype=float)
            if np.any(t >= math.pi / 2) or np.any(t < 0):
                raise DomainError("log_cos is defined for 0 <= t < pi/2")
            return t

        return WeightProfile(
            lambda t: -a * np.log(np.cos(_check(t))),
            lambda t: a * np.tan(_check(t)),
            lambda t: a / np.cos(_check(t)) ** 2,
            domain_sup=math.pi / 2,
            label="log_cos" if parameter is None else f"log_cos:{a:g}",
        )
    raise DomainError(f"unknown weight family '{name}'")


BUILTIN_WEIGHTS = ("zero", "linear_neg", "quad_neg", "exp_dec", "log_cos")


def parse_weight(text: str) -> WeightProfile:
    """Parse a 'name' or 'name:param' weight selector (CLI / config syntax)."""
    name, sep, raw = text.partition(":")
    param = None
    if sep:
        try:
            param = float(raw)
        except ValueError as exc:
            raise DomainError(f"bad weight parameter in '{text}'") from exc
    return builtin_profile(name.strip(), param)


def _bbmp_transform(profile: WeightProfile, z: np.ndarray, dim: int) -> np.ndarray:
    # Convexity of z -> (exp(-phi(z^(1/n))) - exp(-phi(0))) z^(1 - 1/n) is the
    # Euclidean hypothesis class that extends beyond concave phi.
    t = z ** (1.0 / dim)
    a0 = math.exp(-float(np.asarray(profile.phi(0.0))))
    return (np.exp(-profile.phi(t)) - a0) * z ** (1.0 - 1.0 / dim)


def check_admissibility(
    profile: WeightProfile,
    required: Iterable[Admissibility],
    samples: int = 200,
    t_max: float | None = None,
    dim: int = 2,
) -> AdmissibilityVerdict:
    """Check structural hypotheses on phi by dense sampling.

    The sampled range is (0, t_max]; t_max defaults to min(domain_sup, 3).
    Returns the first failing flag with a witness sample where the defining
    sign condition is violated beyond the 1e-9 tolerance.
    """
    if samples < 10:
        raise DomainError("admissibility checks need at least 10 samples")
    if t_max is None:
        t_max = min(profile.domain_sup * (1.0 - 1e-12), 3.0)
    profile.require_domain(t_max)
    t = np.linspace(0.0, t_max, samples)

    for flag in required:
        if flag == Admissibility.CONCAVE:
            vals = np.asarray(profile.ddphi(t))
            bad = vals > SIGN_TOL
            label = "phi'' <= 0"
        elif flag == Admissibility.STRICTLY_CONCAVE:
            vals = np.asarray(profile.ddphi(t))
            bad = vals > -SIGN_TOL
            label = "phi'' < 0"
        elif flag == Admissibility.CONVEX:
            vals = np.asarray(profile.ddphi(t))
            bad = vals < -SIGN_TOL
            label = "phi'' >= 0"
        elif flag == Admissibility.NON_INCREASING:
            vals = np.asarray(profile.dphi(t))
            bad = vals > SIGN_TOL
            label = "phi' <= 0"
        elif flag == Admissibility.BBMP_CONVEXITY:
            z = np.geomspace(1e-8, t_max**dim, samples)
            f = _bbmp_transform(profile, z, dim)
            # second divided differences on the geometric grid
            d1 = (f[1:] - f[:-1]) / (z[1:] - z[:-1])
            dd = (d1[1:] - d1[:-1]) / (z[2:] - z[:-2])
            bad = dd < -SIGN_TOL * max(1.0, float(np.max(np.abs(dd))))
            if np.any(bad):
                i = int(np.argmax(bad))
                return AdmissibilityVerdict(
                    False, flag, float(z[i + 1]),
                    detail="transformed volume profile is not convex",
                )
            continue
        elif flag == Admissibility.LOG_COS_HEMISPHERE:
            tt = t[t < math.pi / 2 * (1.0 - 1e-9)]
            ref = -np.log(np.cos(tt))
            vals = np.abs(np.asarray(profile.phi(tt)) - ref)
            bad = vals > 1e-9 * (1.0 + np.abs(ref))
            label = "phi = -log cos t"
            if np.any(bad):
                i = int(np.argmax(bad))
                return AdmissibilityVerdict(False, flag, float(tt[i]), detail=label)
            continue
        else:  # pragma: no cover - exhaustive enum
            raise DomainError(f"unknown admissibility flag {flag}")
        if np.any(bad):
            i = int(np.argmax(bad))
            return AdmissibilityVerdict(False, flag, float(t[i]), detail=label)
    return AdmissibilityVerdict(True)
