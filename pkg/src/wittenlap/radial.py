"""Radial eigenvalue problem for the weighted Laplacian on geodesic balls.

Separating the weighted Laplacian on a ball of radius R into spherical
harmonics of degree l leaves the radial ODE

    T'' + [ (n-1) C_kappa/S_kappa - phi' ] T' + ( mu - v_l / S_kappa^2 ) T = 0,

with v_l = l (l + n - 2), or equivalently the Sturm-Liouville form

    (p T')' + ( mu - v_l S_kappa^{-2} ) p T = 0,   p = S_kappa^{n-1} e^{-phi}.

Regularity at the origin forces T'(0) = 0 for l = 0 and T ~ t^l for l >= 1;
at t = R either T = 0 (Dirichlet) or T' = 0 (Neumann).  Eigenvalues are
found by shooting: an adaptive Cash-Karp RK45 integration launched from a
series expansion at t0 = 1e-6 R, with eigenvalues bracketed by interior node
counts (Sturm oscillation) and polished by Brent iteration on the endpoint
residual.  An independent finite-difference discretization of the
Sturm-Liouville form acts as an oracle; the two routes are never mixed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError
from .spaceform import Curvature, SpaceFormModel
from .weights import WeightProfile

__all__ = [
    "BoundaryCondition",
    "RadialMode",
    "ShootResult",
    "RadialEigenpair",
    "NeumannBallSpectrumSummary",
    "shoot",
    "eigenvalue",
    "first_dirichlet",
    "first_neumann",
    "fd_oracle_eigenvalue",
    "wronskian_residual",
    "trial_h",
]

DEFAULT_CEILING = 1e4
_RTOL = 1e-11          # local error control of the shooting integrator
_RESCALE_LIMIT = 1e100
_GRID_SAMPLES = 2001   # uniform samples stored with each eigenpair


class BoundaryCondition(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @classmethod
    def parse(cls, text: str) -> "BoundaryCondition":
        try:
            return cls(text.strip().lower())
        except ValueError as exc:
            raise DomainError(f"unknown boundary condition '{text}'") from exc


@dataclass(frozen=True)
class RadialMode:
    """Angular degree l >= 0, overtone j >= 1, and endpoint condition."""

    l: int
    j: int
    bc: BoundaryCondition

    def __post_init__(self) -> None:
        if self.l < 0 or self.j < 1:
            raise DomainError(f"need l >= 0 and j >= 1, got l={self.l}, j={self.j}")

    @classmethod
    def parse(cls, text: str, bc: "str | BoundaryCondition") -> "RadialMode":
        """Build a mode from an ``"l,j"`` string and a boundary condition name."""
        parts = text.split(",")
        if len(parts) != 2:
            raise DomainError(f"mode must look like 'l,j', got {text!r}")
        try:
            l, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise DomainError(f"mode must look like 'l,j', got {text!r}") from exc
        if isinstance(bc, str):
            bc = BoundaryCondition.parse(bc)
        return cls(l, j, bc)


@dataclass(frozen=True)
class ShootResult:
    residual: float
    node_count: int
    rescale_events: int


@dataclass(frozen=True)
class RadialEigenpair:
    model: SpaceFormModel
    profile: WeightProfile
    mode: RadialMode
    radius: float
    eigenvalue: float
    t: np.ndarray
    values: np.ndarray        # T, normalized to int T^2 p dt = 1
    derivs: np.ndarray        # T'
    node_count: int
    residual: float           # endpoint residual relative to max |T|
    rescale_events: int = 0


@dataclass(frozen=True)
class NeumannBallSpectrumSummary:
    mu_1_1: float
    mu_0_2: float
    first_nonzero: float
    ordering_holds: bool
    pair_1_1: RadialEigenpair
    pair_0_2: RadialEigenpair


# ---------------------------------------------------------------------------
# shooting integrator


class _RadialContext:
    """Scalar-callable coefficients of one (model, profile, l, R) problem."""

    __slots__ = ("kappa", "n", "l", "vl", "R", "dphi", "phi0d", "phi0dd", "sc")

    def __init__(self, model: SpaceFormModel, profile: WeightProfile, l: int, R: float):
        if not 0 < R < model.max_radius:
            raise DomainError(
                f"ball radius must satisfy 0 < R < {model.max_radius}, got {R}"
            )
        profile.require_domain(R)
        self.kappa = int(model.kappa)
        self.n = model.dimension
        self.l = l
        self.vl = float(l * (l + self.n - 2))
        self.R = float(R)
        dphi = profile.dphi
        self.dphi = lambda t: float(dphi(t))
        self.phi0d = float(profile.dphi(0.0))
        self.phi0dd = float(profile.ddphi(0.0))
        if self.kappa == 1:
            self.sc = lambda t: (math.sin(t), math.cos(t))
        elif self.kappa == 0:
            self.sc = lambda t: (t, 1.0)
        else:
            self.sc = lambda t: (math.sinh(t), math.cosh(t))

    def launch(self, mu: float) -> tuple[float, float, float]:
        """Series values (t0, T, T') consistent with the ODE at order t^(l+2)."""
        l, n = self.l, self.n
        t0 = 1e-6 * self.R
        a1 = self.phi0d * l / (2 * l + n - 1)
        c1 = self.phi0dd + (n - 1) * self.kappa / 3.0
        a2 = (self.phi0d * a1 * (l + 1) + c1 * l - mu + self.vl * self.kappa / 3.0) / (
            2.0 * (2 * l + n)
        )
        poly = 1.0 + a1 * t0 + a2 * t0 * t0
        dpoly = a1 + 2.0 * a2 * t0
        tl = t0**l
        T = tl * poly
        dT = (l * t0 ** (l - 1) * poly if l else 0.0) + tl * dpoly
        return t0, T, dT

    def rhs(self, t: float, T: float, U: float, mu: float) -> tuple[float, float]:
        s, c = self.sc(t)
        P = (self.n - 1) * c / s - self.dphi(t)
        Q = mu - self.vl / (s * s)
        return U, -P * U - Q * T


def _integrate(ctx: _RadialContext, mu: float, collect: bool = False):
    """Adaptive Cash-Karp RK45 from t0 to R with node counting and rescaling.

    Returns (T, U, nodes, rescales, trajectory); trajectory is a list of
    (t, T, U, U') tuples when collect is set, else None.
    """
    t, T, U = ctx.launch(mu)
    R = ctx.R
    f = ctx.rhs

    # step caps: resolve oscillation so sign changes cannot be skipped
    h_osc = 0.25 * math.pi / math.sqrt(max(mu, 1.0))
    h_max = min(R / 20.0, h_osc)
    h = min(max(t * 0.1, 1e-9 * R), h_max)

    nodes = 0
    rescales = 0
    t_prev, T_prev = t, T
    scale_T = max(abs(T), 1e-12)
    scale_U = max(abs(U), 1e-12)
    traj = None
    if collect:
        traj = [(t, T, U, f(t, T, U, mu)[1])]

    max_steps = 200000
    for _ in range(max_steps):
        if t >= R:
            break
        h = min(h, R - t)
        k1T, k1U = f(t, T, U, mu)
        k2T, k2U = f(t + h * 0.2, T + h * 0.2 * k1T, U + h * 0.2 * k1U, mu)
        k3T, k3U = f(
            t + h * 0.3,
            T + h * (0.075 * k1T + 0.225 * k2T),
            U + h * (0.075 * k1U + 0.225 * k2U),
            mu,
        )
        k4T, k4U = f(
            t + h * 0.6,
            T + h * (0.3 * k1T - 0.9 * k2T + 1.2 * k3T),
            U + h * (0.3 * k1U - 0.9 * k2U + 1.2 * k3U),
            mu,
        )
        k5T, k5U = f(
            t + h,
            T + h * (-11.0 / 54.0 * k1T + 2.5 * k2T - 70.0 / 27.0 * k3T + 35.0 / 27.0 * k4T),
            U + h * (-11.0 / 54.0 * k1U + 2.5 * k2U - 70.0 / 27.0 * k3U + 35.0 / 27.0 * k4U),
            mu,
        )
        k6T, k6U = f(
            t + 0.875 * h,
            T
            + h
            * (
                1631.0 / 55296.0 * k1T
                + 175.0 / 512.0 * k2T
                + 575.0 / 13824.0 * k3T
                + 44275.0 / 110592.0 * k4T
                + 253.0 / 4096.0 * k5T
            ),
            U
            + h
            * (
                1631.0 / 55296.0 * k1U
                + 175.0 / 512.0 * k2U
                + 575.0 / 13824.0 * k3U
                + 44275.0 / 110592.0 * k4U
                + 253.0 / 4096.0 * k5U
            ),
            mu,
        )
        T5 = T + h * (37.0 / 378.0 * k1T + 250.0 / 621.0 * k3T + 125.0 / 594.0 * k4T + 512.0 / 1771.0 * k6T)
        U5 = U + h * (37.0 / 378.0 * k1U + 250.0 / 621.0 * k3U + 125.0 / 594.0 * k4U + 512.0 / 1771.0 * k6U)
        T4 = T + h * (
            2825.0 / 27648.0 * k1T
            + 18575.0 / 48384.0 * k3T
            + 13525.0 / 55296.0 * k4T
            + 277.0 / 14336.0 * k5T
            + 0.25 * k6T
        )
        U4 = U + h * (
            2825.0 / 27648.0 * k1U
            + 18575.0 / 48384.0 * k3U
            + 13525.0 / 55296.0 * k4U
            + 277.0 / 14336.0 * k5U
            + 0.25 * k6U
        )
        err = max(
            abs(T5 - T4) / (_RTOL * max(scale_T, abs(T5)) + 1e-300),
            abs(U5 - U4) / (_RTOL * max(scale_U, abs(U5)) + 1e-300),
        )
        if err <= 1.0:
            t += h
            T, U = T5, U5
            if T * T_prev < 0.0:
                # count the crossing only if it lies genuinely inside (0, R);
                # a boundary zero at an exact eigenvalue must not register
                t_cross = t_prev + (t - t_prev) * T_prev / (T_prev - T)
                if t_cross < R * (1.0 - 1e-9):
                    nodes += 1
            if T != 0.0:
                t_prev, T_prev = t, T
            scale_T = max(scale_T, abs(T))
            scale_U = max(scale_U, abs(U))
            if scale_T > _RESCALE_LIMIT or scale_U > _RESCALE_LIMIT:
                m = max(abs(T), abs(U))
                T /= m
                U /= m
                scale_T = max(abs(T), 1e-12)
                scale_U = max(abs(U), 1e-12)
                rescales += 1
                if rescales > 100000:
                    raise ConvergenceError("shooting rescale counter overflow")
            if collect:
                traj.append((t, T, U, f(t, T, U, mu)[1]))
            h = min(h * min(5.0, 0.9 * err ** -0.2 if err > 0 else 5.0), h_max)
        else:
            h *= max(0.1, 0.9 * err ** -0.2)
        if h < 1e-16 * R:
            raise ConvergenceError("shooting step size underflow")
    else:
        raise ConvergenceError("shooting exceeded the step budget")
    return T, U, nodes, rescales, traj


def shoot(
    model: SpaceFormModel,
    profile: WeightProfile,
    mode: RadialMode,
    mu: float,
    radius: float,
) -> ShootResult:
    """Integrate the radial ODE at trial eigenvalue mu.

    residual is T(R) for Dirichlet and T'(R) for Neumann; node_count is the
    number of interior sign changes of T on (0, R).
    """
    ctx = _RadialContext(model, profile, mode.l, radius)
    T, U, nodes, rescales, _ = _integrate(ctx, mu)
    res = T if mode.bc == BoundaryCondition.DIRICHLET else U
    return ShootResult(float(res), int(nodes), int(rescales))


# ---------------------------------------------------------------------------
# eigenvalue search


def _node_count(ctx: _RadialContext, mu: float) -> int:
    return _integrate(ctx, mu)[2]


def _residual(ctx: _RadialContext, mu: float, bc: BoundaryCondition) -> float:
    T, U, _, _, _ = _integrate(ctx, mu)
    return T if bc == BoundaryCondition.DIRICHLET else U


def _staircase_bracket(
    ctx: _RadialContext, k: int, ceiling: float, rel_width: float = 1e-3
) -> tuple[float, float]:
    """[lo, hi] with exactly k-1 interior nodes at lo and k at hi.

    The node count of the launched solution is a non-decreasing staircase in
    mu that steps by one at each Dirichlet eigenvalue, so this brackets the
    k-th Dirichlet eigenvalue without ever misidentifying the overtone.
    """
    lo, n_lo = 0.0, _node_count(ctx, 0.0)
    if n_lo > k - 1:
        raise ConvergenceError("node count at mu = 0 already exceeds the target overtone")
    hi = max(1.0, (math.pi * (k + ctx.l) / ctx.R) ** 2 / 4.0)
    while True:
        n_hi = _node_count(ctx, hi)
        if n_hi >= k:
            break
        if hi > ceiling:
            raise ConvergenceError(
                f"eigenvalue search exceeded the ceiling {ceiling} (l={ctx.l}, k={k})"
            )
        hi *= 2.0
    for _ in range(300):
        done = n_lo == k - 1 and n_hi == k and (hi - lo) <= rel_width * max(hi, 1.0)
        if done:
            return lo, hi
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return lo, hi
        n_mid = _node_count(ctx, mid)
        if n_mid >= k:
            hi, n_hi = mid, n_mid
        else:
            lo, n_lo = mid, n_mid
    raise ConvergenceError("node-count bisection stalled")


def _solve_mu(
    model: SpaceFormModel,
    profile: WeightProfile,
    mode: RadialMode,
    radius: float,
    ceiling: float,
) -> float:
    ctx = _RadialContext(model, profile, mode.l, radius)
    bc, j = mode.bc, mode.j
    resid = lambda mu: _residual(ctx, mu, bc)

    if bc == BoundaryCondition.DIRICHLET:
        # T starts positive and flips sign at each interior zero, so the
        # endpoint values at node counts j-1 and j have opposite signs.  A
        # bracket endpoint can land exactly on the eigenvalue (where the
        # counted nodes understate by one); nudging outward recovers a
        # sign-honest bracket.
        width = 1e-3
        a = b = None
        for _ in range(6):
            lo, hi = _staircase_bracket(ctx, j, ceiling, rel_width=width)
            delta = max(1e-6 * (hi - lo), 1e-12 * max(abs(hi), 1.0))
            for a_try, b_try in ((lo, hi), (lo - delta, hi), (lo - delta, hi + delta)):
                ra, rb = resid(a_try), resid(b_try)
                if ra == 0.0:
                    return a_try
                if rb == 0.0:
                    return b_try
                if ra * rb < 0.0:
                    a, b = a_try, b_try
                    break
            if a is not None:
                break
            width *= 1e-2
        else:
            raise ConvergenceError("could not straddle the Dirichlet residual sign change")
    else:
        # The j-th Neumann eigenvalue lies strictly inside the plateau where
        # the node count equals j-1, and the Neumann residual changes sign
        # exactly once there.
        width = 1e-3
        for _ in range(6):
            right = _staircase_bracket(ctx, j, ceiling, rel_width=width)[0]
            if j == 1:
                left = -1.0
            else:
                left = _staircase_bracket(ctx, j - 1, ceiling, rel_width=width)[1]
            ra, rb = resid(left), resid(right)
            if ra == 0.0:
                return left
            if rb == 0.0:
                return right
            if ra * rb < 0.0:
                a, b = left, right
                break
            width *= 1e-2
        else:
            raise ConvergenceError("could not straddle the Neumann residual sign change")

    mu = brentq(resid, a, b, xtol=1e-13 * max(1.0, abs(b)), rtol=1e-14, maxiter=200)
    return float(mu)


def _uniform_samples(ctx: _RadialContext, mu: float, l: int):
    """Integrate once more and resample (T, T') on a uniform grid by cubic Hermite."""
    _, _, nodes, rescales, traj = _integrate(ctx, mu, collect=True)
    ts = np.array([p[0] for p in traj])
    Ts = np.array([p[1] for p in traj])
    Us = np.array([p[2] for p in traj])
    dUs = np.array([p[3] for p in traj])

    grid = np.linspace(0.0, ctx.R, _GRID_SAMPLES)
    idx = np.clip(np.searchsorted(ts, grid, side="right") - 1, 0, len(ts) - 2)
    tL, tRt = ts[idx], ts[idx + 1]
    w = np.where(tRt > tL, (grid - tL) / (tRt - tL), 0.0)
    dt = tRt - tL

    def hermite(yL, yR, dL, dR):
        h00 = (1 + 2 * w) * (1 - w) ** 2
        h10 = w * (1 - w) ** 2
        h01 = w * w * (3 - 2 * w)
        h11 = w * w * (w - 1)
        return h00 * yL + h01 * yR + dt * (h10 * dL + h11 * dR)

    T = hermite(Ts[idx], Ts[idx + 1], Us[idx], Us[idx + 1])
    U = hermite(Us[idx], Us[idx + 1], dUs[idx], dUs[idx + 1])
    # exact behavior at t = 0 from the series launch scale
    T[0] = 1.0 if l == 0 else 0.0
    U[0] = 1.0 if l == 1 else 0.0
    # the trajectory endpoint is exact; keep it
    T[-1], U[-1] = Ts[-1], Us[-1]
    below = grid <= ts[0]
    if l >= 2:
        T[below], U[below] = 0.0, 0.0
        T[0] = 0.0
    return grid, T, U, nodes, rescales


def _sl_weight(model: SpaceFormModel, profile: WeightProfile, t: np.ndarray) -> np.ndarray:
    """p(t) = S_kappa(t)^(n-1) exp(-phi(t)); vanishes at t = 0 for n >= 2."""
    if model.kappa == Curvature.SPHERICAL:
        s = np.sin(t)
    elif model.kappa == Curvature.EUCLIDEAN:
        s = np.asarray(t, dtype=float)
    else:
        s = np.sinh(t)
    return s ** (model.dimension - 1) * np.exp(-np.asarray(profile.phi(t), dtype=float))


def _simpson_uniform(y: np.ndarray, h: float) -> float:
    n = len(y) - 1
    if n % 2:
        # trapezoid on the last cell keeps the grid free
        return _simpson_uniform(y[:-1], h) + 0.5 * h * (y[-2] + y[-1])
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-2:2])))


def _count_interior_sign_changes(values: np.ndarray) -> int:
    # drop the endpoint sample: a Dirichlet boundary zero must not register
    v = values[:-1]
    v = v[np.abs(v) > 0.0]
    if len(v) < 2:
        return 0
    return int(np.sum(np.sign(v[1:]) != np.sign(v[:-1])))


def eigenvalue(
    model: SpaceFormModel,
    profile: WeightProfile,
    mode: RadialMode,
    radius: float,
    ceiling: float = DEFAULT_CEILING,
) -> RadialEigenpair:
    """Eigenvalue and normalized eigenfunction of the radial mode (l, j, bc)."""
    mu = _solve_mu(model, profile, mode, radius, ceiling)
    ctx = _RadialContext(model, profile, mode.l, radius)
    grid, T, U, nodes, rescales = _uniform_samples(ctx, mu, mode.l)

    p = _sl_weight(model, profile, grid)
    norm2 = _simpson_uniform(T * T * p, grid[1] - grid[0])
    if not norm2 > 0:
        raise ConvergenceError("eigenfunction has vanishing norm")
    scale = 1.0 / math.sqrt(norm2)
    T = T * scale
    U = U * scale

    amp = float(np.max(np.abs(T)))
    res_raw = T[-1] if mode.bc == BoundaryCondition.DIRICHLET else U[-1]
    residual = float(abs(res_raw) / amp)
    if residual > 1e-6:
        raise ConvergenceError(f"endpoint residual {residual:.2e} after convergence")
    counted = _count_interior_sign_changes(T)
    if counted != mode.j - 1:
        # fall back on the integrator's own count before declaring failure
        if nodes != mode.j - 1:
            raise ConvergenceError(
                f"node count {counted} does not match overtone j-1 = {mode.j - 1}"
            )
        counted = nodes
    return RadialEigenpair(
        model=model,
        profile=profile,
        mode=mode,
        radius=float(radius),
        eigenvalue=mu,
        t=grid,
        values=T,
        derivs=U,
        node_count=counted,
        residual=residual,
        rescale_events=rescales,
    )


def first_dirichlet(
    model: SpaceFormModel,
    profile: WeightProfile,
    radius: float,
    ceiling: float = DEFAULT_CEILING,
) -> RadialEigenpair:
    """lambda_1 of the ball: the (l=0, j=1) Dirichlet mode."""
    return eigenvalue(
        model, profile, RadialMode(0, 1, BoundaryCondition.DIRICHLET), radius, ceiling
    )


def first_neumann(
    model: SpaceFormModel,
    profile: WeightProfile,
    radius: float,
    ceiling: float = DEFAULT_CEILING,
) -> NeumannBallSpectrumSummary:
    """First nonzero Neumann eigenvalue of the ball and its two candidates.

    The candidates are the (l=1, j=1) and (l=0, j=2) modes; for radial
    non-increasing convex weights the (1,1) mode is the smaller one.
    """
    p11 = eigenvalue(model, profile, RadialMode(1, 1, BoundaryCondition.NEUMANN), radius, ceiling)
    p02 = eigenvalue(model, profile, RadialMode(0, 2, BoundaryCondition.NEUMANN), radius, ceiling)
    return NeumannBallSpectrumSummary(
        mu_1_1=p11.eigenvalue,
        mu_0_2=p02.eigenvalue,
        first_nonzero=min(p11.eigenvalue, p02.eigenvalue),
        ordering_holds=p11.eigenvalue < p02.eigenvalue,
        pair_1_1=p11,
        pair_0_2=p02,
    )


# ---------------------------------------------------------------------------
# independent finite-difference oracle


def _fd_single(
    model: SpaceFormModel,
    profile: WeightProfile,
    mode: RadialMode,
    radius: float,
    m: int,
) -> float:
    """Lumped P1 discretization of the Sturm-Liouville form on m intervals.

    Vertex grid t_i = i h.  The origin node carries zero Sturm-Liouville
    weight (p(0) = 0 for n >= 2), so it is eliminated exactly: for l = 0 the
    degenerate row forces u_0 = u_1 (natural condition), for l >= 1 the
    regular solution vanishes there (essential condition).
    """
    n = model.dimension
    l, j = mode.l, mode.j
    vl = float(l * (l + n - 2))
    h = radius / m
    x = np.linspace(0.0, radius, m + 1)
    xm = 0.5 * (x[:-1] + x[1:])
    p = _sl_weight(model, profile, x)
    pm = _sl_weight(model, profile, xm)

    if model.kappa == Curvature.SPHERICAL:
        s = np.sin(x)
    elif model.kappa == Curvature.EUCLIDEAN:
        s = x.copy()
    else:
        s = np.sinh(x)
    pot = np.zeros_like(x)
    if vl:
        pot[1:] = vl * p[1:] / s[1:] ** 2

    neumann = mode.bc == BoundaryCondition.NEUMANN
    last = m if neumann else m - 1
    idx = np.arange(1, last + 1)

    diag = (pm[idx - 1] + np.where(idx < m, pm[np.clip(idx, 0, m - 1)], 0.0)) / h
    mass = np.where(idx < m, h * p[idx], 0.5 * h * p[idx])
    diag += np.where(idx < m, h * pot[idx], 0.5 * h * pot[idx])
    if l == 0:
        diag[0] -= pm[0] / h  # exact elimination of the weightless origin node
    off = -pm[idx[:-1]] / h

    d = diag / mass
    e = off / np.sqrt(mass[:-1] * mass[1:])
    vals = eigh_tridiagonal(d, e, select="i", select_range=(j - 1, j - 1), eigvals_only=True)
    return float(vals[0])


def fd_oracle_eigenvalue(
    model: SpaceFormModel,
    profile: WeightProfile,
    mode: RadialMode,
    radius: float,
    gridpoints: int = 2000,
) -> float:
    """Richardson-extrapolated eigenvalue of the tridiagonal discretization.

    O(h^2) at a single grid; extrapolation over (m/2, m) removes the leading
    term.  Completely independent of the shooting route.
    """
    if gridpoints < 200:
        raise DomainError("oracle needs at least 200 gridpoints")
    _RadialContext(model, profile, mode.l, radius)  # shared domain validation
    m = int(gridpoints)
    m -= m % 2
    mu_f = _fd_single(model, profile, mode, radius, m)
    mu_c = _fd_single(model, profile, mode, radius, m // 2)
    return (4.0 * mu_f - mu_c) / 3.0


# ---------------------------------------------------------------------------
# cross-mode identities and trial profiles


def _cumulative_simpson_uniform(y: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(y)
    n = len(y)
    if n < 3:
        if n == 2:
            out[1] = 0.5 * h * (y[0] + y[1])
        return out
    out[1] = h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2])
    for i in range(2, n):
        if i % 2 == 0:
            out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i])
        else:
            out[i] = out[i - 1] + h / 12.0 * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i])
    return out


def wronskian_residual(pair_f: RadialEigenpair, pair_g: RadialEigenpair, t_eval: float) -> float:
    """Defect of the weighted Wronskian identity between two radial modes.

    For (p f')' + (alpha - sigma) p f = 0 and (p g')' + (beta - tau) p g = 0
    sharing p and regular at 0,

        p (f g' - f' g)(t) = int_0^t [alpha - beta + (tau - sigma)] p f g ds.

    Returns |lhs - rhs| at t_eval normalized by the larger magnitude either
    side attains on [0, t_eval].
    """
    if pair_f.model != pair_g.model or abs(pair_f.radius - pair_g.radius) > 1e-14:
        raise DomainError("Wronskian identity needs a shared model and radius")
    if pair_f.profile is not pair_g.profile and pair_f.profile.label != pair_g.profile.label:
        raise DomainError("Wronskian identity needs a shared weight profile")
    if not 0.0 < t_eval <= pair_f.radius + 1e-12:
        raise DomainError("evaluation point must lie in (0, R]")

    t = pair_f.t
    h = t[1] - t[0]
    p = _sl_weight(pair_f.model, pair_f.profile, t)
    f, fp = pair_f.values, pair_f.derivs
    g, gp = pair_g.values, pair_g.derivs
    lhs = p * (f * gp - fp * g)

    n = pair_f.model.dimension
    vf = pair_f.mode.l * (pair_f.mode.l + n - 2)
    vg = pair_g.mode.l * (pair_g.mode.l + n - 2)
    if pair_f.model.kappa == Curvature.SPHERICAL:
        s = np.sin(t)
    elif pair_f.model.kappa == Curvature.EUCLIDEAN:
        s = t.copy()
    else:
        s = np.sinh(t)
    integrand = np.empty_like(t)
    integrand[1:] = (
        pair_f.eigenvalue - pair_g.eigenvalue + (vg - vf) / s[1:] ** 2
    ) * p[1:] * f[1:] * g[1:]
    # the apparent 0/0 at the origin is removable; extrapolate quadratically
    integrand[0] = 3.0 * integrand[1] - 3.0 * integrand[2] + integrand[3]
    rhs = _cumulative_simpson_uniform(integrand, h)

    k = int(round(t_eval / h))
    k = min(max(k, 1), len(t) - 1)
    if abs(t[k] - t_eval) > 1e-9 * pair_f.radius:
        lhs_v = float(np.interp(t_eval, t, lhs))
        rhs_v = float(np.interp(t_eval, t, rhs))
    else:
        lhs_v, rhs_v = float(lhs[k]), float(rhs[k])
    scale = max(float(np.max(np.abs(lhs[: k + 1]))), float(np.max(np.abs(rhs[: k + 1]))), 1e-300)
    return abs(lhs_v - rhs_v) / scale


def trial_h(pair: RadialEigenpair) -> tuple[Callable, Callable]:
    """Extend a radial eigenfunction to a global trial profile.

    h(t) = T(t) for t <= R and the constant T(R) beyond; h'(t) = T'(t) inside
    and 0 beyond.  Interpolation is monotone cubic on the stored samples, so
    a monotone T stays monotone between samples.
    """
    from scipy.interpolate import PchipInterpolator

    T_int = PchipInterpolator(pair.t, pair.values, extrapolate=False)
    U_int = PchipInterpolator(pair.t, pair.derivs, extrapolate=False)
    T_end = float(pair.values[-1])
    R = pair.radius

    def h(t):
        t = np.asarray(t, dtype=float)
        inside = t <= R
        out = np.where(inside, T_int(np.clip(t, 0.0, R)), T_end)
        return float(out) if out.ndim == 0 else out

    def hp(t):
        t = np.asarray(t, dtype=float)
        inside = t <= R
        out = np.where(inside, U_int(np.clip(t, 0.0, R)), 0.0)
        return float(out) if out.ndim == 0 else out

    return h, hp
