from __future__ import annotations

import math

import numpy as np
import pytest

from wittenlap import (
    BoundaryCondition,
    ConvergenceError,
    DomainError,
    RadialMode,
    builtin_profile,
    eigenvalue,
    fd_oracle_eigenvalue,
    first_dirichlet,
    first_neumann,
    shoot,
    space_form,
    trial_h,
    wronskian_residual,
)

from oracles import (
    DISK_LAMBDA_0_2,
    DISK_LAMBDA_1,
    DISK_LAMBDA_2,
    DISK_MU_0_2,
    DISK_MU_1_1,
    HEMI_QUARTER_LAMBDA_0_2,
    HEMI_QUARTER_LAMBDA_1,
)

ZERO = builtin_profile("zero")
EUC2 = space_form(0, 2)
EUC3 = space_form(0, 3)
HYP2 = space_form(-1, 2)
SPH2 = space_form(1, 2)

D = BoundaryCondition.DIRICHLET
N = BoundaryCondition.NEUMANN


# ---------------------------------------------------------------- shooting core


def test_shoot_at_disk_eigenvalue():
    res = shoot(EUC2, ZERO, RadialMode(0, 1, D), DISK_LAMBDA_1, 1.0)
    assert abs(res.residual) < 1e-9
    assert res.node_count == 0


def test_shoot_sign_pattern_around_eigenvalue():
    lo = shoot(EUC2, ZERO, RadialMode(0, 1, D), DISK_LAMBDA_1 - 0.5, 1.0)
    hi = shoot(EUC2, ZERO, RadialMode(0, 1, D), DISK_LAMBDA_1 + 0.5, 1.0)
    assert lo.residual > 0 and lo.node_count == 0
    assert hi.residual < 0 and hi.node_count == 1


def test_node_count_staircase():
    # between the k-th and (k+1)-th eigenvalues the solution has k interior zeros
    mode = RadialMode(0, 1, D)
    mid_12 = 0.5 * (DISK_LAMBDA_1 + DISK_LAMBDA_0_2)
    assert shoot(EUC2, ZERO, mode, mid_12, 1.0).node_count == 1
    assert shoot(EUC2, ZERO, mode, DISK_LAMBDA_0_2 + 5.0, 1.0).node_count == 2


def test_mode_validation():
    with pytest.raises(DomainError):
        RadialMode(-1, 1, D)
    with pytest.raises(DomainError):
        RadialMode(0, 0, D)
    assert RadialMode.parse("1,2", "neumann").bc is N


# ------------------------------------------------------- frozen Bessel oracles


def test_disk_dirichlet_fundamental():
    pair = eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0)
    assert pair.eigenvalue == pytest.approx(DISK_LAMBDA_1, rel=1e-10)
    assert pair.node_count == 0


def test_disk_dirichlet_l1():
    pair = eigenvalue(EUC2, ZERO, RadialMode(1, 1, D), 1.0)
    assert pair.eigenvalue == pytest.approx(DISK_LAMBDA_2, rel=1e-10)


def test_disk_dirichlet_second_radial():
    pair = eigenvalue(EUC2, ZERO, RadialMode(0, 2, D), 1.0)
    assert pair.eigenvalue == pytest.approx(DISK_LAMBDA_0_2, rel=1e-10)
    assert pair.node_count == 1


def test_disk_neumann_pair():
    mu11 = eigenvalue(EUC2, ZERO, RadialMode(1, 1, N), 1.0).eigenvalue
    mu02 = eigenvalue(EUC2, ZERO, RadialMode(0, 2, N), 1.0).eigenvalue
    assert mu11 == pytest.approx(DISK_MU_1_1, rel=1e-10)
    assert mu02 == pytest.approx(DISK_MU_0_2, rel=1e-10)


def test_disk_neumann_trivial_mode():
    # j=1, l=0 Neumann is the constant, eigenvalue 0
    pair = eigenvalue(EUC2, ZERO, RadialMode(0, 1, N), 1.0)
    assert abs(pair.eigenvalue) < 1e-9


def test_scaling_law():
    # lambda(R) = lambda(1)/R^2 for the unweighted Euclidean ball
    for R in (0.5, 2.0):
        pair = eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), R)
        assert pair.eigenvalue == pytest.approx(DISK_LAMBDA_1 / R**2, rel=1e-9)


def test_euclidean_3ball_closed_form():
    # sin(pi t)/t vanishes at t=1: lambda_1 = pi^2, and mu of l=1 solves
    # tan x = x/(1-x^2) with x = sqrt(mu), root 2.081575977818101
    pair = eigenvalue(EUC3, ZERO, RadialMode(0, 1, D), 1.0)
    assert pair.eigenvalue == pytest.approx(math.pi**2, rel=1e-10)
    mu = eigenvalue(EUC3, ZERO, RadialMode(1, 1, N), 1.0).eigenvalue
    assert mu == pytest.approx(2.081575977818101**2, rel=1e-9)


def test_hemisphere_log_cos_legendre_cap():
    # e^{-phi} = cos t on the hemisphere: x = cos 2t turns the radial l=0
    # problem into Legendre's equation, so the quarter cap has Dirichlet
    # eigenvalues 4 nu (nu+1) at the zeros of P_nu(0)
    w = builtin_profile("log_cos")
    pair = eigenvalue(SPH2, w, RadialMode(0, 1, D), math.pi / 4)
    assert pair.eigenvalue == pytest.approx(HEMI_QUARTER_LAMBDA_1, rel=1e-9)
    assert pair.node_count == 0
    pair2 = eigenvalue(SPH2, w, RadialMode(0, 2, D), math.pi / 4)
    assert pair2.eigenvalue == pytest.approx(HEMI_QUARTER_LAMBDA_0_2, rel=1e-9)
    assert pair2.node_count == 1


def test_hemisphere_log_cos_dual_route():
    w = builtin_profile("log_cos")
    mode = RadialMode(1, 1, N)
    mu = eigenvalue(SPH2, w, mode, 1.2).eigenvalue
    fd = fd_oracle_eigenvalue(SPH2, w, mode, 1.2, gridpoints=2000)
    assert fd == pytest.approx(mu, rel=1e-7)


def test_normalization_and_samples():
    pair = eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0)
    # endpoint hits zero, profile starts at T(0)=1 scaled by the L2 norm
    assert pair.values[-1] == pytest.approx(0.0, abs=1e-8)
    assert pair.t[0] == 0.0 and pair.t[-1] == 1.0
    p = pair.t * np.exp(0.0)
    norm = np.trapezoid(pair.values**2 * p, pair.t)
    assert norm == pytest.approx(1.0, rel=1e-6)


# ------------------------------------------------- finite difference cross-check


@pytest.mark.parametrize("kappa", [-1, 0, 1])
@pytest.mark.parametrize("mode", [RadialMode(0, 1, D), RadialMode(1, 1, N)])
def test_shooting_vs_fd_oracle(kappa, mode):
    m = space_form(kappa, 2)
    w = builtin_profile("quad_neg", 0.3)
    R = 1.0
    mu_shoot = eigenvalue(m, w, mode, R).eigenvalue
    mu_fd = fd_oracle_eigenvalue(m, w, mode, R, gridpoints=2000)
    assert mu_fd == pytest.approx(mu_shoot, rel=1e-7)


def test_fd_oracle_matches_bessel_directly():
    # the oracle alone, no shooting involved
    mu = fd_oracle_eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0, gridpoints=4000)
    assert mu == pytest.approx(DISK_LAMBDA_1, rel=1e-8)


def test_fd_oracle_grid_guard():
    with pytest.raises(DomainError):
        fd_oracle_eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0, gridpoints=50)


def test_dual_route_grid():
    # moderate sweep across curvature, weight, dimension and mode
    modes = [RadialMode(0, 1, D), RadialMode(0, 2, N)]
    for kappa in (-1, 0, 1):
        for n in (2, 3):
            m = space_form(kappa, n)
            for w in (ZERO, builtin_profile("exp_dec", 0.4)):
                for mode in modes:
                    mu_s = eigenvalue(m, w, mode, 0.8).eigenvalue
                    mu_f = fd_oracle_eigenvalue(m, w, mode, 0.8, gridpoints=1600)
                    assert mu_f == pytest.approx(mu_s, rel=1e-6), (kappa, n, w.label, mode)


# -------------------------------------------------------------- spectral summary


def test_first_neumann_ordering_disk():
    summ = first_neumann(EUC2, ZERO, 1.0)
    assert summ.mu_1_1 == pytest.approx(DISK_MU_1_1, rel=1e-10)
    assert summ.mu_0_2 == pytest.approx(DISK_MU_0_2, rel=1e-10)
    assert summ.first_nonzero == pytest.approx(DISK_MU_1_1, rel=1e-10)
    assert summ.ordering_holds


def test_first_dirichlet_convenience():
    pair = first_dirichlet(EUC2, ZERO, 1.0)
    assert pair.eigenvalue == pytest.approx(DISK_LAMBDA_1, rel=1e-10)
    assert pair.mode.l == 0 and pair.mode.j == 1


@pytest.mark.parametrize("kappa,wname,param", [(-1, "quad_neg", 0.5), (0, "exp_dec", 0.6)])
def test_neumann_ordering_for_admissible_weights(kappa, wname, param):
    m = space_form(kappa, 2)
    w = builtin_profile(wname, param)
    summ = first_neumann(m, w, 1.0)
    assert summ.ordering_holds
    assert summ.mu_1_1 < summ.mu_0_2


# ------------------------------------------------------------ derived identities


def test_wronskian_identity_same_l_different_bc():
    f = eigenvalue(EUC2, ZERO, RadialMode(1, 1, D), 1.0)
    g = eigenvalue(EUC2, ZERO, RadialMode(1, 1, N), 1.0)
    for t_eval in (0.3, 0.7, 1.0):
        assert wronskian_residual(f, g, t_eval) < 1e-7


def test_wronskian_identity_cross_l():
    m = space_form(-1, 2)
    w = builtin_profile("quad_neg", 0.4)
    f = eigenvalue(m, w, RadialMode(0, 2, N), 1.0)
    g = eigenvalue(m, w, RadialMode(1, 1, N), 1.0)
    assert wronskian_residual(f, g, 1.0) < 1e-7


def test_wronskian_self_pair_vanishes():
    f = eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0)
    assert wronskian_residual(f, f, 0.8) == 0.0


def test_wronskian_rejects_mismatched_pairs():
    f = eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0)
    g = eigenvalue(HYP2, ZERO, RadialMode(0, 1, D), 1.0)
    with pytest.raises(DomainError):
        wronskian_residual(f, g, 0.5)


def test_trial_h_plateau_and_monotonicity():
    pair = eigenvalue(EUC2, ZERO, RadialMode(1, 1, N), 1.0)
    h, hp = trial_h(pair)
    ts = np.linspace(0.0, 1.5, 200)
    vals = h(ts)
    # constant continuation past the ball radius
    outside = ts > 1.0
    assert np.allclose(vals[outside], h(1.0))
    assert np.allclose(hp(ts[outside]), 0.0)
    # nondecreasing on the ball for the unweighted disk fundamental mode
    inside = vals[~outside]
    assert np.all(np.diff(inside) > -1e-10)
    assert h(0.0) == pytest.approx(0.0, abs=1e-12)


def test_trial_h_q_profile_nonincreasing():
    # q = h'^2 + (n-1) h^2 / s(t)^2 decreases radially for the disk free mode
    pair = eigenvalue(EUC2, ZERO, RadialMode(1, 1, N), 1.0)
    h, hp = trial_h(pair)
    ts = np.linspace(1e-3, 1.0, 400)
    q = hp(ts) ** 2 + h(ts) ** 2 / ts**2
    assert np.all(np.diff(q) < 1e-8)


# ----------------------------------------------------------------- failure modes


def test_ceiling_raises():
    with pytest.raises(ConvergenceError):
        eigenvalue(EUC2, ZERO, RadialMode(0, 1, D), 1.0, ceiling=2.0)


def test_hemisphere_domain_guard():
    w = builtin_profile("log_cos", 1.0)
    with pytest.raises(DomainError):
        eigenvalue(SPH2, w, RadialMode(0, 1, D), 2.0)
