import math

import numpy as np
import pytest

from skeweuler import (
    FreeParams,
    GasModel,
    NormalizationError,
    UnitNormal,
    bc_threshold,
    boundary_matrix,
    closed_form_eigenvalues,
    coeff_atilde,
    coeff_btilde,
    eigenvalue_crosscheck,
    expanded_contraction,
    free_param_contraction,
    norm_matrix,
    required_bc_count,
    rotate,
    rotated_boundary_matrix,
    wall_sat_penalty,
)
from skeweuler.boundary import locate_sign_transition, sweep_eigenvalues

from helpers import random_phi

GAS = GasModel(1.4, 1.0)
GAMMAS = (1.4, np.sqrt(2.0), 5.0 / 3.0)


def test_unit_normal_validation():
    UnitNormal(1.0, 0.0)
    UnitNormal.from_angle(2.3)
    with pytest.raises(NormalizationError):
        UnitNormal(1.0, 0.5)


def test_rotate_axis_aligned():
    phi = np.array([2.0, 3.0, 5.0, 0.7])
    u, v = 1.5, 2.5
    r = rotate(phi, UnitNormal(1.0, 0.0))
    assert (r.phi1_un / r.phi1, r.phi1_ut / r.phi1) == (u, v)
    r = rotate(phi, UnitNormal(0.0, 1.0))
    assert (r.phi1_un / r.phi1, r.phi1_ut / r.phi1) == (v, -u)


def test_rotate_isometry():
    rng = np.random.default_rng(0)
    for _ in range(200):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        r = rotate(phi, n)
        lhs = r.phi1_un**2 + r.phi1_ut**2
        rhs = phi[1] ** 2 + phi[2] ** 2
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, rhs)


def test_boundary_matrix_rest_state():
    phi = np.array([2.0, 0.0, 0.0, 1.5])
    n = UnitNormal.from_angle(1.1)
    m = boundary_matrix(phi, n, GAS)
    np.testing.assert_array_equal(np.diag(m), np.zeros(4))
    c = (GAS.gamma - 1) * phi[3] / phi[0]
    assert m[1, 3] == pytest.approx(n.nx * c)
    assert m[3, 1] == pytest.approx(n.nx * c)
    assert m[2, 3] == pytest.approx(n.ny * c)
    mask = np.ones((4, 4), bool)
    mask[[1, 3, 2, 3], [3, 1, 3, 2]] = False
    assert np.abs(m[mask]).max() == 0.0


def test_boundary_matrix_is_symmetrized_tilde_sum():
    rng = np.random.default_rng(1)
    for _ in range(100):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        m = boundary_matrix(phi, n, GAS)
        raw = n.nx * coeff_atilde(phi, GAS) + n.ny * coeff_btilde(phi, GAS)
        sym = (raw + raw.T) / 2
        assert np.abs(m - sym).max() <= 1e-14 * max(1.0, np.abs(sym).max())
        # identical quadratic forms
        q1 = phi @ m @ phi
        q2 = phi @ raw @ phi
        assert abs(q1 - q2) <= 1e-13 * max(1.0, abs(q1))


def test_free_param_contraction_zero():
    rng = np.random.default_rng(2)
    phi = random_phi(rng)
    n = UnitNormal(1.0, 0.0)
    assert free_param_contraction(phi, n, FreeParams(1, 1, 1, 1)) == pytest.approx(
        0.0, abs=1e-13 * np.abs(phi).max() ** 3
    )
    assert free_param_contraction(phi, n, FreeParams()) == 0.0


def test_free_param_contraction_fuzz():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(10_000):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        fp = FreeParams(*rng.uniform(-100, 100, 4))
        val = free_param_contraction(phi, n, fp)
        scale = max(1.0, max(abs(v) for v in fp.as_tuple()) * np.abs(phi).max() ** 3)
        worst = max(worst, abs(val) / scale)
    assert worst <= 1e-11


def test_free_param_contraction_matches_matrix_difference():
    # independent route: quadratic form of (At(fp) - At(0)) etc.
    rng = np.random.default_rng(4)
    for _ in range(50):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        fp = FreeParams(*rng.uniform(-10, 10, 4))
        diff = n.nx * (coeff_atilde(phi, GAS, fp) - coeff_atilde(phi, GAS)) \
            + n.ny * (coeff_btilde(phi, GAS, fp) - coeff_btilde(phi, GAS))
        ref = float(phi @ diff @ phi)
        got = free_param_contraction(phi, n, fp)
        assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref), np.abs(diff).max())


def test_expanded_contraction_values():
    phi = np.array([1.0, 1.0, 0.0, 1.0])
    val = expanded_contraction(phi, UnitNormal(1.0, 0.0), GAS)
    assert val == pytest.approx(2.6, rel=1e-14)
    # wall: tangential velocity only
    phi_w = np.array([1.3, 0.0, 1.7, 0.8])
    assert expanded_contraction(phi_w, UnitNormal(1.0, 0.0), GAS) == 0.0


def test_contraction_equality_fuzz():
    rng = np.random.default_rng(5)
    for gamma in GAMMAS:
        gas = GasModel(gamma, float(rng.uniform(0.5, 2)))
        for _ in range(333):
            phi = random_phi(rng)
            n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
            lhs = float(phi @ boundary_matrix(phi, n, gas) @ phi)
            rhs = expanded_contraction(phi, n, gas)
            un = (n.nx * phi[1] + n.ny * phi[2]) / phi[0]
            scale = np.abs(phi).max() ** 2 * (abs(un) + 1.0) * gas.gamma
            assert abs(lhs - rhs) <= 1e-13 * scale


def test_rotated_frame_equality():
    rng = np.random.default_rng(6)
    for _ in range(300):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        pr = rotate(phi, n).as_array()
        lhs = float(phi @ boundary_matrix(phi, n, GAS) @ phi)
        rhs = float(pr @ rotated_boundary_matrix(phi, n, GAS) @ pr)
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs), np.abs(phi).max() ** 3)


def test_bc_threshold_constants():
    assert bc_threshold(GasModel(1.4)) == pytest.approx(0.97590, abs=1e-4)
    assert abs(bc_threshold(GasModel(math.sqrt(2.0))) - 1.0) <= 1e-9


def test_closed_form_eigenvalues_wall_case():
    lams = closed_form_eigenvalues(0.0, 1.0, GAS)
    g = GAS.gamma
    assert lams[0] == 0.0 and lams[1] == 0.0
    ref = (g - 1) / math.sqrt(g)
    assert lams[2] == pytest.approx(ref, rel=1e-14)
    assert lams[3] == pytest.approx(-ref, rel=1e-14)
    assert lams[2] == pytest.approx(0.3381, abs=1e-4)


def test_closed_form_eigenvalues_threshold_degenerate():
    b = bc_threshold(GAS)
    c = 1.3
    lams = closed_form_eigenvalues(b * c, c, GAS)
    scale = max(abs(v) for v in lams.real)
    assert abs(lams[3]) <= 1e-13 * scale


def test_eigenvalue_crosscheck_fuzz():
    rng = np.random.default_rng(7)
    for gamma in (1.4, 5 / 3):
        gas = GasModel(gamma)
        for _ in range(500):
            phi = random_phi(rng)
            n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
            dist = eigenvalue_crosscheck(phi, n, gas)
            scale = max(1.0, np.abs(phi).max())
            assert dist <= 1e-10 * scale


def test_alpha2_enters_only_lambda1():
    lams_a = closed_form_eigenvalues(0.7, 1.0, GasModel(1.4, 1.0))
    lams_b = closed_form_eigenvalues(0.7, 1.0, GasModel(1.4, 3.0))
    assert lams_b[0] == pytest.approx(3 * lams_a[0])
    np.testing.assert_array_equal(lams_a[1:], lams_b[1:])


def test_required_bc_count_regimes():
    c = 1.0
    b = bc_threshold(GAS)
    # supersonic outflow
    rep = required_bc_count(2 * c, c, GAS)
    assert rep.eig_bc_count == 0 and rep.nonlinear_bc_needed == 0
    # subsonic (below threshold) outflow: eigenvalues say 1, contraction says 0
    rep = required_bc_count(0.5 * c, c, GAS)
    assert rep.eig_bc_count == 1 and rep.nonlinear_bc_needed == 0
    # fast inflow
    rep = required_bc_count(-2 * c, c, GAS)
    assert rep.eig_bc_count == 4 and rep.nonlinear_bc_needed == 4
    # slow inflow
    rep = required_bc_count(-0.5 * c, c, GAS)
    assert rep.eig_bc_count == 3 and rep.nonlinear_bc_needed == 3
    # just around the threshold
    assert required_bc_count((b - 1e-6) * c, c, GAS).eig_bc_count == 1
    assert required_bc_count((b + 1e-6) * c, c, GAS).eig_bc_count == 0


def test_sign_transition_located_at_threshold():
    for gamma in (1.4, math.sqrt(2.0)):
        gas = GasModel(gamma)
        b = bc_threshold(gas)
        loc = locate_sign_transition(gas, 0.9, 1.05)
        assert abs(loc - b) <= 1e-6


def test_sweep_rows_structure():
    rows = sweep_eigenvalues(GAS, 0.9, 1.05, 16)
    assert len(rows) == 16
    counts = [r["neg_count"] for r in rows]
    assert counts[0] == 1 and counts[-1] == 0
    assert sorted(counts, reverse=True) == counts  # single transition


def test_wall_penalty_zero_when_satisfied():
    phi = np.array([1.2, 0.0, 1.4, 0.9])  # u_n = 0 for n = (1, 0)
    pen = wall_sat_penalty(phi, UnitNormal(1.0, 0.0), GAS, sigma=1.0)
    np.testing.assert_array_equal(pen, np.zeros(4))


def test_wall_penalty_sigma_zero():
    rng = np.random.default_rng(8)
    phi = random_phi(rng)
    pen = wall_sat_penalty(phi, UnitNormal(0.0, -1.0), GAS, sigma=0.0)
    np.testing.assert_array_equal(pen, np.zeros(4))


def test_wall_penalty_energy_contribution_nonpositive():
    # 2 phi^T P pen = -2 sigma s_loc (phi1 u_n)^2 <= 0 for sigma >= 0
    rng = np.random.default_rng(9)
    pd = norm_matrix(GAS)
    for _ in range(200):
        phi = random_phi(rng)
        n = UnitNormal.from_angle(rng.uniform(0, 2 * math.pi))
        sigma = rng.uniform(0.0, 5.0)
        pen = wall_sat_penalty(phi, n, GAS, sigma)
        contrib = 2 * float(phi @ (pd * pen))
        w = n.nx * phi[1] + n.ny * phi[2]
        s_loc = sigma * (GAS.gamma - 1) * abs(phi[3] / phi[0])
        assert contrib <= 1e-12
        assert contrib == pytest.approx(-2 * s_loc * w * w, rel=1e-12, abs=1e-13)
