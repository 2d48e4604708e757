"""Seeded verification suites aggregating every algebraic identity the
formulation rests on: the skew identity, the generic conservation conditions,
the free-parameter null contraction, frame equivalence, closed-form
eigenvalues, the contraction expansion, the SBP constraint and duality,
tensor/Kronecker equivalence and the semi-discrete energy identity.

Each suite reports its worst relative residual against a fixed tolerance;
``run_all`` is deterministic for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary import (
    UnitNormal,
    bc_threshold,
    boundary_matrix,
    eigenvalue_crosscheck,
    expanded_contraction,
    free_param_contraction,
    locate_sign_transition,
    rotate,
    rotated_boundary_matrix,
)
from .matrices import (
    FreeParams,
    check_general_skew_conditions,
    coeff_atilde,
    coeff_btilde,
    skew_identity_residual,
)
from .sbp import build_sbp, operators_for_grid, TensorApplicator, verify_sbp_constraint
from .solver import SchemeConfig, discrete_energy, energy_rate_residual
from .state import Field, GasModel, Grid2D

GAMMAS = (1.4, math.sqrt(2.0), 5.0 / 3.0)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    note: str = ""


def _random_phi(rng, n=1):
    out = np.empty((n, 4))
    out[:, 0] = rng.uniform(0.5, 2.0, n)
    out[:, 1] = rng.uniform(-2.0, 2.0, n)
    out[:, 2] = rng.uniform(-2.0, 2.0, n)
    out[:, 3] = rng.uniform(0.5, 2.0, n)
    return out


def _random_field(rng, grid):
    data = np.empty((4, grid.nx, grid.ny))
    data[0] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    data[1] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[2] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[3] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    return Field(grid, data)


def _random_normal(rng) -> UnitNormal:
    return UnitNormal.from_angle(rng.uniform(0.0, 2 * math.pi))


def suite_skew_identity(seed: int, direction: str, samples: int = 1000) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gamma in GAMMAS:
        gas = GasModel(gamma, float(rng.uniform(0.5, 2.0)))
        phis = _random_phi(rng, samples)
        dphis = rng.uniform(-3.0, 3.0, (samples, 4))
        fps = rng.uniform(-10.0, 10.0, (samples, 4))
        for phi, dphi, fpv in zip(phis, dphis, fps):
            fp = FreeParams(*fpv)
            r = skew_identity_residual(phi, dphi, gas, fp, direction)
            scale = max(
                1.0,
                float(np.abs(phi).max() * np.abs(dphi).max()
                      * (1.0 + np.abs(fpv).max())),
            )
            worst = max(worst, float(np.abs(r).max()) / scale)
    return SuiteResult(f"eq10_skew_identity_{direction}", worst, 1e-12, worst <= 1e-12)


def suite_general_skew(seed: int, samples: int = 200) -> SuiteResult:
    rng = np.random.default_rng(seed)
    gas = GasModel(1.4)
    states = list(_random_phi(rng, samples))
    rep = check_general_skew_conditions(
        [lambda s: coeff_atilde(s, gas) / 2, lambda s: coeff_btilde(s, gas) / 2],
        [lambda s: coeff_atilde(s, gas).T / 2, lambda s: coeff_btilde(s, gas).T / 2],
        None,
        states,
    )
    worst = max(rep.max_transpose_violation, rep.max_symmetric_c) / max(rep.scale, 1.0)
    return SuiteResult("prop1_general_skew", worst, 1e-13, rep.passed)


def suite_free_param_null(seed: int, samples: int = 10000) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    phis = _random_phi(rng, samples)
    fps = rng.uniform(-100.0, 100.0, (samples, 4))
    for phi, fpv in zip(phis, fps):
        n = _random_normal(rng)
        val = free_param_contraction(phi, n, FreeParams(*fpv))
        scale = max(1.0, float(np.abs(fpv).max()) * float(np.abs(phi).max()) ** 3)
        worst = max(worst, abs(val) / scale)
    return SuiteResult("eq20_free_param_null", worst, 1e-11, worst <= 1e-11)


def suite_rotation_equivalence(seed: int, samples: int = 1000) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gamma in GAMMAS:
        gas = GasModel(gamma)
        for phi in _random_phi(rng, samples // len(GAMMAS)):
            n = _random_normal(rng)
            plain = phi @ boundary_matrix(phi, n, gas) @ phi
            pr = rotate(phi, n).as_array()
            rot = pr @ rotated_boundary_matrix(phi, n, gas) @ pr
            scale = max(abs(plain), abs(rot), float(np.abs(phi).max() ** 3))
            worst = max(worst, abs(plain - rot) / scale)
    return SuiteResult("eq22_rotation_equivalence", worst, 1e-13, worst <= 1e-13)


def suite_eigenvalues(seed: int, samples: int = 1000) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    notes = []
    for gamma in (1.4, 5.0 / 3.0):
        gas = GasModel(gamma)
        for phi in _random_phi(rng, samples // 2):
            n = _random_normal(rng)
            dist = eigenvalue_crosscheck(phi, n, gas)
            scale = max(1.0, float(np.abs(phi).max()) ** 1)
            worst = max(worst, dist / scale)
    b14 = bc_threshold(GasModel(1.4))
    db14 = abs(b14 - 0.9759000729485332)
    db_sqrt2 = abs(bc_threshold(GasModel(math.sqrt(2.0))) - 1.0)
    trans = locate_sign_transition(GasModel(1.4), 0.9, 1.05)
    dtrans = abs(trans - b14)
    notes.append(f"b(1.4)={b14:.6f} b(sqrt2)err={db_sqrt2:.1e} transition_err={dtrans:.1e}")
    ok = worst <= 1e-10 and db14 <= 1e-4 and db_sqrt2 <= 1e-9 and dtrans <= 1e-6
    return SuiteResult("eq23_eigenvalues", worst, 1e-10, ok, " ".join(notes))


def suite_contraction(seed: int, samples: int = 1000) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gamma in GAMMAS:
        gas = GasModel(gamma, float(rng.uniform(0.5, 2.0)))
        for phi in _random_phi(rng, samples // len(GAMMAS)):
            n = _random_normal(rng)
            lhs = phi @ boundary_matrix(phi, n, gas) @ phi
            rhs = expanded_contraction(phi, n, gas)
            un = (n.nx * phi[1] + n.ny * phi[2]) / phi[0]
            scale = float(np.abs(phi).max() ** 2) * (abs(un) + abs(phi[3] / phi[0]) + 1.0)
            worst = max(worst, abs(lhs - rhs) / scale)
        # wall state: velocity tangential to n, u_n = 0 exactly
        for phi in _random_phi(rng, 50):
            theta = rng.uniform(0, 2 * math.pi)
            n = UnitNormal.from_angle(theta)
            s = rng.uniform(-2.0, 2.0)
            phi[1] = -s * n.ny
            phi[2] = s * n.nx
            val = phi @ boundary_matrix(phi, n, gas) @ phi
            scale = float(np.abs(phi).max() ** 2) * (abs(s) + 1.0)
            worst = max(worst, abs(val) / scale)
    return SuiteResult("eq24_contraction", worst, 1e-13, worst <= 1e-13)


_MIN_SIZES = {2: 3, 4: 12}


def suite_sbp_constraint(seed: int) -> SuiteResult:
    worst = 0.0
    for order in (2, 4):
        for topology in ("bounded", "periodic"):
            for n in (_MIN_SIZES[order], 21, 34):
                op = build_sbp(order, n, 1.0 / n, topology)
                worst = max(worst, verify_sbp_constraint(op))
    return SuiteResult("sbp_constraint", worst, 1e-15, worst <= 1e-15)


def suite_sbp_duality(seed: int, samples: int = 20) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for order in (2, 4):
        for tx in ("bounded", "periodic"):
            for ty in ("bounded", "periodic"):
                grid = Grid2D(14, 17, topology_x=tx, topology_y=ty)
                opx, opy = operators_for_grid(grid, order)
                app = TensorApplicator(grid, opx, opy)
                for _ in range(samples):
                    u = rng.standard_normal((grid.nx, grid.ny))
                    v = rng.standard_normal((grid.nx, grid.ny))
                    lhs = float(np.sum(app.w2d * u * app.apply_dx_array(v)))
                    lhs += float(np.sum(app.w2d * app.apply_dx_array(u) * v))
                    bterm = 0.0
                    if tx == "bounded":
                        bterm = float(app.wy @ (u[-1] * v[-1] - u[0] * v[0]))
                    scale = max(
                        abs(lhs), abs(bterm),
                        float(np.abs(u).max() * np.abs(v).max()),
                    )
                    worst = max(worst, abs(lhs - bterm) / scale)
                    lhs = float(np.sum(app.w2d * u * app.apply_dy_array(v)))
                    lhs += float(np.sum(app.w2d * app.apply_dy_array(u) * v))
                    bterm = 0.0
                    if ty == "bounded":
                        bterm = float(app.wx @ (u[:, -1] * v[:, -1] - u[:, 0] * v[:, 0]))
                    scale = max(
                        abs(lhs), abs(bterm),
                        float(np.abs(u).max() * np.abs(v).max()),
                    )
                    worst = max(worst, abs(lhs - bterm) / scale)
    return SuiteResult("eq32_sbp_duality", worst, 1e-13, worst <= 1e-13)


def suite_tensor_kron(seed: int) -> SuiteResult:
    """Banded tensor application vs a dense Kronecker matvec, scaled by the
    operator row sum so the tolerance is a plain multiple of eps."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    tol = 4 * np.finfo(float).eps
    for order, tx, ty in ((2, "bounded", "periodic"), (2, "periodic", "bounded")):
        grid = Grid2D(6, 7, topology_x=tx, topology_y=ty)
        opx, opy = operators_for_grid(grid, order)
        app = TensorApplicator(grid, opx, opy)
        f = _random_field(rng, grid)
        dense_x = np.kron(np.eye(4), np.kron(opx.dense_d(), np.eye(grid.ny)))
        dense_y = np.kron(np.eye(4), np.kron(np.eye(grid.nx), opy.dense_d()))
        got_x = app.apply_dx(f).data.ravel()
        got_y = app.apply_dy(f).data.ravel()
        scale_x = float(np.abs(opx.dense_d()).sum(axis=1).max() * np.abs(f.data).max())
        scale_y = float(np.abs(opy.dense_d()).sum(axis=1).max() * np.abs(f.data).max())
        worst = max(worst, float(np.abs(got_x - dense_x @ f.data.ravel()).max()) / scale_x)
        worst = max(worst, float(np.abs(got_y - dense_y @ f.data.ravel()).max()) / scale_y)
    return SuiteResult("tensor_kron_equivalence", worst, tol, worst <= tol)


def suite_energy_rate(seed: int, fields: int = 10) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = [
        Grid2D(16, 20, topology_x="bounded", topology_y="bounded"),
        Grid2D(20, 20, topology_x="periodic", topology_y="periodic"),
        Grid2D(16, 20, topology_x="bounded", topology_y="periodic"),
    ]
    for grid in cases:
        for order in (2, 4):
            cfg = SchemeConfig(grid=grid, gas=GasModel(1.4), order=order)
            for _ in range(fields):
                f = _random_field(rng, grid)
                res = energy_rate_residual(f, cfg)
                worst = max(worst, res / discrete_energy(f, cfg))
    return SuiteResult("eq35_energy_rate", worst, 1e-11, worst <= 1e-11)


SUITES = (
    ("eq10_skew_identity_x", lambda seed: suite_skew_identity(seed, "x")),
    ("eq10_skew_identity_y", lambda seed: suite_skew_identity(seed, "y")),
    ("prop1_general_skew", suite_general_skew),
    ("eq20_free_param_null", suite_free_param_null),
    ("eq22_rotation_equivalence", suite_rotation_equivalence),
    ("eq23_eigenvalues", suite_eigenvalues),
    ("eq24_contraction", suite_contraction),
    ("sbp_constraint", suite_sbp_constraint),
    ("eq32_sbp_duality", suite_sbp_duality),
    ("tensor_kron_equivalence", suite_tensor_kron),
    ("eq35_energy_rate", suite_energy_rate),
)

SUITE_NAMES = tuple(name for name, _ in SUITES)


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [fn(seed) for _, fn in SUITES]
