"""Boundary machinery: normal/tangential rotation, contraction matrices,
closed-form eigenvalues, boundary-condition-count regimes and the weak wall
penalty.

The boundary energy rate is the quadratic form phi^T (n_x At + n_y Bt) phi.
Its symmetric part (the only part a quadratic form sees) expands to

    u_n * (alpha2 phi1^2 + (g-1)/2 (phi2^2 + phi3^2) + g phi4^2),

so no boundary condition is needed wherever u_n >= 0, and u_n = 0 is the
correct wall condition. Counting eigenvalue signs of the rotated matrix
instead places the regime change at the normal Mach number

    b = sqrt(2 (g-1) / (g (2-g))),

which is below 1 for g = 1.4 and exactly 1 for g = sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NormalizationError, VacuumStateError
from .matrices import FreeParams, ZERO_PARAMS, norm_matrix
from .state import GasModel, as_phi_array


@dataclass(frozen=True)
class UnitNormal:
    """Outward unit normal (nx, ny)."""

    nx: float
    ny: float

    def __post_init__(self):
        if abs(self.nx * self.nx + self.ny * self.ny - 1.0) > 1e-14:
            raise NormalizationError(
                f"({self.nx}, {self.ny}) is not a unit vector"
            )

    @staticmethod
    def from_angle(theta: float) -> "UnitNormal":
        return UnitNormal(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class RotatedState:
    """State in the boundary frame: (phi1, phi1*u_n, phi1*u_t, phi4)."""

    phi1: float
    phi1_un: float
    phi1_ut: float
    phi4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi1_un, self.phi1_ut, self.phi4])


def rotate(phi, n: UnitNormal) -> RotatedState:
    """Rotate velocities to normal (u_n = nx u + ny v) and tangential
    (u_t = -ny u + nx v) components."""
    p1, p2, p3, p4 = as_phi_array(phi)
    if p1 == 0.0:
        raise VacuumStateError("phi1 = 0: velocities undefined")
    return RotatedState(p1, n.nx * p2 + n.ny * p3, -n.ny * p2 + n.nx * p3, p4)


def boundary_matrix(phi, n: UnitNormal, gas: GasModel) -> np.ndarray:
    """Symmetric part of n_x At + n_y Bt at fp = 0 (equal as a quadratic form)."""
    p1, p2, p3, p4 = as_phi_array(phi)
    if p1 == 0.0:
        raise VacuumStateError("phi1 = 0: boundary matrix undefined")
    g = gas.gamma
    b2 = gas.beta2
    un = (n.nx * p2 + n.ny * p3) / p1
    r = p4 / p1
    cx = n.nx * (g - 1) * r
    cy = n.ny * (g - 1) * r
    return np.array(
        [
            [gas.alpha2 * un, 0.0, 0.0, 0.0],
            [0.0, b2 * un, 0.0, cx],
            [0.0, 0.0, b2 * un, cy],
            [0.0, cx, cy, (2 - g) * un],
        ]
    )


def rotated_boundary_matrix(phi, n: UnitNormal, gas: GasModel) -> np.ndarray:
    """Boundary contraction matrix in the normal/tangential frame."""
    p1, p2, p3, p4 = as_phi_array(phi)
    if p1 == 0.0:
        raise VacuumStateError("phi1 = 0: boundary matrix undefined")
    g = gas.gamma
    b2 = gas.beta2
    un = (n.nx * p2 + n.ny * p3) / p1
    c = (g - 1) * p4 / p1
    return np.array(
        [
            [gas.alpha2 * un, 0.0, 0.0, 0.0],
            [0.0, b2 * un, 0.0, c],
            [0.0, 0.0, b2 * un, 0.0],
            [0.0, c, 0.0, (2 - g) * un],
        ]
    )


def free_param_contraction(phi, n: UnitNormal, fp: FreeParams) -> float:
    """Quadratic form of the fp-dependent part of n_x At + n_y Bt; identically zero."""
    p = as_phi_array(phi)
    p1, p2, p3, p4 = p
    c12 = n.nx * fp.a12
    c13 = n.ny * fp.b13
    c14 = n.nx * fp.a14 + n.ny * fp.b14
    m = np.array(
        [
            [0.0, c12 * p2, c13 * p3, c14 * p4],
            [-2 * c12 * p2, c12 * p1, 0.0, 0.0],
            [-2 * c13 * p3, 0.0, c13 * p1, 0.0],
            [-2 * c14 * p4, 0.0, 0.0, c14 * p1],
        ]
    )
    return float(p @ m @ p)


def expanded_contraction(phi, n: UnitNormal, gas: GasModel) -> float:
    """u_n (alpha2 phi1^2 + (g-1)/2 (phi2^2 + phi3^2) + g phi4^2)."""
    p1, p2, p3, p4 = as_phi_array(phi)
    un = (n.nx * p2 + n.ny * p3) / p1
    return un * (
        gas.alpha2 * p1 * p1
        + gas.beta2 * (p2 * p2 + p3 * p3)
        + gas.gamma * p4 * p4
    )


def bc_threshold(gas: GasModel) -> float:
    """Normal Mach number where the eigenvalue sign count changes."""
    g = gas.gamma
    return math.sqrt(2 * (g - 1) / (g * (2 - g)))


def closed_form_eigenvalues(un: float, c: float, gas: GasModel) -> np.ndarray:
    """Eigenvalues of the rotated contraction matrix.

    lam1 = alpha2 u_n, lam2 = (g-1)/2 u_n, and lam3,4 solve the coupled
    (phi1 u_n, phi4) block. The discriminant is returned faithfully: it is
    provably positive for g in (1, 2) (the matrix is symmetric), but a
    complex pair is produced rather than an error if it ever goes negative.
    """
    if not c > 0:
        raise DomainError(f"sound speed must be positive, got {c}")
    g = gas.gamma
    lam1 = gas.alpha2 * un
    lam2 = gas.beta2 * un
    mean = (3 - g) / 4 * un
    a2 = (g - 1) * (2 - g) / 2
    b2 = 2 * (g - 1) / (g * (2 - g))
    mn = un / c
    disc = mean * mean - a2 * c * c * (mn * mn - b2)
    if disc >= 0.0:
        s = math.sqrt(disc)
        return np.array([lam1, lam2, mean + s, mean - s])
    s = math.sqrt(-disc)
    return np.array([lam1, lam2, complex(mean, s), complex(mean, -s)])


@dataclass(frozen=True)
class BcRegimeReport:
    """Boundary-condition counts from the eigenvalue and nonlinear analyses."""

    un: float
    c: float
    mach_n: float
    threshold: float
    eigenvalues: np.ndarray
    eigenvalue_signs: tuple[int, int, int, int]
    negative_count: int
    eig_bc_count: int
    nonlinear_bc_needed: int
    complex_pair: bool


def required_bc_count(un: float, c: float, gas: GasModel) -> BcRegimeReport:
    """Eigenvalue-count verdict versus the nonlinear-contraction verdict.

    The nonlinear analysis needs no boundary condition whenever u_n >= 0
    (outflow and walls); for inflow only the eigenvalue count is available.
    """
    lams = closed_form_eigenvalues(un, c, gas)
    re = lams.real if np.iscomplexobj(lams) else lams
    signs = tuple(int(np.sign(v)) for v in re)
    neg = int(np.sum(re < 0))
    return BcRegimeReport(
        un=un,
        c=c,
        mach_n=un / c,
        threshold=bc_threshold(gas),
        eigenvalues=lams,
        eigenvalue_signs=signs,
        negative_count=neg,
        eig_bc_count=neg,
        nonlinear_bc_needed=0 if un >= 0 else neg,
        complex_pair=bool(np.iscomplexobj(lams)),
    )


def eigenvalue_crosscheck(phi, n: UnitNormal, gas: GasModel) -> float:
    """Multiset distance between the numerical spectrum of the rotated
    contraction matrix and the closed forms."""
    from .state import SkewState, sound_speed

    p = as_phi_array(phi)
    m = rotated_boundary_matrix(p, n, gas)
    numeric = np.sort(np.linalg.eigvalsh(m))
    un = (n.nx * p[1] + n.ny * p[2]) / p[0]
    c = sound_speed(SkewState.from_array(p), gas)
    closed = np.sort(closed_form_eigenvalues(un, c, gas).real)
    return float(np.abs(numeric - closed).max())


def wall_sat_penalty(phi, n: UnitNormal, gas: GasModel, sigma: float) -> np.ndarray:
    """Penalty density enforcing u_n = 0 weakly at a wall node.

    Returns -sigma * s_loc * P^-1 (0, nx, ny, 0)^T (phi1 u_n) with the local
    velocity scale s_loc = (g-1) |phi4/phi1|. The solver scales it by
    edge-weight / volume-weight; its energy contribution is
    -2 sigma s_loc w_edge (phi1 u_n)^2 <= 0 for every sigma >= 0.
    """
    p1, p2, p3, p4 = as_phi_array(phi)
    if p1 == 0.0:
        raise VacuumStateError("phi1 = 0: wall penalty undefined")
    s_loc = sigma * (gas.gamma - 1) * abs(p4 / p1)
    w = n.nx * p2 + n.ny * p3
    pinv = 1.0 / norm_matrix(gas)
    return -s_loc * w * np.array([0.0, n.nx, n.ny, 0.0]) * pinv


def sweep_eigenvalues(
    gas: GasModel, mn_min: float, mn_max: float, steps: int, c: float = 1.0
) -> list[dict]:
    """Eigenvalues and negative counts over a normal-Mach range at fixed c."""
    rows = []
    for mn in np.linspace(mn_min, mn_max, steps):
        rep = required_bc_count(float(mn) * c, c, gas)
        lams = rep.eigenvalues
        rows.append(
            {
                "Mn": float(mn),
                "lambda1": float(lams[0].real),
                "lambda2": float(lams[1].real),
                "re_lambda3": float(lams[2].real),
                "im_lambda3": float(lams[2].imag) if rep.complex_pair else 0.0,
                "re_lambda4": float(lams[3].real),
                "im_lambda4": float(lams[3].imag) if rep.complex_pair else 0.0,
                "neg_count": rep.negative_count,
            }
        )
    return rows


def locate_sign_transition(
    gas: GasModel, lo: float, hi: float, c: float = 1.0, tol: float = 1e-9
) -> float:
    """Bisect the normal Mach number where the negative-eigenvalue count changes."""
    n_lo = required_bc_count(lo * c, c, gas).negative_count
    n_hi = required_bc_count(hi * c, c, gas).negative_count
    if n_lo == n_hi:
        raise ValueError(f"no sign transition in [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if required_bc_count(mid * c, c, gas).negative_count == n_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
