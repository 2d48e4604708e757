"""Point-wise 4x4 coefficient matrices and the algebraic identities behind them.

Two equivalent descriptions of the governing equations coexist:

* quasi-linear form   phi_t + A phi_x + B phi_y = 0,
* split form          phi_t + (A1 phi)_x + A2 phi_x + (B1 phi)_y + B2 phi_y = 0,

tied together by the skew identity  (At phi)_x + At^T phi_x = 2 P A phi_x
(and its y analogue with Bt, B), where P = diag(alpha2, (g-1)/2, (g-1)/2, 1)
is the constant energy norm.  At, Bt carry four free coefficients that
provably never enter the energy rate; they default to zero, which reproduces
the explicit split matrices.

The ``*_entries`` helpers build plain nested lists so the same formulas can
be evaluated with floats or sympy symbols (the manufactured-solution module
reuses them).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import VacuumStateError
from .state import GasModel, as_phi_array


@dataclass(frozen=True)
class FreeParams:
    """Free coefficients of At and Bt (dimensionless, arbitrary reals)."""

    a12: float = 0.0
    a14: float = 0.0
    b13: float = 0.0
    b14: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a12, self.a14, self.b13, self.b14)


ZERO_PARAMS = FreeParams()


def norm_matrix(gas: GasModel) -> np.ndarray:
    """Diagonal of the energy norm P = diag(alpha2, (g-1)/2, (g-1)/2, 1)."""
    b2 = gas.beta2
    return np.array([gas.alpha2, b2, b2, 1.0])


def _split_phi(phi):
    p = as_phi_array(phi)
    if p[0] == 0.0:
        raise VacuumStateError("phi1 = 0: coefficient matrices undefined")
    return p[0], p[1], p[2], p[3]


def a_entries(u, v, r, g):
    """Quasi-linear A without the leading 1/2; r = phi4/phi1."""
    return [
        [u, 1, 0, 0],
        [-u * u, 3 * u, 0, 4 * r],
        [-u * v, v, 2 * u, 0],
        [-g * u * r, g * r, 0, 2 * u],
    ]


def b_entries(u, v, r, g):
    """Quasi-linear B without the leading 1/2.

    Row 3 is read off the scalar equations: (1/2)[-v^2, 0, 3v, 4 r], with the
    3v in column 3 so that y-direction terms multiply (phi3)_y.
    """
    return [
        [v, 0, 1, 0],
        [-u * v, 2 * v, u, 0],
        [-v * v, 0, 3 * v, 4 * r],
        [-g * v * r, 0, g * r, 2 * v],
    ]


def atilde_entries(phi1, phi2, phi3, phi4, g, alpha2, a12, a14):
    u = phi2 / phi1
    r = phi4 / phi1
    b2 = (g - 1) / 2
    return [
        [alpha2 * u, a12 * phi2, 0, a14 * phi4],
        [-2 * a12 * phi2, a12 * phi1 + b2 * u, 0, 0],
        [0, 0, b2 * u, 0],
        [-2 * a14 * phi4, 2 * (g - 1) * r, 0, a14 * phi1 + (2 - g) * u],
    ]


def btilde_entries(phi1, phi2, phi3, phi4, g, alpha2, b13, b14):
    v = phi3 / phi1
    r = phi4 / phi1
    b2 = (g - 1) / 2
    return [
        [alpha2 * v, 0, b13 * phi3, b14 * phi4],
        [0, b2 * v, 0, 0],
        [-2 * b13 * phi3, 0, b13 * phi1 + b2 * v, 0],
        [-2 * b14 * phi4, 0, 2 * (g - 1) * r, b14 * phi1 + (2 - g) * v],
    ]


def coeff_a(phi, gas: GasModel) -> np.ndarray:
    """Quasi-linear coefficient matrix A(phi)."""
    p1, p2, p3, p4 = _split_phi(phi)
    return 0.5 * np.array(a_entries(p2 / p1, p3 / p1, p4 / p1, gas.gamma))


def coeff_b(phi, gas: GasModel) -> np.ndarray:
    """Quasi-linear coefficient matrix B(phi)."""
    p1, p2, p3, p4 = _split_phi(phi)
    return 0.5 * np.array(b_entries(p2 / p1, p3 / p1, p4 / p1, gas.gamma))


def coeff_atilde(phi, gas: GasModel, fp: FreeParams = ZERO_PARAMS) -> np.ndarray:
    p1, p2, p3, p4 = _split_phi(phi)
    return np.array(atilde_entries(p1, p2, p3, p4, gas.gamma, gas.alpha2, fp.a12, fp.a14))


def coeff_btilde(phi, gas: GasModel, fp: FreeParams = ZERO_PARAMS) -> np.ndarray:
    p1, p2, p3, p4 = _split_phi(phi)
    return np.array(btilde_entries(p1, p2, p3, p4, gas.gamma, gas.alpha2, fp.b13, fp.b14))


def datilde(phi, gas: GasModel, fp: FreeParams = ZERO_PARAMS) -> np.ndarray:
    """Analytic entry derivatives: out[k] = d At / d phi_{k+1} (entries are rational in phi)."""
    p1, p2, p3, p4 = _split_phi(phi)
    g, alpha2 = gas.gamma, gas.alpha2
    a12, a14 = fp.a12, fp.a14
    u = p2 / p1
    r = p4 / p1
    b2 = (g - 1) / 2
    out = np.zeros((4, 4, 4))
    # d/dphi1: du = -u/phi1, dr = -r/phi1
    out[0, 0, 0] = -alpha2 * u / p1
    out[0, 1, 1] = a12 - b2 * u / p1
    out[0, 2, 2] = -b2 * u / p1
    out[0, 3, 1] = -2 * (g - 1) * r / p1
    out[0, 3, 3] = a14 - (2 - g) * u / p1
    # d/dphi2: du = 1/phi1
    out[1, 0, 0] = alpha2 / p1
    out[1, 0, 1] = a12
    out[1, 1, 0] = -2 * a12
    out[1, 1, 1] = b2 / p1
    out[1, 2, 2] = b2 / p1
    out[1, 3, 3] = (2 - g) / p1
    # d/dphi3: At does not involve phi3
    # d/dphi4: dr = 1/phi1
    out[3, 0, 3] = a14
    out[3, 3, 0] = -2 * a14
    out[3, 3, 1] = 2 * (g - 1) / p1
    return out


_SWAP23 = np.array([0, 2, 1, 3])


def dbtilde(phi, gas: GasModel, fp: FreeParams = ZERO_PARAMS) -> np.ndarray:
    """Entry derivatives of Bt via the x<->y symmetry Bt(phi) = S At(S phi) S.

    S swaps components 2 and 3, so dBt/dphi_k = S (dAt/dphi_{S(k)})(S phi) S
    with (a12, a14) -> (b13, b14).
    """
    p = as_phi_array(phi)[_SWAP23]
    swapped = FreeParams(a12=fp.b13, a14=fp.b14)
    d = datilde(p, gas, swapped)
    d = d[_SWAP23]                      # reorder the differentiation index
    d = d[:, _SWAP23][:, :, _SWAP23]    # permute rows and columns
    return d


def split_matrices(
    phi, gas: GasModel, fp: FreeParams = ZERO_PARAMS
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split-form matrices A1 = P^-1 At / 2, A2 = P^-1 At^T / 2, and B1, B2 with Bt.

    B2 uses Bt^T (mirroring A2); with fp = 0 all four match their explicit
    closed forms entry by entry.
    """
    pinv = 1.0 / norm_matrix(gas)
    at = coeff_atilde(phi, gas, fp)
    bt = coeff_btilde(phi, gas, fp)
    a1 = 0.5 * pinv[:, None] * at
    a2 = 0.5 * pinv[:, None] * at.T
    b1 = 0.5 * pinv[:, None] * bt
    b2 = 0.5 * pinv[:, None] * bt.T
    return a1, a2, b1, b2


def skew_identity_residual(
    phi, dphi, gas: GasModel, fp: FreeParams = ZERO_PARAMS, direction: str = "x"
) -> np.ndarray:
    """Pointwise residual of the skew identity in one direction.

    For direction 'x' returns

        r = (sum_k dAt/dphi_k * dphi_k) phi + At dphi + At^T dphi - 2 P A dphi,

    which is identically zero for every admissible (phi, dphi, gas, fp);
    direction 'y' uses Bt, B.
    """
    p = as_phi_array(phi)
    dp = as_phi_array(dphi)
    if direction == "x":
        mt = coeff_atilde(p, gas, fp)
        dmt = datilde(p, gas, fp)
        m = coeff_a(p, gas)
    elif direction == "y":
        mt = coeff_btilde(p, gas, fp)
        dmt = dbtilde(p, gas, fp)
        m = coeff_b(p, gas)
    else:
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")
    pd = norm_matrix(gas)
    dmt_dx = np.einsum("kij,k->ij", dmt, dp)
    return dmt_dx @ p + mt @ dp + mt.T @ dp - 2.0 * pd * (m @ dp)


@dataclass(frozen=True)
class SkewConditionReport:
    """Result of the generic energy-conservation condition check."""

    max_transpose_violation: float
    max_symmetric_c: float
    scale: float
    passed: bool


def check_general_skew_conditions(
    a_funcs, b_funcs, c_func, samples, rtol: float = 1e-13
) -> SkewConditionReport:
    """Check B_i = A_i^T and C + C^T = 0 over a sample set of states.

    ``a_funcs`` and ``b_funcs`` are equal-length lists of callables mapping a
    state to a square matrix; ``c_func`` maps a state to a matrix (or is
    None for C = 0). Passes iff both violations stay below rtol * scale,
    where scale is the largest matrix magnitude seen.
    """
    if len(a_funcs) != len(b_funcs):
        raise ValueError("need one B_i per A_i")
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample state")
    worst_t = 0.0
    worst_c = 0.0
    scale = 0.0
    for s in samples:
        for fa, fb in zip(a_funcs, b_funcs):
            ai = np.asarray(fa(s), dtype=float)
            bi = np.asarray(fb(s), dtype=float)
            if ai.shape != bi.shape or ai.ndim != 2 or ai.shape[0] != ai.shape[1]:
                raise ValueError(f"matrix shape mismatch: {ai.shape} vs {bi.shape}")
            scale = max(scale, np.abs(ai).max(), np.abs(bi).max())
            worst_t = max(worst_t, np.abs(bi - ai.T).max())
        if c_func is not None:
            c = np.asarray(c_func(s), dtype=float)
            scale = max(scale, np.abs(c).max())
            worst_c = max(worst_c, np.abs(c + c.T).max())
    tol = rtol * max(scale, 1e-300)
    return SkewConditionReport(
        max_transpose_violation=worst_t,
        max_symmetric_c=worst_c,
        scale=scale,
        passed=(worst_t <= tol and worst_c <= tol),
    )
