"""1D diagonal-norm SBP derivative operators and their 2D tensor application.

An operator is D = P^-1 Q with positive diagonal quadrature P and a nearly
skew-symmetric Q:

    bounded:   Q + Q^T = diag(-1, 0, ..., 0, 1)   (exactly)
    periodic:  Q + Q^T = 0                        (exactly)

Interior orders 2 and 4 are shipped. Q is stored banded (interior stencil)
with dense closure blocks; dense forms are materialized only for audits and
the brute-force Kronecker equivalence oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from . import kernels
from .exceptions import SizeError
from .state import Field, Grid2D, Topology

# interior Q stencils (h-independent), offsets -w..w
_Q_INTERIOR = {
    2: np.array([-1 / 2, 0.0, 1 / 2]),
    4: np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12]),
}

# boundary closures of the standard diagonal-norm operators
_P_CLOSE = {
    2: np.array([1 / 2]),
    4: np.array([17 / 48, 59 / 48, 43 / 48, 49 / 48]),
}
_Q_CLOSE = {
    2: np.array([[-1 / 2, 1 / 2]]),
    4: np.array(
        [
            [-1 / 2, 59 / 96, -1 / 12, -1 / 32, 0.0, 0.0],
            [-59 / 96, 0.0, 59 / 96, 0.0, 0.0, 0.0],
            [1 / 12, -59 / 96, 0.0, 59 / 96, -1 / 12, 0.0],
            [1 / 32, 0.0, -59 / 96, 0.0, 2 / 3, -1 / 12],
        ]
    ),
}

_MIN_N = {2: 3, 4: 12}


@dataclass(frozen=True)
class SbpOperator1D:
    """Immutable 1D SBP first-derivative operator."""

    n: int
    h: float
    interior_order: int
    topology: Topology
    quadrature: np.ndarray          # diagonal of P, h included
    q_interior: np.ndarray          # interior row of Q, offsets -w..w
    q_close_l: np.ndarray           # (r, m) top-left block of Q; empty if periodic

    @property
    def closure_rows(self) -> int:
        return self.q_close_l.shape[0]

    @property
    def width(self) -> int:
        return len(self.q_interior) // 2

    def q_close_r(self) -> np.ndarray:
        """Bottom-right block: Q[n-1-i, n-1-j] = -q_close_l[i, j]."""
        return -self.q_close_l[::-1, ::-1]

    def boundary_diag(self) -> np.ndarray:
        """Diagonal of B = Q + Q^T (zero for periodic)."""
        b = np.zeros(self.n)
        if self.topology == "bounded":
            b[0] = -1.0
            b[-1] = 1.0
        return b

    def dense_q(self) -> np.ndarray:
        n, w = self.n, self.width
        q = np.zeros((n, n))
        if self.topology == "periodic":
            for k, c in enumerate(self.q_interior):
                off = k - w
                q[np.arange(n), (np.arange(n) + off) % n] += c
        else:
            r, m = self.q_close_l.shape
            for i in range(r, n - r):
                q[i, i - w : i + w + 1] = self.q_interior
            q[:r, :m] = self.q_close_l
            q[n - r :, n - m :] = self.q_close_r()
        return q

    def dense_d(self) -> np.ndarray:
        return self.dense_q() / self.quadrature[:, None]

    def kernel_data(self) -> kernels.OpKernelData:
        if self.topology == "periodic":
            return kernels.OpKernelData(
                n=self.n, periodic=True, dcoefs=self.q_interior / self.h
            )
        r = self.closure_rows
        return kernels.OpKernelData(
            n=self.n,
            periodic=False,
            dcoefs=self.q_interior / self.h,
            dclose_l=self.q_close_l / self.quadrature[:r, None],
            dclose_r=self.q_close_r() / self.quadrature[self.n - r :, None],
        )

    def write_csv(self, out: TextIO) -> None:
        """Audit dump: quadrature weight and dense Q row per node."""
        q = self.dense_q()
        out.write("i,p," + ",".join(f"q{j}" for j in range(self.n)) + "\n")
        for i in range(self.n):
            row = ",".join(repr(float(v)) for v in q[i])
            out.write(f"{i},{float(self.quadrature[i])!r},{row}\n")


def build_sbp(order: int, n: int, h: float, topology: Topology = "bounded") -> SbpOperator1D:
    """Construct a shipped operator; raises SizeError below the minimum node count."""
    if order not in _Q_INTERIOR:
        raise ValueError(f"interior order must be 2 or 4, got {order}")
    if n < _MIN_N[order]:
        raise SizeError(f"order-{order} operator needs n >= {_MIN_N[order]}, got {n}")
    if not h > 0:
        raise ValueError(f"spacing must be positive, got {h}")
    p = np.full(n, h)
    q_close = np.zeros((0, 0))
    if topology == "bounded":
        close = _P_CLOSE[order]
        p[: len(close)] = h * close
        p[n - len(close) :] = h * close[::-1]
        q_close = _Q_CLOSE[order].copy()
    elif topology != "periodic":
        raise ValueError(f"topology must be 'bounded' or 'periodic', got {topology!r}")
    return SbpOperator1D(
        n=n,
        h=h,
        interior_order=order,
        topology=topology,
        quadrature=p,
        q_interior=_Q_INTERIOR[order].copy(),
        q_close_l=q_close,
    )


def verify_sbp_constraint(op: SbpOperator1D) -> float:
    """max |Q + Q^T - B|; zero (exactly) for all shipped operators."""
    q = op.dense_q()
    return float(np.abs(q + q.T - np.diag(op.boundary_diag())).max())


@dataclass(frozen=True)
class AccuracyReport:
    """Monomial differentiation residuals, split by interior and closure rows."""

    interior_degree: int
    closure_degree: int
    interior_residual: dict[int, float]
    closure_residual: dict[int, float]
    passed: bool


def verify_accuracy(op: SbpOperator1D, max_degree: int | None = None) -> AccuracyReport:
    """Check D x^k = k x^(k-1) on the operator's own grid.

    Interior rows must be exact (1e-12 * scale) up to the interior order;
    bounded closure rows up to order/2. Periodic operators are checked on the
    non-wrapping rows only (monomials are not periodic).
    """
    n, h = op.n, op.h
    formal_int = op.interior_order
    formal_close = op.interior_order // 2
    if max_degree is None:
        max_degree = formal_int + 1
    x = h * np.arange(n)
    d = op.dense_d()
    if op.topology == "periodic":
        w = op.width
        int_rows = np.arange(w, n - w)
        close_rows = np.array([], dtype=int)
    else:
        r = op.closure_rows
        int_rows = np.arange(r, n - r)
        close_rows = np.concatenate([np.arange(r), np.arange(n - r, n)])
    int_res: dict[int, float] = {}
    close_res: dict[int, float] = {}
    ok = True
    for k in range(max_degree + 1):
        target = np.zeros(n) if k == 0 else k * x ** (k - 1)
        err = np.abs(d @ (x**k) - target)
        scale = max(1.0, float(np.abs(target).max()))
        int_res[k] = float(err[int_rows].max()) if len(int_rows) else 0.0
        close_res[k] = float(err[close_rows].max()) if len(close_rows) else 0.0
        if k <= formal_int and int_res[k] > 1e-12 * scale:
            ok = False
        if k <= formal_close and close_res[k] > 1e-12 * scale:
            ok = False
    return AccuracyReport(
        interior_degree=formal_int,
        closure_degree=formal_close,
        interior_residual=int_res,
        closure_residual=close_res,
        passed=ok,
    )


class TensorApplicator:
    """Applies I4 (x) Dx (x) Iy and I4 (x) Ix (x) Dy to fields as banded loops.

    Kronecker products are never materialized; the dense route exists only in
    the test oracle.
    """

    def __init__(self, grid: Grid2D, opx: SbpOperator1D, opy: SbpOperator1D):
        if opx.n != grid.nx or opy.n != grid.ny:
            raise ValueError("operator sizes must match the grid")
        if opx.topology != grid.topology_x or opy.topology != grid.topology_y:
            raise ValueError("operator topology must match the grid")
        self.grid = grid
        self.opx = opx
        self.opy = opy
        self.kx = opx.kernel_data()
        self.ky = opy.kernel_data()
        self.wx = opx.quadrature
        self.wy = opy.quadrature
        self.w2d = np.outer(self.wx, self.wy)

    def apply_dx_array(self, a: np.ndarray) -> np.ndarray:
        return kernels.apply_d(a, self.kx, axis=0)

    def apply_dy_array(self, a: np.ndarray) -> np.ndarray:
        return kernels.apply_d(a, self.ky, axis=1)

    def apply_dx(self, f: Field) -> Field:
        out = Field(f.grid)
        for c in range(4):
            out.data[c] = self.apply_dx_array(f.data[c])
        return out

    def apply_dy(self, f: Field) -> Field:
        out = Field(f.grid)
        for c in range(4):
            out.data[c] = self.apply_dy_array(f.data[c])
        return out

    def inner_product(self, f, g) -> float:
        """Quadrature-weighted inner product, summed over all components."""
        fa = f.data if isinstance(f, Field) else np.asarray(f)
        ga = g.data if isinstance(g, Field) else np.asarray(g)
        return float(np.sum(self.w2d * fa * ga))


def apply_dx(f: Field, t: TensorApplicator) -> Field:
    return t.apply_dx(f)


def apply_dy(f: Field, t: TensorApplicator) -> Field:
    return t.apply_dy(f)


def inner_product(f, g, t: TensorApplicator) -> float:
    return t.inner_product(f, g)


def operators_for_grid(grid: Grid2D, order: int) -> tuple[SbpOperator1D, SbpOperator1D]:
    opx = build_sbp(order, grid.nx, grid.hx, grid.topology_x)
    opy = build_sbp(order, grid.ny, grid.hy, grid.topology_y)
    return opx, opy
