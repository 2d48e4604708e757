"""Hot-loop kernels: 1D derivative application and the split-form right-hand side.

Two interchangeable backends compute identical quantities:

* ``compiled`` -- Cython extension (:mod:`skeweuler._core`) walking the banded
  stencil plus dense closure blocks; built optionally at install time.
* ``numpy``   -- dense-operator BLAS matmuls and vectorized pointwise algebra.

The backend is selected once at import. Set ``SKEWEULER_BACKEND`` to
``numpy`` or ``compiled`` to force a choice (``compiled`` raises if the
extension is missing); default ``auto`` prefers the extension.

``benchmarks/bench_rhs.py`` compares the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

_requested = os.environ.get("SKEWEULER_BACKEND", "auto").lower()
if _requested not in ("auto", "compiled", "numpy"):
    raise ValueError(f"SKEWEULER_BACKEND must be auto|compiled|numpy, got {_requested!r}")

_core = None
if _requested in ("auto", "compiled"):
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise
        _core = None

BACKEND = "compiled" if _core is not None else "numpy"
HAVE_COMPILED = _core is not None

_EMPTY_BLOCK = np.zeros((0, 0))


@dataclass
class OpKernelData:
    """Banded representation of a 1D derivative operator D = P^-1 Q.

    ``dcoefs`` is the interior row of D at offsets -w..w; bounded operators
    carry dense closure rows ``dclose_l`` (rows 0..r-1 over the first m
    columns) and ``dclose_r`` (last r rows over the last m columns).
    """

    n: int
    periodic: bool
    dcoefs: np.ndarray
    dclose_l: np.ndarray = field(default_factory=lambda: _EMPTY_BLOCK)
    dclose_r: np.ndarray = field(default_factory=lambda: _EMPTY_BLOCK)
    _dense: np.ndarray | None = None

    def __post_init__(self):
        self.dcoefs = np.ascontiguousarray(self.dcoefs, dtype=np.float64)
        self.dclose_l = np.ascontiguousarray(self.dclose_l, dtype=np.float64)
        self.dclose_r = np.ascontiguousarray(self.dclose_r, dtype=np.float64)

    @property
    def width(self) -> int:
        return len(self.dcoefs) // 2

    def dense(self) -> np.ndarray:
        """Dense D, built once; the numpy backend applies it with matmul."""
        if self._dense is None:
            n, w = self.n, self.width
            d = np.zeros((n, n))
            if self.periodic:
                cols = (np.arange(n)[:, None] + np.arange(-w, w + 1)[None, :]) % n
                np.add.at(d, (np.repeat(np.arange(n), 2 * w + 1), cols.ravel()),
                          np.tile(self.dcoefs, n))
            else:
                r, m = self.dclose_l.shape
                for i in range(r, n - r):
                    d[i, i - w : i + w + 1] = self.dcoefs
                d[:r, :m] = self.dclose_l
                d[n - r :, n - m :] = self.dclose_r
            self._dense = d
        return self._dense


def _apply_d_numpy(f: np.ndarray, k: OpKernelData, axis: int) -> np.ndarray:
    d = k.dense()
    if axis == 0:
        return d @ f
    return f @ d.T


def _apply_d_compiled(f: np.ndarray, k: OpKernelData, axis: int) -> np.ndarray:
    out = np.empty_like(f)
    _core.apply_d(
        np.ascontiguousarray(f), out, int(k.periodic),
        k.dcoefs, k.dclose_l, k.dclose_r, int(axis),
    )
    return out


def _rhs_core_numpy(phi, kx, ky, gamma, alpha2, fp):
    # diverging fields overflow here before the time loop's finite check
    # catches them; stay silent like the compiled kernel
    with np.errstate(over="ignore", invalid="ignore"):
        return _rhs_core_numpy_impl(phi, kx, ky, gamma, alpha2, fp)


def _rhs_core_numpy_impl(phi, kx, ky, gamma, alpha2, fp):
    a12, a14, b13, b14 = fp
    g = gamma
    b2 = (g - 1.0) / 2.0
    p1, p2, p3, p4 = phi
    u = p2 / p1
    v = p3 / p1
    r = p4 / p1

    # split-flux products G = A1 phi, K = B1 phi
    g1 = 0.5 * (p2 + (a12 * p2 * p2 + a14 * p4 * p4) / alpha2)
    g2 = 0.5 * (u * p2 - (a12 / b2) * p1 * p2)
    g3 = 0.5 * (u * p3)
    g4 = 0.5 * (g * u * p4 - a14 * p1 * p4)
    k1 = 0.5 * (p3 + (b13 * p3 * p3 + b14 * p4 * p4) / alpha2)
    k2 = 0.5 * (v * p2)
    k3 = 0.5 * (v * p3 - (b13 / b2) * p1 * p3)
    k4 = 0.5 * (g * v * p4 - b14 * p1 * p4)

    ddx = kx.dense()
    ddy = ky.dense()

    def dxa(a):
        return ddx @ a

    def dya(a):
        return a @ ddy.T

    h1, h2, h3, h4 = dxa(p1), dxa(p2), dxa(p3), dxa(p4)
    m1, m2, m3, m4 = dya(p1), dya(p2), dya(p3), dya(p4)

    out1 = (
        dxa(g1) + dya(k1)
        + 0.5 * (u * h1 - (2 * a12 / alpha2) * p2 * h2 - (2 * a14 / alpha2) * p4 * h4)
        + 0.5 * (v * m1 - (2 * b13 / alpha2) * p3 * m3 - (2 * b14 / alpha2) * p4 * m4)
    )
    out2 = (
        dxa(g2) + dya(k2)
        + 0.5 * ((a12 / b2) * (p2 * h1 + p1 * h2) + u * h2 + 4 * r * h4)
        + 0.5 * (v * m2)
    )
    out3 = (
        dxa(g3) + dya(k3)
        + 0.5 * (u * h3)
        + 0.5 * ((b13 / b2) * (p3 * m1 + p1 * m3) + v * m3 + 4 * r * m4)
    )
    out4 = (
        dxa(g4) + dya(k4)
        + 0.5 * (a14 * (p4 * h1 + p1 * h4) + (2 - g) * u * h4)
        + 0.5 * (b14 * (p4 * m1 + p1 * m4) + (2 - g) * v * m4)
    )
    return -np.stack([out1, out2, out3, out4])


def _rhs_core_compiled(phi, kx, ky, gamma, alpha2, fp):
    phi = np.ascontiguousarray(phi)
    out = np.empty_like(phi)
    _core.rhs_core(
        phi, out, float(gamma), float(alpha2),
        float(fp[0]), float(fp[1]), float(fp[2]), float(fp[3]),
        int(kx.periodic), kx.dcoefs, kx.dclose_l, kx.dclose_r,
        int(ky.periodic), ky.dcoefs, ky.dclose_l, ky.dclose_r,
    )
    return out


def apply_d(f, k: OpKernelData, axis: int, backend: str | None = None) -> np.ndarray:
    """Derivative of a (nx, ny) array along the given axis."""
    if (backend or BACKEND) == "compiled":
        return _apply_d_compiled(f, k, axis)
    return _apply_d_numpy(f, k, axis)


def rhs_core(phi, kx: OpKernelData, ky: OpKernelData, gamma: float, alpha2: float,
             fp=(0.0, 0.0, 0.0, 0.0), backend: str | None = None) -> np.ndarray:
    """Interior split-form spatial operator, negated:

        -[D_x(A1 phi) + A2 D_x phi + D_y(B1 phi) + B2 D_y phi]

    for a (4, nx, ny) field. Penalties and sources are added by the solver.
    """
    if (backend or BACKEND) == "compiled":
        return _rhs_core_compiled(phi, kx, ky, gamma, alpha2, fp)
    return _rhs_core_numpy(phi, kx, ky, gamma, alpha2, fp)
