"""Backend equivalence: the compiled extension and the numpy fallback must
compute the same derivatives and RHS to roundoff."""

import numpy as np
import pytest

from skeweuler import GasModel, Grid2D
from skeweuler import kernels
from skeweuler.sbp import operators_for_grid, TensorApplicator

from helpers import random_field

needs_compiled = pytest.mark.skipif(
    not kernels.HAVE_COMPILED, reason="compiled extension not built"
)

GAS = GasModel(1.4, 1.0)

CASES = [
    (2, "bounded", "bounded", 9, 11),
    (2, "periodic", "periodic", 10, 12),
    (4, "bounded", "periodic", 14, 13),
    (4, "periodic", "bounded", 13, 15),
]


def _setup(order, tx, ty, nx, ny):
    grid = Grid2D(nx, ny, topology_x=tx, topology_y=ty)
    opx, opy = operators_for_grid(grid, order)
    return grid, TensorApplicator(grid, opx, opy)


@needs_compiled
@pytest.mark.parametrize("order,tx,ty,nx,ny", CASES)
def test_apply_d_backend_equivalence(order, tx, ty, nx, ny):
    grid, app = _setup(order, tx, ty, nx, ny)
    rng = np.random.default_rng(1)
    f = rng.standard_normal((nx, ny))
    for k, axis in ((app.kx, 0), (app.ky, 1)):
        a = kernels.apply_d(f, k, axis, backend="compiled")
        b = kernels.apply_d(f, k, axis, backend="numpy")
        scale = max(1.0, np.abs(b).max())
        assert np.abs(a - b).max() <= 1e-13 * scale


@needs_compiled
@pytest.mark.parametrize("order,tx,ty,nx,ny", CASES)
@pytest.mark.parametrize("fp", [(0.0, 0.0, 0.0, 0.0), (2.5, -1.0, 0.3, 4.0)])
def test_rhs_backend_equivalence(order, tx, ty, nx, ny, fp):
    grid, app = _setup(order, tx, ty, nx, ny)
    f = random_field(np.random.default_rng(2), grid)
    a = kernels.rhs_core(f.data, app.kx, app.ky, GAS.gamma, GAS.alpha2, fp,
                         backend="compiled")
    b = kernels.rhs_core(f.data, app.kx, app.ky, GAS.gamma, GAS.alpha2, fp,
                         backend="numpy")
    scale = max(1.0, np.abs(b).max())
    assert np.abs(a - b).max() <= 1e-12 * scale


def test_dense_matches_banded_layout():
    # dense() of the kernel data equals the operator's own dense D
    for order, topo in ((2, "bounded"), (4, "bounded"), (4, "periodic")):
        grid = Grid2D(16, 16, topology_x=topo, topology_y=topo)
        opx, _ = operators_for_grid(grid, order)
        np.testing.assert_allclose(opx.kernel_data().dense(), opx.dense_d(),
                                   rtol=0, atol=1e-15 / grid.hx)


def test_backend_selection_reports():
    assert kernels.BACKEND in ("compiled", "numpy")
    if kernels.BACKEND == "compiled":
        assert kernels.HAVE_COMPILED
