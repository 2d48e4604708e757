"""Shared test utilities, including oracles kept independent of the package's
matrix assembly: the quasi-linear rate is coded term by term from the scalar
transformed equations."""

import numpy as np

from skeweuler import Field, Grid2D


def scalar_equation_rate(phi, dphix, dphiy, gamma):
    """-(A phi_x + B phi_y) written out as the four scalar equations.

    Independent oracle: no matrices, each term transcribed directly.
    """
    p1, p2, p3, p4 = phi
    u = p2 / p1
    v = p3 / p1
    r = p4 / p1
    d1x, d2x, d3x, d4x = dphix
    d1y, d2y, d3y, d4y = dphiy
    rate1 = -(u / 2 * d1x + d2x / 2 + v / 2 * d1y + d3y / 2)
    rate2 = -(
        -u * u / 2 * d1x + 3 * u / 2 * d2x + 2 * r * d4x
        - u * v / 2 * d1y + v * d2y + u / 2 * d3y
    )
    rate3 = -(
        -v * u / 2 * d1x + v / 2 * d2x + u * d3x
        - v * v / 2 * d1y + 3 * v / 2 * d3y + 2 * r * d4y
    )
    rate4 = -(
        -gamma / 2 * u * r * d1x + gamma / 2 * r * d2x + u * d4x
        - gamma / 2 * v * r * d1y + gamma / 2 * r * d3y + v * d4y
    )
    return np.array([rate1, rate2, rate3, rate4])


def random_phi(rng, n=None):
    """Admissible states: phi1, phi4 bounded away from zero."""
    shape = () if n is None else (n,)
    return np.stack(
        [
            rng.uniform(0.5, 2.0, shape),
            rng.uniform(-2.0, 2.0, shape),
            rng.uniform(-2.0, 2.0, shape),
            rng.uniform(0.5, 2.0, shape),
        ],
        axis=-1,
    )


def random_field(rng, grid: Grid2D) -> Field:
    data = np.empty((4, grid.nx, grid.ny))
    data[0] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    data[1] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[2] = rng.uniform(-1.0, 1.0, (grid.nx, grid.ny))
    data[3] = rng.uniform(0.5, 2.0, (grid.nx, grid.ny))
    return Field(grid, data)


def trig_field(grid: Grid2D, periods=1) -> Field:
    """Smooth positive field, exactly periodic when the grid is."""
    xx, yy = grid.meshgrid()
    k = 2 * np.pi * periods
    p1 = np.sqrt(1.0 + 0.3 * np.sin(k * xx) * np.sin(k * yy))
    u = 0.3 * np.cos(k * xx) * np.sin(k * yy)
    v = -0.2 * np.sin(k * xx) * np.cos(k * yy)
    p4 = np.sqrt(1.0 + 0.25 * np.cos(k * xx) * np.sin(k * yy))
    return Field(grid, np.stack([p1, p1 * u, p1 * v, p4]))
