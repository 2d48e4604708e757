"""States, variable transforms, grid and field storage.

The solver's unknowns are the square-root variables

    phi = (phi1, phi2, phi3, phi4) = (sqrt(rho), sqrt(rho)*u, sqrt(rho)*v, sqrt(p)).

Conversions to and from primitive variables, the gas model (gamma plus the
norm parameter alpha2), the structured grid and the 4-component nodal field
live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, TextIO

import numpy as np

from .exceptions import DomainError, ModelError, SizeError, VacuumStateError

Topology = Literal["bounded", "periodic"]

# phi1 magnitudes below this make the phi4/phi1 matrix entries meaningless
VACUUM_PHI1 = 1e-13


@dataclass(frozen=True)
class PhysicalState:
    """Primitive variables (rho, u, v, p) at a point."""

    rho: float
    u: float
    v: float
    p: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.u, self.v, self.p])


@dataclass(frozen=True)
class SkewState:
    """Square-root variables at a point; the solver's primary unknown."""

    phi1: float
    phi2: float
    phi3: float
    phi4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2, self.phi3, self.phi4])

    @staticmethod
    def from_array(a) -> "SkewState":
        a = np.asarray(a, dtype=float)
        return SkewState(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


@dataclass(frozen=True)
class GasModel:
    """Ratio of specific heats and the free norm parameter alpha2.

    The remaining diagonal norm weights are fixed by the formulation:
    beta2 = theta2 = (gamma - 1) / 2.
    """

    gamma: float = 1.4
    alpha2: float = 1.0

    def __post_init__(self):
        if not 1.0 < self.gamma < 2.0:
            raise ModelError(f"gamma must lie in (1, 2), got {self.gamma}")
        if not self.alpha2 > 0.0:
            raise ModelError(f"alpha2 must be positive, got {self.alpha2}")

    @property
    def beta2(self) -> float:
        return (self.gamma - 1.0) / 2.0


def as_phi_array(phi) -> np.ndarray:
    """Accept a SkewState or any 4-sequence and return a float array (4,)."""
    if isinstance(phi, SkewState):
        return phi.as_array()
    a = np.asarray(phi, dtype=float)
    if a.shape != (4,):
        raise ValueError(f"expected 4 components, got shape {a.shape}")
    return a


def to_skew(s: PhysicalState) -> SkewState:
    """Map primitive variables to square-root variables."""
    if not s.rho > 0.0:
        raise DomainError(f"rho must be positive, got {s.rho}")
    if not s.p > 0.0:
        raise DomainError(f"p must be positive, got {s.p}")
    sq = math.sqrt(s.rho)
    return SkewState(sq, sq * s.u, sq * s.v, math.sqrt(s.p))


def from_skew(phi: SkewState) -> PhysicalState:
    """Map square-root variables back; rho = phi1^2 and p = phi4^2 are sign-free."""
    if phi.phi1 == 0.0:
        raise VacuumStateError("phi1 = 0: velocities u = phi2/phi1 undefined")
    return PhysicalState(
        phi.phi1 * phi.phi1,
        phi.phi2 / phi.phi1,
        phi.phi3 / phi.phi1,
        phi.phi4 * phi.phi4,
    )


def sound_speed(phi: SkewState, gas: GasModel) -> float:
    """c = sqrt(gamma p / rho) = sqrt(gamma) * |phi4 / phi1|."""
    if phi.phi1 == 0.0:
        raise VacuumStateError("phi1 = 0: sound speed undefined")
    return math.sqrt(gas.gamma) * abs(phi.phi4 / phi.phi1)


@dataclass(frozen=True)
class Grid2D:
    """Uniform tensor grid on [x0, x1] x [y0, y1].

    Bounded directions place nodes at both ends (h = L / (n - 1)); periodic
    directions omit the right end (h = L / n). Nodes are stored x-major:
    node (i, j) sits at flat index i * ny + j.
    """

    nx: int
    ny: int
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0
    topology_x: Topology = "bounded"
    topology_y: Topology = "bounded"

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise SizeError(f"grid must be at least 3x3, got {self.nx}x{self.ny}")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise SizeError("grid extents must have positive length")

    @property
    def hx(self) -> float:
        n = self.nx if self.topology_x == "periodic" else self.nx - 1
        return (self.x1 - self.x0) / n

    @property
    def hy(self) -> float:
        n = self.ny if self.topology_y == "periodic" else self.ny - 1
        return (self.y1 - self.y0) / n

    @property
    def npoints(self) -> int:
        return self.nx * self.ny

    def x(self) -> np.ndarray:
        return self.x0 + self.hx * np.arange(self.nx)

    def y(self) -> np.ndarray:
        return self.y0 + self.hy * np.arange(self.ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates as (nx, ny) arrays matching field storage."""
        return np.meshgrid(self.x(), self.y(), indexing="ij")


class Field:
    """4-component nodal field: data[c, i, j] = phi_{c+1} at node (i, j)."""

    __slots__ = ("grid", "data")

    def __init__(self, grid: Grid2D, data: np.ndarray | None = None):
        self.grid = grid
        if data is None:
            data = np.zeros((4, grid.nx, grid.ny))
        else:
            data = np.ascontiguousarray(data, dtype=np.float64)
            if data.shape != (4, grid.nx, grid.ny):
                raise ValueError(
                    f"field shape {data.shape} does not match grid "
                    f"(4, {grid.nx}, {grid.ny})"
                )
        self.data = data

    @staticmethod
    def constant(grid: Grid2D, phi: SkewState) -> "Field":
        f = Field(grid)
        for c, val in enumerate(phi.as_array()):
            f.data[c].fill(val)
        return f

    @staticmethod
    def from_function(grid: Grid2D, fn: Callable) -> "Field":
        """fn(x, y) -> 4 arrays (or scalars broadcastable to the grid shape)."""
        xx, yy = grid.meshgrid()
        vals = fn(xx, yy)
        f = Field(grid)
        for c in range(4):
            f.data[c] = np.broadcast_to(vals[c], (grid.nx, grid.ny))
        f.data = np.ascontiguousarray(f.data)
        return f

    def copy(self) -> "Field":
        return Field(self.grid, self.data.copy())

    def get_node(self, i: int, j: int) -> SkewState:
        return SkewState(*(float(self.data[c, i, j]) for c in range(4)))

    def set_node(self, i: int, j: int, phi: SkewState) -> None:
        self.data[:, i, j] = phi.as_array()

    def min_abs_phi1(self) -> float:
        return float(np.min(np.abs(self.data[0])))

    def min_abs_phi4(self) -> float:
        return float(np.min(np.abs(self.data[3])))

    def check_vacuum(self) -> None:
        """Raise with the offending node index if |phi1| is below the blow-up guard."""
        bad = np.abs(self.data[0]) < VACUUM_PHI1
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise VacuumStateError(
                f"|phi1| < {VACUUM_PHI1:g} at node ({i}, {j}): matrix entries blow up"
            )

    def write_csv(self, out: TextIO) -> None:
        """Snapshot export: one row per node in storage order."""
        x = self.grid.x()
        y = self.grid.y()
        out.write("x,y,phi1,phi2,phi3,phi4\n")
        d = self.data
        for i in range(self.grid.nx):
            for j in range(self.grid.ny):
                vals = (x[i], y[j], d[0, i, j], d[1, i, j], d[2, i, j], d[3, i, j])
                out.write(",".join(repr(float(v)) for v in vals) + "\n")

    @staticmethod
    def read_csv(grid: Grid2D, inp: TextIO) -> "Field":
        """Inverse of write_csv for a matching grid."""
        header = inp.readline().strip()
        if header != "x,y,phi1,phi2,phi3,phi4":
            raise ValueError(f"unexpected snapshot header: {header!r}")
        raw = np.loadtxt(inp, delimiter=",", ndmin=2)
        if raw.shape[0] != grid.npoints:
            raise ValueError(
                f"snapshot has {raw.shape[0]} rows, grid needs {grid.npoints}"
            )
        data = raw[:, 2:6].T.reshape(4, grid.nx, grid.ny)
        return Field(grid, data)
