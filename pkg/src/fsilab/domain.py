"""Geometry, grids, material parameters, and interface characteristic algebra.

The physical setup is a rectangular fluid layer Omega_F = (0,L) x (-H,0)
below a rectangular solid layer Omega_S = (0,L) x (0,Hbar), coupled across
the flat interface y = 0 and periodic in x.  Everything downstream (solvers,
stability analysis, exact solutions) builds on the types defined here.

At the interface the solid's p- and s-wave characteristic variables are

    B   = n.sigma.n + zp n.v      (outgoing, normal)
    B_m = t_m.sigma.n + zs t_m.v  (outgoing, tangential)
    A   = n.sigma.n - zp n.v      (incoming, normal)
    A_m = t_m.sigma.n - zs t_m.v  (incoming, tangential)

with zp = rho_s*cp and zs = rho_s*cs the solid impedances.  The partitioned
coupling schemes are all expressed in terms of these combinations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidInputError",
    "MaterialParams",
    "Geometry",
    "GridPair",
    "FluidState",
    "SolidState",
    "InterfaceTrace",
    "char_outgoing",
    "char_incoming",
    "impedance_weighted_velocity",
    "fluid_impedance",
]

NORMAL_TOL = 1e-12


class InvalidInputError(ValueError):
    """Raised when an operation receives data violating its preconditions."""


@dataclass(frozen=True)
class MaterialParams:
    """Fluid and solid material constants with derived wave speeds/impedances.

    cp, cs, zp, zs are computed in __post_init__ and hold exactly
    cp = sqrt((lambda_s + 2 mu_s)/rho_s), cs = sqrt(mu_s/rho_s),
    zp = rho_s*cp, zs = rho_s*cs.
    """

    rho_f: float
    mu_f: float
    rho_s: float
    lambda_s: float
    mu_s: float
    cp: float = field(init=False)
    cs: float = field(init=False)
    zp: float = field(init=False)
    zs: float = field(init=False)

    def __post_init__(self):
        if self.rho_f <= 0 or self.rho_s <= 0:
            raise InvalidInputError("densities must be positive")
        if self.mu_f < 0 or self.mu_s < 0:
            raise InvalidInputError("viscosities must be non-negative")
        if self.lambda_s + 2.0 * self.mu_s <= 0:
            raise InvalidInputError("lambda_s + 2*mu_s must be positive")
        object.__setattr__(self, "cp", np.sqrt((self.lambda_s + 2.0 * self.mu_s) / self.rho_s))
        object.__setattr__(self, "cs", np.sqrt(self.mu_s / self.rho_s))
        object.__setattr__(self, "zp", self.rho_s * self.cp)
        object.__setattr__(self, "zs", self.rho_s * self.cs)

    @classmethod
    def from_density_ratio(cls, delta, mu_f=0.0, rho_f=1.0):
        """Model-problem material: rho_s = lambda_s = mu_s = rho_f * delta."""
        return cls(rho_f=rho_f, mu_f=mu_f, rho_s=rho_f * delta,
                   lambda_s=rho_f * delta, mu_s=rho_f * delta)


@dataclass(frozen=True)
class Geometry:
    """Periodic-in-x rectangular fluid/solid domains meeting at y = 0."""

    L: float = 1.0
    H: float = 1.0
    Hbar: float = 0.5
    periodic_x: bool = True

    def __post_init__(self):
        if self.L <= 0 or self.H <= 0 or self.Hbar <= 0:
            raise InvalidInputError("domain dimensions must be positive")


@dataclass(frozen=True)
class GridPair:
    """Matched fluid/solid Cartesian grids sharing dx and dy.

    Fluid nodes: y_j = -H + j*dy, j = 0..ny_f (interface row j = ny_f at y=0).
    Solid nodes: y_j = j*dy, j = 0..ny_s (interface row j = 0).
    Both carry ghost_width ghost rows beyond each y-boundary; x is periodic
    with nodes x_i = i*dx, i = 0..nx-1.
    """

    geom: Geometry
    nx: int
    ny_f: int
    ny_s: int
    ghost_width: int = 2

    def __post_init__(self):
        if min(self.nx, self.ny_f, self.ny_s) < 3 or self.ghost_width < 1:
            raise InvalidInputError("grid too small")

    @classmethod
    def from_spacing(cls, geom, h, ghost_width=2):
        nx = int(round(geom.L / h))
        ny_f = int(round(geom.H / h))
        ny_s = int(round(geom.Hbar / h))
        return cls(geom=geom, nx=nx, ny_f=ny_f, ny_s=ny_s, ghost_width=ghost_width)

    @property
    def dx(self):
        return self.geom.L / self.nx

    @property
    def dy(self):
        return self.geom.H / self.ny_f

    @property
    def x(self):
        return self.dx * np.arange(self.nx)

    def y_fluid(self, with_ghosts=False):
        j0 = -self.ghost_width if with_ghosts else 0
        j1 = self.ny_f + (self.ghost_width if with_ghosts else 0)
        return -self.geom.H + self.dy * np.arange(j0, j1 + 1)

    def y_solid(self, with_ghosts=False):
        j0 = -self.ghost_width if with_ghosts else 0
        j1 = self.ny_s + (self.ghost_width if with_ghosts else 0)
        return self.dy * np.arange(j0, j1 + 1)

    def fluid_array(self, dtype=float):
        """Zeroed fluid grid function including ghost rows, shape (nx, ny_f+1+2g)."""
        return np.zeros((self.nx, self.ny_f + 1 + 2 * self.ghost_width), dtype=dtype)

    def solid_array(self, dtype=float):
        return np.zeros((self.nx, self.ny_s + 1 + 2 * self.ghost_width), dtype=dtype)

    def jf(self, j):
        """Column index of fluid physical row j (j = ny_f is the interface)."""
        return j + self.ghost_width

    def js(self, j):
        """Column index of solid physical row j (j = 0 is the interface)."""
        return j + self.ghost_width


@dataclass
class FluidState:
    """Fluid velocity (v1, v2) and pressure p grid functions at time t."""

    v1: np.ndarray
    v2: np.ndarray
    p: np.ndarray
    t: float = 0.0

    @classmethod
    def zeros(cls, grid, t=0.0):
        return cls(grid.fluid_array(), grid.fluid_array(), grid.fluid_array(), t)

    def copy(self):
        return FluidState(self.v1.copy(), self.v2.copy(), self.p.copy(), self.t)

    def max_norm(self):
        return max(np.max(np.abs(f)) for f in (self.v1, self.v2, self.p))


@dataclass
class SolidState:
    """Solid displacement, velocity, and stress grid functions at time t.

    The full elastic solid carries (u1,u2,v1,v2,s11,s12,s21,s22).  The
    acoustic reduction (vertical motion only) uses (u2,v2,s21,s22) and
    leaves the other arrays as None.
    """

    u2: np.ndarray
    v2: np.ndarray
    s21: np.ndarray
    s22: np.ndarray
    u1: np.ndarray | None = None
    v1: np.ndarray | None = None
    s11: np.ndarray | None = None
    s12: np.ndarray | None = None
    t: float = 0.0

    @property
    def is_elastic(self):
        return self.u1 is not None

    @classmethod
    def zeros(cls, grid, elastic, t=0.0):
        z = grid.solid_array
        if elastic:
            return cls(u2=z(), v2=z(), s21=z(), s22=z(),
                       u1=z(), v1=z(), s11=z(), s12=z(), t=t)
        return cls(u2=z(), v2=z(), s21=z(), s22=z(), t=t)

    def fields(self):
        """(name, array) pairs for every active field."""
        names = ["u2", "v2", "s21", "s22"]
        if self.is_elastic:
            names += ["u1", "v1", "s11", "s12"]
        return [(n, getattr(self, n)) for n in names]

    def copy(self):
        kw = {n: a.copy() for n, a in self.fields()}
        return SolidState(t=self.t, **kw)

    def max_norm(self):
        return max(np.max(np.abs(a)) for _, a in self.fields())


@dataclass
class InterfaceTrace:
    """Per-interface-node projected velocity and traction.

    v_n, v_t are the normal/tangential interface velocity components and
    (traction_n, traction_t) the components of sigma.n there, all arrays of
    length nx.
    """

    v_n: np.ndarray
    v_t: np.ndarray
    traction_n: np.ndarray
    traction_t: np.ndarray

    @classmethod
    def zeros(cls, nx):
        return cls(*(np.zeros(nx) for _ in range(4)))


def _check_frame(n, tangents):
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > NORMAL_TOL:
        raise InvalidInputError("normal vector must have unit length")
    for t in tangents:
        t = np.asarray(t, dtype=float)
        if abs(np.linalg.norm(t) - 1.0) > NORMAL_TOL or abs(np.dot(t, n)) > NORMAL_TOL:
            raise InvalidInputError("tangents must be unit and orthogonal to n")
    return n


def char_outgoing(sigma_n, v, n, tangents, mat):
    """Outgoing characteristics (B, B_1, B_2) of the solid at the interface.

    sigma_n is the traction vector sigma.n and v the velocity at a point;
    tangents is a sequence of up to two unit tangents (one in 2D).
    Missing tangent slots return 0.
    """
    n = _check_frame(n, tangents)
    sigma_n = np.asarray(sigma_n, dtype=float)
    v = np.asarray(v, dtype=float)
    B = float(n @ sigma_n + mat.zp * (n @ v))
    Bm = [float(np.asarray(t) @ sigma_n + mat.zs * (np.asarray(t) @ v)) for t in tangents]
    while len(Bm) < 2:
        Bm.append(0.0)
    return B, Bm[0], Bm[1]


def char_incoming(sigma_n, v, n, tangents, mat):
    """Incoming characteristics (A, A_1, A_2); signs mirror char_outgoing."""
    n = _check_frame(n, tangents)
    sigma_n = np.asarray(sigma_n, dtype=float)
    v = np.asarray(v, dtype=float)
    A = float(n @ sigma_n - mat.zp * (n @ v))
    Am = [float(np.asarray(t) @ sigma_n - mat.zs * (np.asarray(t) @ v)) for t in tangents]
    while len(Am) < 2:
        Am.append(0.0)
    return A, Am[0], Am[1]


def impedance_weighted_velocity(v_fluid, v_solid, traction_solid, traction_I,
                                n, tangents, mat, z_f, beta):
    """Impedance-weighted interface velocity.

    Normal component:
        zf/(zf+zp) n.v_f + zp/(zf+zp) n.v_s + beta/(zf+zp) n.(sig_s.n - (sig n)^I)
    and analogously with zs for each tangential component.  beta = 0 drops
    the traction terms (used before the pressure is available).
    """
    if z_f <= 0:
        raise InvalidInputError("fluid impedance must be positive")
    n = _check_frame(n, tangents)
    v_fluid = np.asarray(v_fluid, dtype=float)
    v_solid = np.asarray(v_solid, dtype=float)
    dtr = np.asarray(traction_solid, dtype=float) - np.asarray(traction_I, dtype=float)
    out = np.zeros_like(v_fluid)
    vn = (z_f * (n @ v_fluid) + mat.zp * (n @ v_solid) + beta * (n @ dtr)) / (z_f + mat.zp)
    out += vn * n
    for t in tangents:
        t = np.asarray(t, dtype=float)
        vt = (z_f * (t @ v_fluid) + mat.zs * (t @ v_solid) + beta * (t @ dtr)) / (z_f + mat.zs)
        out += vt * t
    if not np.all(np.isfinite(out)):
        raise InvalidInputError("non-finite interface velocity")
    return out


def fluid_impedance(mat, dy, dt):
    """Discrete fluid impedance z_f = rho_f * dy / dt.

    In the one-dimensional setting dy is replaced by the fluid depth H,
    giving z_f = rho_f*H/dt; results are insensitive to this choice.
    """
    return mat.rho_f * dy / dt
