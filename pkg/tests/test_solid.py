import numpy as np
import pytest

from fsilab.domain import Geometry, GridPair, MaterialParams, SolidState, InterfaceTrace
from fsilab.solid import (ConfigurationError, advance_solid,
                          assign_solid_boundary_conditions,
                          compute_solid_acceleration, correct_solid,
                          solid_cfl_dt, solid_energy)

GEOM = Geometry()
MAT = MaterialParams.from_density_ratio(1.0)  # cp = sqrt(3)


def wrap_periodic(st, grid):
    """Periodic-in-y closure for isolated interior tests."""
    g = grid.ghost_width
    n = grid.ny_s
    for _, a in st.fields():
        a[:, g + n] = a[:, g]
        a[:, g - 1] = a[:, g - 1 + n]
        a[:, g - 2] = a[:, g - 2 + n]
        a[:, g + n + 1] = a[:, g + 1]
        a[:, g + n + 2] = a[:, g + 2]


def plane_wave_state(grid, t, mat):
    """ubar2 = f(y - cp t) with period Hbar; exact acoustic p-wave."""
    st = SolidState.zeros(grid, elastic=False, t=t)
    y = grid.y_solid(with_ghosts=True)[None, :]
    f = lambda s: np.sin(4 * np.pi * s)
    fp = lambda s: 4 * np.pi * np.cos(4 * np.pi * s)
    st.u2[:, :] = f(y - mat.cp * t)
    st.v2[:, :] = -mat.cp * fp(y - mat.cp * t)
    st.s22[:, :] = mat.rho_s * mat.cp**2 * fp(y - mat.cp * t)
    return st


def step_periodic(st, dt, grid, mat):
    pred = advance_solid(st, dt, mat, grid, wall_bc=False)
    wrap_periodic(pred, grid)
    new = correct_solid(pred, st, dt, mat, grid, wall_bc=False)
    wrap_periodic(new, grid)
    return new


class TestAdvance:
    def test_zero_state_stays_zero(self, grid_small):
        st = SolidState.zeros(grid_small, elastic=True)
        dt = 0.5 * solid_cfl_dt(MAT, grid_small)
        out = correct_solid(advance_solid(st, dt, MAT, grid_small), st, dt,
                            MAT, grid_small)
        assert out.max_norm() == 0.0

    def test_cfl_violation_rejected(self, grid_small):
        st = SolidState.zeros(grid_small, elastic=True)
        with pytest.raises(ConfigurationError):
            advance_solid(st, 10.0 * solid_cfl_dt(MAT, grid_small), MAT, grid_small)

    def test_plane_wave_one_step_local_error(self):
        # one full step vs exact translation: local error O(dt^3)
        errs = []
        for n in (20, 40):
            grid = GridPair(geom=GEOM, nx=4, ny_f=2 * n, ny_s=n)
            dt = 0.8 * solid_cfl_dt(MAT, grid)
            st = plane_wave_state(grid, 0.0, MAT)
            new = step_periodic(st, dt, grid, MAT)
            ex = plane_wave_state(grid, dt, MAT)
            g = grid.ghost_width
            sl = slice(g, g + n + 1)
            errs.append(np.max(np.abs(new.v2[:, sl] - ex.v2[:, sl])))
        # dt halves with n doubling: local error ratio ~ 8 (allow dissipation slack)
        assert errs[0] / errs[1] > 5.0

    def test_plane_wave_convergence_rate(self):
        errs, hs = [], []
        for n in (20, 40, 80):
            grid = GridPair(geom=GEOM, nx=4, ny_f=2 * n, ny_s=n)
            dt0 = 0.8 * solid_cfl_dt(MAT, grid)
            nsteps = int(np.ceil(0.1 / dt0))
            dt = 0.1 / nsteps
            st = plane_wave_state(grid, 0.0, MAT)
            for _ in range(nsteps):
                st = step_periodic(st, dt, grid, MAT)
            ex = plane_wave_state(grid, st.t, MAT)
            g = grid.ghost_width
            sl = slice(g, g + n + 1)
            errs.append(max(np.max(np.abs(st.v2[:, sl] - ex.v2[:, sl])),
                            np.max(np.abs(st.s22[:, sl] - ex.s22[:, sl]))))
            hs.append(grid.dy)
        rate = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert 1.8 <= rate <= 2.2

    def test_energy_dissipation_periodic(self):
        # multi-mode random data: window-monotone decay over >= 150 steps
        grid = GridPair(geom=GEOM, nx=32, ny_f=32, ny_s=16)
        rng = np.random.default_rng(0)
        st = SolidState.zeros(grid, elastic=True)
        x = grid.x[:, None]
        y = grid.y_solid(with_ghosts=True)[None, :]
        for _, a in st.fields():
            for m in (1, 2, 3):
                c = rng.standard_normal(3)
                a += 0.1 * (c[0] * np.cos(2 * np.pi * m * x) * np.cos(4 * np.pi * m * y)
                            + c[1] * np.sin(2 * np.pi * m * x) * np.cos(4 * np.pi * m * y)
                            + c[2] * np.cos(2 * np.pi * m * x) * np.sin(4 * np.pi * m * y))
        st.s21[:] = st.s12
        dt = 0.8 * solid_cfl_dt(MAT, grid)
        energies = [solid_energy(st, MAT, grid)]
        for _ in range(160):
            st = step_periodic(st, dt, grid, MAT)
            energies.append(solid_energy(st, MAT, grid))
        E = np.array(energies)
        win = 30
        assert np.all(E[win:] <= E[:-win] * (1 + 1e-12))
        assert E[-1] < 0.5 * E[0]

    def test_stress_symmetry_preserved(self):
        grid = GridPair(geom=GEOM, nx=16, ny_f=16, ny_s=8)
        rng = np.random.default_rng(1)
        st = SolidState.zeros(grid, elastic=True)
        x = grid.x[:, None]
        y = grid.y_solid(with_ghosts=True)[None, :]
        for name, a in st.fields():
            a += 0.1 * np.cos(2 * np.pi * x) * np.cos(4 * np.pi * y)
        st.s21[:] = st.s12
        dt = 0.5 * solid_cfl_dt(MAT, grid)
        for _ in range(20):
            st = step_periodic(st, dt, grid, MAT)
        assert np.max(np.abs(st.s12 - st.s21)) < 1e-13


class TestAcceleration:
    def test_trivial_values(self):
        assert compute_solid_acceleration(np.array([1.0]), np.array([1.0]), 0.3)[0] == 0.0
        assert compute_solid_acceleration(np.array([2.0]), np.array([0.0]), 0.5)[0] == pytest.approx(4.0)

    def test_centered_difference_exact_for_quadratic(self):
        # v(t) = t^2 sampled at 1 +- dt/2 gives the exact derivative at t=1
        dt = 0.2
        v_new = (1 + dt / 2) ** 2
        v_old = (1 - dt / 2) ** 2
        assert compute_solid_acceleration(v_new, v_old, dt) == pytest.approx(2.0)


class TestBoundaryConditions:
    def _trace_from_state(self, st, grid, mat):
        g = grid.ghost_width
        return InterfaceTrace(
            v_n=st.v2[:, g].copy(), v_t=st.v1[:, g].copy(),
            traction_n=st.s22[:, g].copy(), traction_t=st.s12[:, g].copy())

    def test_own_trace_is_fixed_point(self, grid_small):
        rng = np.random.default_rng(2)
        st = SolidState.zeros(grid_small, elastic=True)
        x = grid_small.x[:, None]
        y = grid_small.y_solid(with_ghosts=True)[None, :]
        for _, a in st.fields():
            a += np.cos(2 * np.pi * x) * (1 + y)
        st.s21[:] = st.s12
        trace = self._trace_from_state(st, grid_small, MAT)
        g = grid_small.ghost_width
        before = {n: a[:, g].copy() for n, a in st.fields()}
        assign_solid_boundary_conditions(st, trace, MAT, grid_small, scheme="amp")
        for name in ("v1", "v2", "s12", "s22"):
            assert np.allclose(getattr(st, name)[:, g], before[name], atol=1e-13)

    def test_zero_data_zero_ghosts(self, grid_small):
        st = SolidState.zeros(grid_small, elastic=True)
        trace = InterfaceTrace.zeros(grid_small.nx)
        assign_solid_boundary_conditions(st, trace, MAT, grid_small, scheme="amp")
        assert st.max_norm() == 0.0

    def test_incoming_characteristic_residual(self, grid_small):
        # x-independent data: sigma_n - zp v must equal the prescribed data
        rng = np.random.default_rng(3)
        st = SolidState.zeros(grid_small, elastic=True)
        for _, a in st.fields():
            a += rng.standard_normal()
        st.s21[:] = st.s12
        nx = grid_small.nx
        trace = InterfaceTrace(v_n=np.full(nx, 0.37), v_t=np.full(nx, -0.21),
                               traction_n=np.full(nx, 1.4), traction_t=np.full(nx, 0.6))
        assign_solid_boundary_conditions(st, trace, MAT, grid_small, scheme="amp")
        g = grid_small.ghost_width
        res_n = st.s22[:, g] - MAT.zp * st.v2[:, g] - (trace.traction_n - MAT.zp * trace.v_n)
        res_t = st.s12[:, g] - MAT.zs * st.v1[:, g] - (trace.traction_t - MAT.zs * trace.v_t)
        assert np.max(np.abs(res_n)) < 1e-12
        assert np.max(np.abs(res_t)) < 1e-12

    def test_traction_assignment_for_tp(self, grid_small):
        st = SolidState.zeros(grid_small, elastic=True)
        st.v2 += 0.5
        nx = grid_small.nx
        trace = InterfaceTrace(v_n=np.zeros(nx), v_t=np.zeros(nx),
                               traction_n=np.full(nx, 2.0), traction_t=np.full(nx, -1.0))
        assign_solid_boundary_conditions(st, trace, MAT, grid_small, scheme="tp")
        g = grid_small.ghost_width
        assert np.allclose(st.s22[:, g], 2.0)
        assert np.allclose(st.s12[:, g], -1.0)
        assert np.allclose(st.s21[:, g], -1.0)
        # velocity untouched by the traction-Dirichlet coupling
        assert np.allclose(st.v2[:, g], 0.5)
