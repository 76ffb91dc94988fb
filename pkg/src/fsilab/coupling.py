"""Partitioned FSI time stepping: one step = solid advance, fluid advance,
pressure solve, interface projection, and boundary assignments in a fixed
stage order, optionally followed by one corrector pass.

Scheme variants:
  amp: the solid's outgoing characteristic data enters the fluid through
       mixed (Robin) velocity/pressure conditions; the interface velocity
       is an impedance-weighted average of fluid and solid values and is
       handed to both sides.
  tp:  traditional velocity-from-solid / traction-from-fluid coupling,
       one pass, no sub-iterations.
  at:  anti-traditional coupling with the roles reversed.

Predictor stages: (1) advance solid; (2a) advance fluid velocity;
(2b) extrapolate pressure in time, project the interface velocity without
traction terms, assign fluid velocity BCs; (3a) solid acceleration +
pressure solve; (3b) re-project with traction terms, reassign fluid BCs,
assign solid BCs.  The optional corrector (4-7) repeats solid/fluid
updates from the old state using predicted right-hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact as exact_mod
from .domain import (FluidState, Geometry, GridPair, InterfaceTrace,
                     InvalidInputError, MaterialParams, SolidState,
                     fluid_impedance)
from .fluid import (FluidScheme, PressureSolver, advance_fluid_ab2,
                    assign_fluid_velocity_bcs, correct_fluid_trapezoidal,
                    divergence, extrapolate_pressure_in_time,
                    solve_pressure_poisson, viscous_dt_limit, viscous_traction)
from .solid import (BlowupError, advance_solid, assign_solid_boundary_conditions,
                    compute_solid_acceleration, correct_solid, solid_cfl_dt)

__all__ = [
    "CouplingScheme",
    "StepReport",
    "SimulationConfig",
    "Simulation",
    "fsi_step",
    "run_simulation",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class CouplingScheme:
    """Coupling variant plus interface-velocity weighting policy."""

    variant: str = "amp"
    gamma_policy: str = "impedance"   # 'impedance' or 'fixed'
    gamma: float = 0.5

    def __post_init__(self):
        if self.variant not in ("amp", "tp", "at"):
            raise InvalidInputError(f"unknown coupling variant {self.variant!r}")
        if self.gamma_policy not in ("impedance", "fixed"):
            raise InvalidInputError(f"unknown gamma policy {self.gamma_policy!r}")
        if not 0.0 <= self.gamma <= 2.0:
            raise InvalidInputError("fixed gamma must lie in [0, 2]")


@dataclass
class StepReport:
    t: float
    max_fluid_v: float
    max_fluid_p: float
    max_solid_v: float
    max_solid_s: float
    div_norm: float
    blowup: bool = False

    def max_norm(self):
        return max(self.max_fluid_v, self.max_fluid_p, self.max_solid_v,
                   self.max_solid_s)


@dataclass
class SimulationConfig:
    """Everything needed to reproduce one run deterministically."""

    model: str = "ve"
    scheme: str = "amp"
    delta: float = 1.0
    mu: float = 0.02
    L: float = 1.0
    H: float = 1.0
    Hbar: float = 0.5
    grid_index: int = 1          # h = 1/(20 j)
    nx: int | None = None        # explicit override of the cell count
    cfl: float = 0.8
    t_final: float = 0.3
    exact: str = "tw"            # 'tw' | 'tz' | 'none'
    k: float = TWO_PI
    omega: complex | None = None
    omega_guess: complex | None = None
    u_max: float = 0.1
    use_corrector: bool = True
    dissipation: float | None = None
    c_div: float = 0.1
    bottom_pressure: str = "neumann"
    gamma_policy: str = "impedance"
    gamma: float = 0.5
    blowup_threshold: float = 1e6
    max_steps: int | None = None
    solid_dissipation: float = 0.1
    dt_cap: float | None = None    # extra step-size ceiling (e.g. dt ~ h series)

    def spacing(self):
        if self.nx is not None:
            return self.L / self.nx
        return 1.0 / (20.0 * self.grid_index)

    def validate(self):
        if self.model not in ("ia", "va", "ve"):
            raise InvalidInputError(f"unknown model {self.model!r}")
        if self.delta <= 0 or self.cfl <= 0 or self.t_final < 0:
            raise InvalidInputError("delta, cfl must be positive; t_final >= 0")
        if self.model != "ia" and self.mu <= 0:
            raise InvalidInputError("viscous models require mu > 0")
        CouplingScheme(self.scheme, self.gamma_policy, self.gamma)
        return self


def _project_rows(v1_b, v2_b, solid_vt, solid_vn, solid_tt, solid_tn,
                  fluid_tt, fluid_tn, mat, z_f, beta, scheme: CouplingScheme,
                  mms=None, x=None, t=None):
    """Impedance-weighted interface velocity rows (normal, tangential)."""
    if scheme.gamma_policy == "fixed":
        gn = gt = scheme.gamma
    else:
        gn = z_f / (z_f + mat.zp)
        gt = z_f / (z_f + mat.zs) if mat.zs > 0 else 1.0
    vn = gn * v2_b + (1.0 - gn) * solid_vn
    vn = vn + beta * (1.0 - gn) / mat.zp * (solid_tn - fluid_tn)
    if mat.zs > 0:
        vt = gt * v1_b + (1.0 - gt) * solid_vt
        vt = vt + beta * (1.0 - gt) / mat.zs * (solid_tt - fluid_tt)
    else:
        vt = v1_b.copy()
    if mms is not None:
        gn_c, gt_c = mms.projection_corrections(x, t, z_f, beta)
        vn = vn + gn_c
        vt = vt + gt_c
    return vn, vt


class Simulation:
    """Owns the grids, material, exact solution/forcing, and state history."""

    def __init__(self, config: SimulationConfig):
        config.validate()
        self.config = config
        self.geom = Geometry(L=config.L, H=config.H, Hbar=config.Hbar)
        self.grid = GridPair.from_spacing(self.geom, config.spacing())
        mu = 0.0 if config.model == "ia" else config.mu
        self.mat = MaterialParams.from_density_ratio(config.delta, mu_f=mu)
        self.scheme = CouplingScheme(config.scheme, config.gamma_policy, config.gamma)
        self.fluid_scheme = FluidScheme.for_model(
            config.model, config.scheme, mu,
            bottom_pressure=config.bottom_pressure,
            dissipation=config.dissipation, div_damping=config.c_div)
        self.dt = self._choose_dt()
        self.pressure_solver = PressureSolver(self.grid)
        self.z_f = fluid_impedance(self.mat, self.grid.dy, self.dt)

        self.exact = None
        self.mms = None
        self.forcing = None
        if config.exact == "tw":
            omega = config.omega
            if omega is None:
                omega = exact_mod.solve_dispersion(
                    config.model, config.k, self.mat, self.geom,
                    guess=config.omega_guess)
            self.exact = exact_mod.build_traveling_wave(
                config.model, config.k, omega, self.mat, self.geom, config.u_max)
        elif config.exact == "tz":
            self.mms = exact_mod.TzForcing(config.model, self.mat, self.geom)
            self.forcing = self._tz_forcing_callable(self.mms)
        elif config.exact != "none":
            raise InvalidInputError(f"unknown exact-solution selector {config.exact!r}")

        self.fluid = self._initial_fluid()
        self.solid = self._initial_solid()
        self.fluid_prev = None        # state at t_{n-2}
        self._p_old2 = None           # pressure at t_{n-2}
        self._p_old3 = None           # pressure at t_{n-3}
        self.initial_norm = max(self.fluid.max_norm(), self.solid.max_norm())
        self.reports: list[StepReport] = []
        self.step_count = 0

    # -- setup ----------------------------------------------------------

    def _choose_dt(self):
        c = self.config
        dt = c.cfl * min(solid_cfl_dt(self.mat, self.grid),
                         viscous_dt_limit(self.mat, self.grid))
        if c.dt_cap is not None:
            dt = min(dt, c.dt_cap)
        if c.t_final > 0:
            n = max(1, int(np.ceil(c.t_final / dt - 1e-12)))
            dt = c.t_final / n
        return dt

    @staticmethod
    def _tz_forcing_callable(mms):
        names = {
            "momentum1": mms.f_mom1, "momentum2": mms.f_mom2,
            "pressure": mms.f_pressure,
            "solid_momentum2": mms.f_sol_mom2,
            "solid_stress21": mms.f_s21, "solid_stress22": mms.f_s22,
        }
        if mms.model == "ve":
            names.update({"solid_momentum1": mms.f_sol_mom1,
                          "solid_stress11": mms.f_s11,
                          "solid_stress12": mms.f_s12})
        def forcing(name, x, y, t):
            return names[name](x, y, t)
        return forcing

    def _eval_exact(self, name, x, y, t):
        if self.exact is not None:
            return self.exact.eval(name, x, y, t)
        if self.mms is not None:
            return self.mms.eval(name, x, y, t)
        return np.zeros(np.broadcast(x, y).shape)

    def _initial_fluid(self):
        st = FluidState.zeros(self.grid)
        if self.exact is not None or self.mms is not None:
            x = self.grid.x[:, None]
            y = self.grid.y_fluid(with_ghosts=True)[None, :]
            st.v1[:] = self._eval_exact("v1", x, y, 0.0)
            st.v2[:] = self._eval_exact("v2", x, y, 0.0)
            st.p[:] = self._eval_exact("p", x, y, 0.0)
        return st

    def _initial_solid(self):
        st = SolidState.zeros(self.grid, elastic=(self.config.model == "ve"))
        if self.exact is not None or self.mms is not None:
            x = self.grid.x[:, None]
            y = self.grid.y_solid(with_ghosts=True)[None, :]
            st.u2[:] = self._eval_exact("u2", x, y, 0.0)
            st.v2[:] = self._eval_exact("vb2", x, y, 0.0)
            st.s21[:] = self._eval_exact("s21", x, y, 0.0)
            st.s22[:] = self._eval_exact("s22", x, y, 0.0)
            if st.is_elastic:
                st.u1[:] = self._eval_exact("u1", x, y, 0.0)
                st.v1[:] = self._eval_exact("vb1", x, y, 0.0)
                st.s11[:] = self._eval_exact("s11", x, y, 0.0)
                st.s12[:] = self._eval_exact("s12", x, y, 0.0)
        return st

    # -- stepping ---------------------------------------------------------

    def _solid_rows(self, solid: SolidState):
        s0 = self.grid.ghost_width
        vn = solid.v2[:, s0]
        tn = solid.s22[:, s0]
        if solid.is_elastic:
            vt = solid.v1[:, s0]
            tt = solid.s12[:, s0]
        else:
            vt = np.zeros(self.grid.nx)
            tt = solid.s21[:, s0]
        return vt, vn, tt, tn

    def _assign_fluid(self, state, p, solid, old_state):
        vt, vn, tt, tn = self._solid_rows(solid)
        return assign_fluid_velocity_bcs(
            state, p, vt, vn, tt, tn, self.mat, self.grid, self.dt,
            self.fluid_scheme, old_state, forcing=self.forcing, mms=self.mms)

    def _solid_trace(self, state, p, solid, fluid_trace):
        """Interface data handed to the solid: projected velocity (amp) or
        the fluid's own boundary values (at), with the fluid traction."""
        if self.scheme.variant == "at":
            return fluid_trace
        vI_n, vI_t = self._project(
            state, p, solid, beta=1.0,
            fluid_traction=(fluid_trace.traction_t, fluid_trace.traction_n))
        return InterfaceTrace(v_n=vI_n, v_t=vI_t,
                              traction_n=fluid_trace.traction_n,
                              traction_t=fluid_trace.traction_t)

    def _project(self, state, p, solid, beta, fluid_traction=None):
        jf = self.grid.ghost_width + self.grid.ny_f
        vt, vn, tt, tn = self._solid_rows(solid)
        if fluid_traction is None:
            f_tt = np.zeros(self.grid.nx)
            f_tn = np.zeros(self.grid.nx)
        else:
            f_tt, f_tn = fluid_traction
        return _project_rows(state.v1[:, jf], state.v2[:, jf], vt, vn, tt, tn,
                             f_tt, f_tn, self.mat, self.z_f, beta, self.scheme,
                             mms=self.mms, x=self.grid.x, t=state.t)

    def _pressure(self, state, solid, solid_old):
        s0 = self.grid.ghost_width
        acc_n = compute_solid_acceleration(solid.v2[:, s0], solid_old.v2[:, s0],
                                           self.dt)
        return solve_pressure_poisson(
            self.pressure_solver, state.v1, state.v2, self.mat, self.grid,
            self.dt, self.fluid_scheme, solid.s22[:, s0], acc_n,
            forcing=self.forcing, mms=self.mms, t=state.t)

    def step(self):
        """Advance the coupled system by one dt; returns a StepReport."""
        cfg = self.config
        grid = self.grid
        dt = self.dt
        f_old = self.fluid
        s_old = self.solid
        variant = self.scheme.variant

        # Stage 1: solid predictor
        s_p, s_aux = advance_solid(s_old, dt, self.mat, grid, forcing=self.forcing,
                                   dissipation=cfg.solid_dissipation, mms=self.mms,
                                   return_aux=True)
        if variant == "tp":
            tt_old, tn_old = viscous_traction(f_old.v1, f_old.v2, f_old.p,
                                              self.mat, grid)
            jf = grid.ghost_width + grid.ny_f
            trace_tp = InterfaceTrace(v_n=f_old.v2[:, jf].copy(),
                                      v_t=f_old.v1[:, jf].copy(),
                                      traction_n=tn_old, traction_t=tt_old)
            assign_solid_boundary_conditions(s_p, trace_tp, self.mat, grid,
                                             scheme="tp", mms=self.mms)

        # Stage 2(a): fluid velocity predictor
        f_p, L_old = advance_fluid_ab2(f_old, self.fluid_prev, dt, self.mat, grid,
                                       forcing=self.forcing,
                                       dissipation=self.fluid_scheme.dissipation,
                                       return_aux=True)

        # Stage 2(b): extrapolated pressure, traction-free projection, BCs
        p_e = extrapolate_pressure_in_time(f_old.p, self._p_old2, self._p_old3)
        self._project(f_p, p_e, s_p, beta=0.0)
        self._assign_fluid(f_p, p_e, s_p, f_old)

        # Stage 3(a): pressure solve with the scheme's interface condition
        p_p = self._pressure(f_p, s_p, s_old)

        # Stage 3(b): reassign fluid BCs, project with tractions, solid BCs
        trace = self._assign_fluid(f_p, p_p, s_p, f_old)
        if variant in ("amp", "at"):
            solid_data = self._solid_trace(f_p, p_p, s_p, trace)
            assign_solid_boundary_conditions(s_p, solid_data, self.mat, grid,
                                             scheme=variant, mms=self.mms)

        use_corr = cfg.use_corrector or self.fluid_prev is None
        if use_corr:
            # Stage 4: solid corrector
            s_n = correct_solid(s_p, s_old, dt, self.mat, grid,
                                forcing=self.forcing,
                                dissipation=cfg.solid_dissipation, mms=self.mms,
                                rhs_old=s_aux[0], dis_old=s_aux[1])
            if variant == "tp":
                tt_p, tn_p = viscous_traction(f_p.v1, f_p.v2, p_p, self.mat, grid)
                jf = grid.ghost_width + grid.ny_f
                trace_tp = InterfaceTrace(v_n=f_p.v2[:, jf].copy(),
                                          v_t=f_p.v1[:, jf].copy(),
                                          traction_n=tn_p, traction_t=tt_p)
                assign_solid_boundary_conditions(s_n, trace_tp, self.mat, grid,
                                                 scheme="tp", mms=self.mms)

            # Stage 5: fluid corrector and BCs with predicted pressure
            f_n = correct_fluid_trapezoidal(f_p, p_p, f_old, dt, self.mat, grid,
                                            forcing=self.forcing,
                                            dissipation=self.fluid_scheme.dissipation,
                                            L_old=L_old)
            self._assign_fluid(f_n, p_p, s_n, f_old)

            # Stage 6: corrected pressure
            p_n = self._pressure(f_n, s_n, s_old)

            # Stage 7: final projection and boundary assignments
            trace = self._assign_fluid(f_n, p_n, s_n, f_old)
            if variant in ("amp", "at"):
                solid_data = self._solid_trace(f_n, p_n, s_n, trace)
                assign_solid_boundary_conditions(s_n, solid_data, self.mat, grid,
                                                 scheme=variant, mms=self.mms)
        else:
            f_n, p_n, s_n = f_p, p_p, s_p

        f_n.p = p_n
        self._p_old3 = self._p_old2
        self._p_old2 = f_old.p
        self.fluid_prev = f_old
        self.fluid = f_n
        self.solid = s_n
        self.step_count += 1
        self.last_trace = trace
        return self._report(trace)

    def _report(self, trace):
        g = self.grid.ghost_width
        physf = slice(g, g + self.grid.ny_f + 1)
        physs = slice(g, g + self.grid.ny_s + 1)
        fl, so = self.fluid, self.solid
        max_v = max(np.max(np.abs(fl.v1[:, physf])), np.max(np.abs(fl.v2[:, physf])))
        max_p = np.max(np.abs(fl.p[:, physf]))
        max_sv = max(np.max(np.abs(a[:, physs])) for n, a in so.fields() if n.startswith("v"))
        max_ss = max(np.max(np.abs(a[:, physs])) for n, a in so.fields() if n.startswith("s"))
        div = np.max(np.abs(divergence(fl.v1, fl.v2, self.grid)))
        vals = [max_v, max_p, max_sv, max_ss]
        blow = (not all(np.isfinite(vals))) or (
            max(vals) > self.config.blowup_threshold * (self.initial_norm + 1.0))
        return StepReport(t=self.fluid.t, max_fluid_v=float(max_v),
                          max_fluid_p=float(max_p), max_solid_v=float(max_sv),
                          max_solid_s=float(max_ss), div_norm=float(div),
                          blowup=bool(blow))

    def run(self):
        """Step to t_final (or max_steps); stops early on blowup."""
        cfg = self.config
        if cfg.t_final <= 0:
            return self.reports
        n = int(round(cfg.t_final / self.dt))
        if cfg.max_steps is not None:
            n = min(n, cfg.max_steps)
        for _ in range(n):
            try:
                rep = self.step()
            except BlowupError:
                rep = StepReport(t=self.fluid.t + self.dt, max_fluid_v=np.inf,
                                 max_fluid_p=np.inf, max_solid_v=np.inf,
                                 max_solid_s=np.inf, div_norm=np.inf, blowup=True)
            self.reports.append(rep)
            if rep.blowup:
                break
        return self.reports


def fsi_step(sim: Simulation):
    """Advance one coupled step of an existing Simulation (functional form)."""
    return sim.step()


def run_simulation(config: SimulationConfig):
    """Run a configured simulation; returns (reports, final Simulation)."""
    sim = Simulation(config)
    reports = sim.run()
    return reports, sim
