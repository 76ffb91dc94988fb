"""Explicit second-order solver for the first-order elastic-wave system.

The solid occupies (0,L) x (0,Hbar) with the coupling interface at y = 0
(solid row j = 0) and a fixed wall at y = Hbar.  The unknowns are velocity
and stress (displacement is integrated along, du/dt = v); the update is a
two-stage (midpoint) predictor with characteristic-scaled fourth-difference
dissipation, giving a dissipative second-order upwind-class scheme.  A
trapezoidal corrector re-advances from the old state once interface data
has been refreshed.

Two material models are supported: the full linear elastic solid
('ve' fields u1,u2,v1,v2,s11,s12,s21,s22) and the acoustic reduction that
only carries vertical motion ('ia'/'va' fields u2,v2,s21,s22 with
stress rate rho_s cp^2 grad v2).

Interface boundary conditions are applied through the normal/tangential
characteristic pairs: the incoming combination sigma_n - z v is set from
the projected interface data while the outgoing combination from the
solid's own update is preserved.
"""

from __future__ import annotations

import numpy as np

from .domain import InterfaceTrace, InvalidInputError, SolidState
from .stencils import d0x, d0y, d4x, d4y, extrapolate_ghosts

__all__ = [
    "BlowupError",
    "ConfigurationError",
    "solid_cfl_dt",
    "advance_solid",
    "correct_solid",
    "compute_solid_acceleration",
    "assign_solid_boundary_conditions",
    "apply_solid_wall_bc",
    "solid_energy",
]

CFL_MAX = 0.9
DISSIPATION_DEFAULT = 0.1


class BlowupError(RuntimeError):
    """Raised when a state develops NaNs during stepping."""


class ConfigurationError(ValueError):
    """Raised for invalid stepping setup (e.g. CFL violation)."""


def solid_cfl_dt(mat, grid):
    """Largest dt with cp*dt*sqrt(1/dx^2 + 1/dy^2) = 1."""
    return 1.0 / (mat.cp * np.hypot(1.0 / grid.dx, 1.0 / grid.dy))


def _forcing_eval(forcing, name, grid, t):
    """Evaluate a solid forcing component on the padded grid, or 0."""
    if forcing is None:
        return 0.0
    x = grid.x[:, None]
    y = grid.y_solid(with_ghosts=True)[None, :]
    return forcing(name, x, y, t)


def _rhs(st: SolidState, mat, grid, forcing, t):
    """Centered spatial RHS for every evolved field (no dissipation).

    Valid on all columns with one y-neighbor available (1..-2).
    """
    dx, dy = grid.dx, grid.dy
    rb = mat.rho_s
    out = {"u2": st.v2.copy()}
    if st.is_elastic:
        lam, mus = mat.lambda_s, mat.mu_s
        out["u1"] = st.v1.copy()
        out["v1"] = (d0x(st.s11, dx) + d0y(st.s12, dy)) / rb
        out["v2"] = (d0x(st.s21, dx) + d0y(st.s22, dy)) / rb
        dxv1, dyv1 = d0x(st.v1, dx), d0y(st.v1, dy)
        dxv2, dyv2 = d0x(st.v2, dx), d0y(st.v2, dy)
        out["s11"] = (lam + 2.0 * mus) * dxv1 + lam * dyv2
        out["s22"] = lam * dxv1 + (lam + 2.0 * mus) * dyv2
        out["s12"] = mus * (dyv1 + dxv2)
        out["s21"] = out["s12"].copy()
    else:
        rc2 = rb * mat.cp**2
        out["v2"] = (d0x(st.s21, dx) + d0y(st.s22, dy)) / rb
        out["s21"] = rc2 * d0x(st.v2, dx)
        out["s22"] = rc2 * d0y(st.v2, dy)
    if forcing is not None:
        out["v2"] = out["v2"] + _forcing_eval(forcing, "solid_momentum2", grid, t) / rb
        out["s21"] = out["s21"] + _forcing_eval(forcing, "solid_stress21", grid, t)
        out["s22"] = out["s22"] + _forcing_eval(forcing, "solid_stress22", grid, t)
        if st.is_elastic:
            out["v1"] = out["v1"] + _forcing_eval(forcing, "solid_momentum1", grid, t) / rb
            out["s11"] = out["s11"] + _forcing_eval(forcing, "solid_stress11", grid, t)
            out["s12"] = out["s12"] + _forcing_eval(forcing, "solid_stress12", grid, t)
    return out


def _dissipation(st: SolidState, mat, grid, coeff):
    """Characteristic-scaled fourth-difference dissipation for v and sigma.

    -coeff*(cp/dx) d4x q - coeff*(cp/dy) d4y q with undivided differences:
    O(h^3) consistent, damps the marginal modes of the two-stage update.
    """
    if coeff == 0.0:
        return {}
    cx, cy = coeff * mat.cp / grid.dx, coeff * mat.cp / grid.dy
    out = {}
    for name, arr in st.fields():
        if name.startswith("u"):
            continue
        out[name] = -cx * d4x(arr) - cy * d4y(arr)
    return out


def _check_cfl(dt, mat, grid):
    if mat.cp * dt * np.hypot(1.0 / grid.dx, 1.0 / grid.dy) > CFL_MAX + 1e-12:
        raise ConfigurationError(
            f"solid CFL violated: cp*dt*|1/h| = "
            f"{mat.cp * dt * np.hypot(1.0 / grid.dx, 1.0 / grid.dy):.3f} > {CFL_MAX}")


def advance_solid(state: SolidState, dt, mat, grid, forcing=None,
                  dissipation=DISSIPATION_DEFAULT, mms=None, wall_bc=True,
                  return_aux=False):
    """One predictor step (midpoint stage + lagged dissipation).

    Interior, boundary and interface rows are advanced using current ghost
    values; the fixed-wall condition at y = Hbar is reapplied.  Ghost rows
    at the interface keep their previous values until the boundary
    assignment stage runs.  With return_aux the (rhs, dissipation) of the
    input state are returned for reuse by the corrector.
    """
    _check_cfl(dt, mat, grid)
    g = grid.ghost_width
    phys = slice(g, g + grid.ny_s + 1)
    inner = slice(1, -1)

    r1 = _rhs(state, mat, grid, forcing, state.t)
    mid = state.copy()
    for name, arr in mid.fields():
        arr[:, inner] += 0.5 * dt * r1[name][:, inner]
    mid.t = state.t + 0.5 * dt

    r2 = _rhs(mid, mat, grid, forcing, mid.t)
    dis = _dissipation(state, mat, grid, dissipation)
    new = state.copy()
    for name, arr in new.fields():
        arr[:, phys] += dt * r2[name][:, phys]
        if name in dis:
            arr[:, phys] += dt * dis[name][:, phys]
    new.t = state.t + dt
    if not np.isfinite(new.v2[:, phys]).all():
        raise BlowupError("solid state lost finiteness during advance")
    if wall_bc:
        apply_solid_wall_bc(new, grid, mms=mms)
    if return_aux:
        return new, (r1, dis)
    return new


def correct_solid(predicted: SolidState, previous: SolidState, dt, mat, grid,
                  forcing=None, dissipation=DISSIPATION_DEFAULT, mms=None,
                  wall_bc=True, rhs_old=None, dis_old=None):
    """Trapezoidal correction using predicted and old right-hand sides.

    rhs_old/dis_old allow reuse of quantities already evaluated on the
    previous state during the predictor.
    """
    g = grid.ghost_width
    phys = slice(g, g + grid.ny_s + 1)
    r_old = rhs_old if rhs_old is not None else _rhs(previous, mat, grid, forcing, previous.t)
    r_new = _rhs(predicted, mat, grid, forcing, predicted.t)
    d_old = dis_old if dis_old is not None else _dissipation(previous, mat, grid, dissipation)
    d_new = _dissipation(predicted, mat, grid, dissipation)
    new = previous.copy()
    for name, arr in new.fields():
        arr[:, phys] += 0.5 * dt * (r_old[name][:, phys] + r_new[name][:, phys])
        if name in d_old:
            arr[:, phys] += 0.5 * dt * (d_old[name][:, phys] + d_new[name][:, phys])
    new.t = previous.t + dt
    if not np.isfinite(new.v2[:, phys]).all():
        raise BlowupError("solid state lost finiteness during correction")
    if wall_bc:
        apply_solid_wall_bc(new, grid, mms=mms)
    return new


def compute_solid_acceleration(v_new, v_old, dt):
    """(v_new - v_old)/dt: second-order acceleration when inputs straddle
    the evaluation time."""
    return (np.asarray(v_new) - np.asarray(v_old)) / dt


def apply_solid_wall_bc(state: SolidState, grid, mms=None):
    """Fixed wall u = 0 (hence v = 0) at y = Hbar.

    Displacement and velocity reflect oddly about the wall, stresses evenly;
    with manufactured solutions the wall values and ghosts are the exact
    fields instead.
    """
    g = grid.ghost_width
    top = g + grid.ny_s
    if mms is not None:
        x = grid.x[:, None]
        yg = grid.y_solid(with_ghosts=True)[None, :]
        cols = [top, top + 1, top + 2]
        exact_name = {"v1": "vb1", "v2": "vb2"}
        for name, arr in state.fields():
            vals = mms.eval(exact_name.get(name, name), x, yg[:, cols], state.t)
            arr[:, cols] = vals
        return
    for name, arr in state.fields():
        if name.startswith(("u", "v")):
            arr[:, top] = 0.0
        extrapolate_ghosts(arr, top, side=1, n_ghost=grid.ghost_width)


def assign_solid_boundary_conditions(state: SolidState, trace: InterfaceTrace,
                                     mat, grid, scheme="amp", mms=None):
    """Impose interface data on the solid and refresh interface-side ghosts.

    amp/at: the incoming characteristics are set from the interface data,
        sigma_n - z v = traction_I - z v_I  (normal with zp; tangential with
        zs for the elastic solid), while the outgoing combinations from the
        solid's own update are preserved.
    tp: the interface traction components are assigned directly (Neumann
        coupling); the boundary velocity is left to the solid's update.

    Ghost rows below the interface are filled by cubic extrapolation.
    """
    g = grid.ghost_width
    s0 = g  # interface column
    zp = mat.zp
    x = grid.x

    g_n = g_t = 0.0
    if mms is not None:
        g_n, g_t = mms.solid_char_corrections(x, state.t)

    if scheme == "tp":
        gt_tp = gn_tp = 0.0
        if mms is not None:
            gt_tp, gn_tp = mms.tp_traction_corrections(x, state.t)
        state.s22[:, s0] = trace.traction_n + gn_tp
        if state.is_elastic:
            state.s12[:, s0] = trace.traction_t + gt_tp
            state.s21[:, s0] = state.s12[:, s0]
    elif scheme in ("amp", "at"):
        data_n = trace.traction_n - zp * trace.v_n + g_n
        b_out = state.s22[:, s0] + zp * state.v2[:, s0]
        state.s22[:, s0] = 0.5 * (b_out + data_n)
        state.v2[:, s0] = (b_out - data_n) / (2.0 * zp)
        if state.is_elastic:
            zs = mat.zs
            if zs <= 0:
                raise InvalidInputError("elastic interface needs zs > 0")
            data_t = trace.traction_t - zs * trace.v_t + g_t
            b_out_t = state.s12[:, s0] + zs * state.v1[:, s0]
            state.s12[:, s0] = 0.5 * (b_out_t + data_t)
            state.v1[:, s0] = (b_out_t - data_t) / (2.0 * zs)
            state.s21[:, s0] = state.s12[:, s0]
    else:
        raise InvalidInputError(f"unknown scheme {scheme!r}")

    for _, arr in state.fields():
        extrapolate_ghosts(arr, s0, side=-1, n_ghost=grid.ghost_width)
    return state


def solid_energy(state: SolidState, mat, grid):
    """Quadratic energy 1/2 rho |v|^2 + 1/2 sigma : C^-1 sigma over physical rows.

    For the acoustic model the stress energy is |s22|^2/(2 rho cp^2) plus the
    passive shear component.
    """
    g = grid.ghost_width
    phys = slice(g, g + grid.ny_s + 1)
    w = grid.dx * grid.dy
    if state.is_elastic:
        lam, mus = mat.lambda_s, mat.mu_s
        s11 = state.s11[:, phys]
        s22 = state.s22[:, phys]
        s12 = 0.5 * (state.s12[:, phys] + state.s21[:, phys])
        tr = s11 + s22
        stress = (s11**2 + s22**2 + 2.0 * s12**2
                  - lam / (2.0 * (lam + mus)) * tr**2) / (4.0 * mus)
        kinetic = 0.5 * mat.rho_s * (state.v1[:, phys] ** 2 + state.v2[:, phys] ** 2)
    else:
        rc2 = mat.rho_s * mat.cp**2
        stress = (state.s22[:, phys] ** 2 + state.s21[:, phys] ** 2) / (2.0 * rc2)
        kinetic = 0.5 * mat.rho_s * state.v2[:, phys] ** 2
    return float(np.sum(kinetic + stress) * w)
