"""Exact solutions: manufactured trigonometric fields and traveling waves.

Two families are provided.

* Manufactured ("twilight-zone") trigonometric solutions: fixed closed-form
  fields for every fluid and solid component.  Substituted into the governing
  equations they define forcing functions, so the chosen fields become exact
  solutions of the forced problem.  All derivatives are computed analytically
  through a tiny trig-monomial algebra (amp * cos(2 pi x + px) *
  cos(2 pi y + py) * cos(2 pi t + pt)), which differentiates exactly.

* Traveling waves q(x,y,t) = Re[ qhat(y) e^(i(kx - omega t)) ] for the three
  model problems (inviscid/acoustic, viscous/acoustic, viscous/elastic).
  omega solves a model-specific dispersion relation W(omega, k) = 0 obtained
  as the determinant of the interface-condition matrix; the y-profiles are
  combinations of cosh/sinh satisfying the off-interface boundary conditions
  exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .domain import Geometry, InvalidInputError, MaterialParams

__all__ = [
    "TrigSolution",
    "TzForcing",
    "tz_eval",
    "tz_forcing",
    "dispersion_residual",
    "dispersion_matrix",
    "solve_dispersion",
    "build_traveling_wave",
    "eval_traveling_wave",
    "TravelingWaveSpec",
    "RootNotFoundError",
]

TWO_PI = 2.0 * np.pi
HALF_PI = 0.5 * np.pi

MODELS = ("ia", "va", "ve")


class RootNotFoundError(RuntimeError):
    """Raised when the dispersion-root search fails to converge."""


# ---------------------------------------------------------------------------
# Trig-monomial algebra for the manufactured solution
# ---------------------------------------------------------------------------

class TrigExpr:
    """Sum of terms amp*cos(2pi x + px)*cos(2pi y + py)*cos(2pi t + pt).

    Differentiation maps cos(th) -> -2pi sin(th) = 2pi cos(th + pi/2), so
    the family is closed under d/dx, d/dy, d/dt and all derivatives are
    exact.  Terms are stored as an (n, 4) array of (amp, px, py, pt).
    """

    def __init__(self, terms):
        self.terms = np.atleast_2d(np.asarray(terms, dtype=float))

    @classmethod
    def mono(cls, amp, px=0.0, py=0.0, pt=0.0):
        return cls([[amp, px, py, pt]])

    @classmethod
    def zero(cls):
        return cls(np.zeros((0, 4)))

    def _shift(self, idx):
        t = self.terms.copy()
        if len(t):
            t[:, 0] *= TWO_PI
            t[:, idx] += HALF_PI
        return TrigExpr(t)

    def dx(self):
        return self._shift(1)

    def dy(self):
        return self._shift(2)

    def dt(self):
        return self._shift(3)

    def __add__(self, other):
        return TrigExpr(np.vstack([self.terms, other.terms]))

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, c):
        t = self.terms.copy()
        if len(t):
            t[:, 0] *= c
        return TrigExpr(t)

    __rmul__ = __mul__

    def __call__(self, x, y, t):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = np.zeros(np.broadcast(x, y).shape)
        for amp, px, py, pt in self.terms:
            out += amp * np.cos(TWO_PI * x + px) * np.cos(TWO_PI * y + py) * np.cos(TWO_PI * t + pt)
        return out if out.shape else float(out)


def _cos_x():
    return 0.0


def _sin():
    # sin(th) = cos(th - pi/2)
    return -HALF_PI


class TrigSolution:
    """The manufactured trigonometric fields for fluid and solid.

    Components (functions of x, y, t):
        u1 = 0.25 cos(2pi x) cos(2pi(y+0.375)) cos(2pi t)
        u2 = 0.50 cos(2pi x) cos(2pi(y+0.375)) cos(2pi t)
        v1bar, v2bar = time derivatives of u1, u2
        s11 = -0.5 cos cos cos,  s12 = s21 = 0.4 sin cos cos,
        s22 = 0.6 cos sin cos
        p  = cos(2pi x) sin(2pi y) cos(2pi t)
        v1 = 0.5 cos cos cos,  v2 = 0.5 sin sin cos   (divergence-free)
    """

    def __init__(self):
        shift = TWO_PI * 0.375
        self.u1 = TrigExpr.mono(0.25, _cos_x(), shift, 0.0)
        self.u2 = TrigExpr.mono(0.50, _cos_x(), shift, 0.0)
        self.vb1 = self.u1.dt()
        self.vb2 = self.u2.dt()
        self.s11 = TrigExpr.mono(-0.5, 0.0, 0.0, 0.0)
        self.s12 = TrigExpr.mono(0.4, _sin(), 0.0, 0.0)
        self.s21 = TrigExpr.mono(0.4, _sin(), 0.0, 0.0)
        self.s22 = TrigExpr.mono(0.6, 0.0, _sin(), 0.0)
        self.p = TrigExpr.mono(1.0, 0.0, _sin(), 0.0)
        self.v1 = TrigExpr.mono(0.5, 0.0, 0.0, 0.0)
        self.v2 = TrigExpr.mono(0.5, _sin(), _sin(), 0.0)

    def expr(self, name):
        key = {"vb1": "vb1", "vb2": "vb2"}.get(name, name)
        if not hasattr(self, key):
            raise InvalidInputError(f"unknown component {name!r}")
        return getattr(self, key)


_TZ = TrigSolution()


def tz_eval(component, x, y, t):
    """Evaluate a manufactured-solution component at (x, y, t)."""
    return _TZ.expr(component)(x, y, t)


class TzForcing:
    """Forcing functions and boundary-data corrections for the trig solution.

    Each governing equation of the selected model problem gets a forcing so
    the trig fields solve it exactly; each boundary/interface condition gets
    an additive correction equal to (condition LHS - condition RHS) evaluated
    on the exact fields.  All expressions are exact trig algebra.
    """

    def __init__(self, model, mat: MaterialParams, geom: Geometry):
        if model not in MODELS:
            raise InvalidInputError(f"unknown model problem {model!r}")
        self.model = model
        self.mat = mat
        self.geom = geom
        z = _TZ
        rho, mu = mat.rho_f, mat.mu_f
        rb = mat.rho_s

        def lap(e):
            return e.dx().dx() + e.dy().dy()

        # fluid: rho v_t + grad p - mu lap v = f
        self.f_mom1 = rho * z.v1.dt() + z.p.dx() - mu * lap(z.v1)
        self.f_mom2 = rho * z.v2.dt() + z.p.dy() - mu * lap(z.v2)
        # pressure Poisson: lap p = src
        self.f_pressure = lap(z.p)
        self.f_continuity = z.v1.dx() + z.v2.dy()

        if model == "ve":
            lam, mus = mat.lambda_s, mat.mu_s
            self.f_sol_mom1 = rb * z.vb1.dt() - z.s11.dx() - z.s12.dy()
            self.f_sol_mom2 = rb * z.vb2.dt() - z.s21.dx() - z.s22.dy()
            div_vb = z.vb1.dx() + z.vb2.dy()
            self.f_s11 = z.s11.dt() - lam * div_vb - 2.0 * mus * z.vb1.dx()
            self.f_s22 = z.s22.dt() - lam * div_vb - 2.0 * mus * z.vb2.dy()
            self.f_s12 = z.s12.dt() - mus * (z.vb1.dy() + z.vb2.dx())
            self.f_s21 = self.f_s12
        else:
            # acoustic solid: rho_s v2_t = dx s21 + dy s22,
            # s21_t = rho_s cp^2 dx v2, s22_t = rho_s cp^2 dy v2
            rc2 = rb * mat.cp**2
            self.f_sol_mom2 = rb * z.vb2.dt() - z.s21.dx() - z.s22.dy()
            self.f_s21 = z.s21.dt() - rc2 * z.vb2.dx()
            self.f_s22 = z.s22.dt() - rc2 * z.vb2.dy()

        # viscous traction pieces on y = 0 (normal (0,1))
        self.tau12 = mu * (z.v1.dy() + z.v2.dx())
        self.tau22 = 2.0 * mu * z.v2.dy()
        # n.(curl curl v) = -dxx v2 + dxy v1
        self.curlcurl2 = z.v1.dx().dy() - z.v2.dx().dx()
        self.dpdy = z.p.dy()

    def eval(self, name, x, y, t):
        return _TZ.expr(name)(x, y, t)

    # -- interface corrections, all evaluated at y = 0 ---------------------

    def traction_exact(self, x, t):
        """Exact fluid traction components (tangential, normal) at y=0."""
        tn = -_TZ.p(x, 0.0, t) + self.tau22(x, 0.0, t)
        tt = self.tau12(x, 0.0, t)
        return tt, tn

    def solid_traction_exact(self, x, t):
        s22 = _TZ.s22(x, 0.0, t)
        s12 = _TZ.s12(x, 0.0, t) if self.model == "ve" else _TZ.s21(x, 0.0, t)
        return s12, s22

    def pressure_robin_correction(self, scheme, x, t, dt):
        """Correction to the interface pressure BC right-hand side."""
        z = _TZ
        mat = self.mat
        tt, tn = None, None
        if scheme == "amp":
            cR = mat.zp * dt / mat.rho_f
            lhs = -z.p(x, 0.0, t) - cR * self.dpdy(x, 0.0, t)
            rhs = (-self.tau22(x, 0.0, t)
                   + mat.mu_f * cR * self.curlcurl2(x, 0.0, t)
                   + z.s22(x, 0.0, t)
                   + mat.zp * dt * z.vb2.dt()(x, 0.0, t))
            return lhs - rhs
        if scheme == "tp":
            lhs = self.dpdy(x, 0.0, t)
            rhs = (-mat.rho_f * z.vb2.dt()(x, 0.0, t)
                   - mat.mu_f * self.curlcurl2(x, 0.0, t))
            return lhs - rhs
        if scheme == "at":
            lhs = z.p(x, 0.0, t)
            rhs = self.tau22(x, 0.0, t) - z.s22(x, 0.0, t)
            return lhs - rhs
        raise InvalidInputError(f"unknown scheme {scheme!r}")

    def tangential_robin_correction(self, x, t, zs):
        """AMP/AT tangential Robin: zs v1 + t.tau.n = s12 + zs vb1 (+ g)."""
        z = _TZ
        lhs = zs * z.v1(x, 0.0, t) + self.tau12(x, 0.0, t)
        s12, _ = self.solid_traction_exact(x, t)
        vb1 = z.vb1(x, 0.0, t) if self.model == "ve" else 0.0
        return lhs - (s12 + zs * vb1)

    def projection_corrections(self, x, t, z_f, beta):
        """(g_n, g_t) so the projected interface velocity of the exact fields
        equals the exact interface velocity."""
        z = _TZ
        mat = self.mat
        tt, tn = self.traction_exact(x, t)
        s12, s22 = self.solid_traction_exact(x, t)
        proj_n = (z_f * z.v2(x, 0.0, t) + mat.zp * z.vb2(x, 0.0, t)
                  + beta * (s22 - tn)) / (z_f + mat.zp)
        g_n = z.v2(x, 0.0, t) - proj_n
        if mat.zs > 0:
            vb1 = z.vb1(x, 0.0, t) if self.model == "ve" else 0.0
            proj_t = (z_f * z.v1(x, 0.0, t) + mat.zs * vb1
                      + beta * (s12 - tt)) / (z_f + mat.zs)
            g_t = z.v1(x, 0.0, t) - proj_t
        else:
            g_t = np.zeros_like(np.asarray(x, dtype=float))
        return g_n, g_t

    def solid_char_corrections(self, x, t):
        """(g_normal, g_tangential) for the incoming-characteristic solid BC."""
        z = _TZ
        mat = self.mat
        tt, tn = self.traction_exact(x, t)
        s12, s22 = self.solid_traction_exact(x, t)
        g_n = (s22 - mat.zp * z.vb2(x, 0.0, t)) - (tn - mat.zp * z.v2(x, 0.0, t))
        if self.model == "ve":
            g_t = (s12 - mat.zs * z.vb1(x, 0.0, t)) - (tt - mat.zs * z.v1(x, 0.0, t))
        else:
            g_t = np.zeros_like(np.asarray(x, dtype=float))
        return g_n, g_t

    def tp_traction_corrections(self, x, t):
        """(g_tangential, g_normal) for the traction-Dirichlet solid BC."""
        tt, tn = self.traction_exact(x, t)
        s12, s22 = self.solid_traction_exact(x, t)
        return s12 - tt, s22 - tn

    def bottom_pressure_neumann_correction(self, x, t):
        """dp/dy data correction at y=-H (base: mu*lap v2 from the scheme)."""
        z = _TZ
        yb = -self.geom.H
        lapv2 = z.v2.dx().dx()(x, yb, t) + z.v2.dy().dy()(x, yb, t)
        return self.dpdy(x, yb, t) - self.mat.mu_f * lapv2


def tz_forcing(model, equation, x, y, t, mat=None, geom=None):
    """Forcing value for one governing equation under the trig solution.

    The forced equation reads (original equation) = forcing, so the trig
    fields satisfy it exactly.  Unknown equation ids raise
    InvalidInputError.
    """
    if mat is None:
        mat = MaterialParams.from_density_ratio(1.0, mu_f=0.05)
    if geom is None:
        geom = Geometry()
    f = TzForcing(model, mat, geom)
    table = {
        "momentum1": "f_mom1",
        "momentum2": "f_mom2",
        "pressure": "f_pressure",
        "continuity": "f_continuity",
        "solid_momentum2": "f_sol_mom2",
        "solid_stress21": "f_s21",
        "solid_stress22": "f_s22",
    }
    if model == "ve":
        table.update({
            "solid_momentum1": "f_sol_mom1",
            "solid_stress11": "f_s11",
            "solid_stress12": "f_s12",
        })
    if equation not in table:
        raise InvalidInputError(f"unknown equation id {equation!r} for model {model!r}")
    return getattr(f, table[equation])(x, y, t)


# ---------------------------------------------------------------------------
# Traveling waves
# ---------------------------------------------------------------------------

def _hyper(model, omega, k, mat, geom):
    """Shared hyperbolic quantities for the dispersion matrices."""
    H, Hb = geom.H, geom.Hbar
    a = cmath.sqrt(k * k - omega**2 / mat.cp**2)
    Ck, Sk = cmath.cosh(k * H), cmath.sinh(k * H)
    Ca, Sa = cmath.cosh(a * Hb), cmath.sinh(a * Hb)
    q = {"a": a, "Ck": Ck, "Sk": Sk, "Ca": Ca, "Sa": Sa}
    if model in ("va", "ve"):
        if mat.mu_f <= 0:
            raise InvalidInputError("viscous models require mu_f > 0")
        al = cmath.sqrt(k * k - 1j * mat.rho_f * omega / mat.mu_f)
        q["al"] = al
        q["Cal"], q["Sal"] = cmath.cosh(al * H), cmath.sinh(al * H)
        q["D"] = al * q["Cal"] * Sk - k * Ck * q["Sal"]
    if model == "ve":
        b = cmath.sqrt(k * k - omega**2 / mat.cs**2)
        q["b"] = b
        q["Cb"], q["Sb"] = cmath.cosh(b * Hb), cmath.sinh(b * Hb)
        q["Dbar"] = k * k * Ca * q["Sb"] - a * b * q["Cb"] * Sa
    return q


class _Profiles:
    """Coefficient-basis y-profiles qhat(y) and their y-derivatives.

    Fluid profiles multiply (A_f, B_f) and solid profiles (A_s, B_s); each
    method returns the coefficient row so that qhat(y) = row . coeffs.
    """

    def __init__(self, model, omega, k, mat, geom):
        self.model = model
        self.omega = omega
        self.k = k
        self.mat = mat
        self.geom = geom
        self.q = _hyper(model, omega, k, mat, geom)
        self.n_fluid = 1 if model == "ia" else 2
        self.n_solid = 1 if model in ("ia", "va") else 2

    # fluid rows: coefficients of (A_f,) or (A_f, B_f)

    def v1hat(self, y):
        k, q = self.k, self.q
        if self.model == "ia":
            return np.array([1j * np.cosh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal, Sk = q["al"], q["D"], q["Sal"], q["Sk"]
        rowA = 1j * (k * Sal * np.cosh(k * y) + D * np.cosh(k * (y + self.geom.H))
                     - al * Sk * np.cosh(al * y))
        rowB = (1j * al / k) * (k * Sal * np.cosh(k * y) + D * np.cosh(al * (y + self.geom.H))
                                - al * Sk * np.cosh(al * y))
        return np.array([rowA, rowB], dtype=complex)

    def v2hat(self, y):
        k, q = self.k, self.q
        if self.model == "ia":
            return np.array([np.sinh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal, Sk = q["al"], q["D"], q["Sal"], q["Sk"]
        rowA = (k * Sal * np.sinh(k * y) + D * np.sinh(k * (y + self.geom.H))
                - k * Sk * np.sinh(al * y))
        rowB = (al * Sal * np.sinh(k * y) + D * np.sinh(al * (y + self.geom.H))
                - al * Sk * np.sinh(al * y))
        return np.array([rowA, rowB], dtype=complex)

    def dv1hat(self, y):
        k, q = self.k, self.q
        if self.model == "ia":
            return np.array([1j * k * np.sinh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal, Sk = q["al"], q["D"], q["Sal"], q["Sk"]
        rowA = 1j * (k * k * Sal * np.sinh(k * y) + k * D * np.sinh(k * (y + self.geom.H))
                     - al * al * Sk * np.sinh(al * y))
        rowB = (1j * al / k) * (k * k * Sal * np.sinh(k * y)
                                + al * D * np.sinh(al * (y + self.geom.H))
                                - al * al * Sk * np.sinh(al * y))
        return np.array([rowA, rowB], dtype=complex)

    def dv2hat(self, y):
        k, q = self.k, self.q
        if self.model == "ia":
            return np.array([k * np.cosh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal, Sk = q["al"], q["D"], q["Sal"], q["Sk"]
        rowA = (k * k * Sal * np.cosh(k * y) + k * D * np.cosh(k * (y + self.geom.H))
                - k * al * Sk * np.cosh(al * y))
        rowB = (al * k * Sal * np.cosh(k * y) + al * D * np.cosh(al * (y + self.geom.H))
                - al * al * Sk * np.cosh(al * y))
        return np.array([rowA, rowB], dtype=complex)

    def phat(self, y):
        k, q, w = self.k, self.q, self.omega
        pref = 1j * self.mat.rho_f * w / k
        if self.model == "ia":
            return np.array([pref * np.cosh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal = q["al"], q["D"], q["Sal"]
        rowA = pref * (k * Sal * np.cosh(k * y) + D * np.cosh(k * (y + self.geom.H)))
        rowB = pref * al * Sal * np.cosh(k * y)
        return np.array([rowA, rowB], dtype=complex)

    def dphat(self, y):
        k, q, w = self.k, self.q, self.omega
        pref = 1j * self.mat.rho_f * w / k
        if self.model == "ia":
            return np.array([pref * k * np.sinh(k * (y + self.geom.H))], dtype=complex)
        al, D, Sal = q["al"], q["D"], q["Sal"]
        rowA = pref * (k * k * Sal * np.sinh(k * y) + k * D * np.sinh(k * (y + self.geom.H)))
        rowB = pref * al * k * Sal * np.sinh(k * y)
        return np.array([rowA, rowB], dtype=complex)

    # solid rows: coefficients of (A_s,) or (A_s, B_s)

    def u1hat(self, y):
        if self.model != "ve":
            return np.array([0.0 * np.asarray(y, dtype=complex)])
        k, q, Hb = self.k, self.q, self.geom.Hbar
        a, b, Sa, Sb, Db = q["a"], q["b"], q["Sa"], q["Sb"], q["Dbar"]
        rowA = (-k * k * Sb * np.cosh(a * y) + Db * np.cosh(a * (y - Hb))
                + a * b * Sa * np.cosh(b * y))
        rowB = (-k * k * Sb * np.cosh(a * y) + Db * np.cosh(b * (y - Hb))
                + a * b * Sa * np.cosh(b * y))
        return np.array([rowA, rowB], dtype=complex)

    def du1hat(self, y):
        if self.model != "ve":
            return np.array([0.0 * np.asarray(y, dtype=complex)])
        k, q, Hb = self.k, self.q, self.geom.Hbar
        a, b, Sa, Sb, Db = q["a"], q["b"], q["Sa"], q["Sb"], q["Dbar"]
        rowA = (-k * k * a * Sb * np.sinh(a * y) + a * Db * np.sinh(a * (y - Hb))
                + a * b * b * Sa * np.sinh(b * y))
        rowB = (-k * k * a * Sb * np.sinh(a * y) + b * Db * np.sinh(b * (y - Hb))
                + a * b * b * Sa * np.sinh(b * y))
        return np.array([rowA, rowB], dtype=complex)

    def u2hat(self, y):
        k, q, Hb = self.k, self.q, self.geom.Hbar
        a, Sa = q["a"], q["Sa"]
        if self.model != "ve":
            return np.array([np.sinh(a * (y - Hb))], dtype=complex)
        b, Sb, Db = q["b"], q["Sb"], q["Dbar"]
        rowA = (a / (1j * k)) * (-k * k * Sb * np.sinh(a * y) + Db * np.sinh(a * (y - Hb))
                                 + k * k * Sa * np.sinh(b * y))
        rowB = (k / (1j * b)) * (-a * b * Sb * np.sinh(a * y) + Db * np.sinh(b * (y - Hb))
                                 + a * b * Sa * np.sinh(b * y))
        return np.array([rowA, rowB], dtype=complex)

    def du2hat(self, y):
        k, q, Hb = self.k, self.q, self.geom.Hbar
        a, Sa = q["a"], q["Sa"]
        if self.model != "ve":
            return np.array([a * np.cosh(a * (y - Hb))], dtype=complex)
        b, Sb, Db = q["b"], q["Sb"], q["Dbar"]
        rowA = (a / (1j * k)) * (-k * k * a * Sb * np.cosh(a * y)
                                 + a * Db * np.cosh(a * (y - Hb))
                                 + k * k * b * Sa * np.cosh(b * y))
        rowB = (k / (1j * b)) * (-a * a * b * Sb * np.cosh(a * y)
                                 + b * Db * np.cosh(b * (y - Hb))
                                 + a * b * b * Sa * np.cosh(b * y))
        return np.array([rowA, rowB], dtype=complex)


def dispersion_matrix(model, omega, k, mat, geom):
    """Interface-condition matrix M(omega, k); waves exist when det M = 0.

    Rows are the interface conditions of the model problem applied to the
    coefficient-basis profiles; columns are (A_f[, B_f], A_s[, B_s]).
    """
    if model not in MODELS:
        raise InvalidInputError(f"unknown model problem {model!r}")
    pr = _Profiles(model, omega, k, mat, geom)
    nf, ns = pr.n_fluid, pr.n_solid
    w = omega
    mu, mus, lam = mat.mu_f, mat.mu_s, mat.lambda_s
    rc2 = mat.rho_s * mat.cp**2

    def frow(rowf, rows):
        return np.concatenate([np.atleast_1d(rowf), np.atleast_1d(rows)])

    zf = np.zeros(nf, dtype=complex)
    zs = np.zeros(ns, dtype=complex)
    v1, v2, p = pr.v1hat(0.0), pr.v2hat(0.0), pr.phat(0.0)
    dv1, dv2 = pr.dv1hat(0.0), pr.dv2hat(0.0)
    u1, u2 = pr.u1hat(0.0), pr.u2hat(0.0)
    du1, du2 = pr.du1hat(0.0), pr.du2hat(0.0)

    if model == "ia":
        rows = [
            frow(v2, 1j * w * u2),                      # v2 = du2/dt
            frow(-p, -rc2 * du2),                        # -p = rc2 dy u2
        ]
    elif model == "va":
        rows = [
            frow(v1, zs),                                # v1 = 0
            frow(v2, 1j * w * u2),                       # v2 = du2/dt
            frow(-p + 2 * mu * dv2, -rc2 * du2),         # normal traction
        ]
    else:
        rows = [
            frow(v1, 1j * w * u1),                       # v1 = du1/dt
            frow(v2, 1j * w * u2),                       # v2 = du2/dt
            frow(mu * (dv1 + 1j * k * v2),               # shear traction
                 -mus * (du1 + 1j * k * u2)),
            frow(-p + 2 * mu * dv2,                      # normal traction
                 -(lam * (1j * k * u1 + du2) + 2 * mus * du2)),
        ]
    return np.array(rows, dtype=complex)


def _matrix_scale(M):
    """Hadamard-style scale for relative residuals of det M."""
    norms = np.sqrt((np.abs(M) ** 2).sum(axis=1))
    return float(np.prod(np.maximum(norms, 1e-300)))


def dispersion_residual(model, omega, k, mat, geom):
    """W(omega, k) = det of the interface-condition matrix."""
    return complex(np.linalg.det(dispersion_matrix(model, omega, k, mat, geom)))


def _newton_root(model, k, mat, geom, omega0, tol=1e-12, step_tol=1e-10, max_iter=100):
    w = complex(omega0)
    for _ in range(max_iter):
        M = dispersion_matrix(model, w, k, mat, geom)
        f = complex(np.linalg.det(M))
        scale = _matrix_scale(M)
        h = 1e-7 * (1.0 + abs(w))
        fp = (dispersion_residual(model, w + h, k, mat, geom)
              - dispersion_residual(model, w - h, k, mat, geom)) / (2.0 * h)
        if fp == 0:
            break
        dw = f / fp
        w = w - dw
        if abs(f) <= tol * scale and abs(dw) <= step_tol * (1.0 + abs(w)):
            return w
    M = dispersion_matrix(model, w, k, mat, geom)
    if abs(np.linalg.det(M)) <= 1e-9 * _matrix_scale(M):
        return w
    return None


def solve_dispersion(model, k, mat, geom, guess=None, scan_box=None,
                     n_scan=(40, 20), max_iter=100):
    """Find a complex root omega of the dispersion relation W(omega, k) = 0.

    With a guess, Newton iterates from it.  Otherwise the box
    Re in (0, 4 cp k], Im in [-5, 0.5] is scanned on an n_scan grid, local
    minima of the scaled |W| are refined by Newton, and the root with
    Re(omega) > 0 closest to the best scan minimum is returned.
    """
    if guess is not None:
        w = _newton_root(model, k, mat, geom, guess, max_iter=max_iter)
        if w is None:
            raise RootNotFoundError(f"Newton failed from guess {guess}")
        return w

    if scan_box is None:
        scan_box = (1e-3, 4.0 * mat.cp * abs(k), -5.0, 0.5)
    re0, re1, im0, im1 = scan_box
    nr, ni = n_scan
    res = np.linspace(re0, re1, nr)
    ims = np.linspace(im0, im1, ni)
    r = np.empty((nr, ni))
    for i, wr in enumerate(res):
        for j, wi in enumerate(ims):
            M = dispersion_matrix(model, complex(wr, wi), k, mat, geom)
            r[i, j] = abs(np.linalg.det(M)) / _matrix_scale(M)

    # local minima of the scan, best first
    seeds = []
    for i in range(nr):
        for j in range(ni):
            lo = r[max(i - 1, 0):i + 2, max(j - 1, 0):j + 2]
            if r[i, j] <= lo.min():
                seeds.append((r[i, j], complex(res[i], ims[j])))
    seeds.sort(key=lambda s: s[0])

    roots = []
    for _, seed in seeds[:12]:
        w = _newton_root(model, k, mat, geom, seed, max_iter=max_iter)
        if w is not None and w.real > 0:
            roots.append((abs(w - seeds[0][1]), w))
    if not roots:
        raise RootNotFoundError(
            f"no dispersion root found for model {model!r}; scan minima: "
            + ", ".join(f"{s[1]:.3f}(|W|={s[0]:.2e})" for s in seeds[:5]))
    roots.sort(key=lambda rw: rw[0])
    return roots[0][1]


@dataclass
class TravelingWaveSpec:
    """A solved traveling-wave eigenfunction for one model problem."""

    model: str
    k: float
    omega: complex
    mat: MaterialParams
    geom: Geometry
    coeffs: np.ndarray          # (A_f[, B_f], A_s[, B_s])
    u_max: float
    residual: float = 0.0
    _profiles: _Profiles = field(default=None, repr=False)

    def __post_init__(self):
        if self._profiles is None:
            self._profiles = _Profiles(self.model, self.omega, self.k,
                                       self.mat, self.geom)

    def _split(self):
        nf = self._profiles.n_fluid
        return self.coeffs[:nf], self.coeffs[nf:]

    def profile(self, component, y):
        """Complex y-profile qhat(y) of one solution component."""
        pr = self._profiles
        cf, cs = self._split()
        y = np.asarray(y, dtype=float)
        mat, k, w = self.mat, self.k, self.omega

        def fdot(rows):
            return np.tensordot(cf, rows, axes=(0, 0))

        def sdot(rows):
            return np.tensordot(cs, rows, axes=(0, 0))

        if component == "v1":
            return fdot(pr.v1hat(y))
        if component == "v2":
            return fdot(pr.v2hat(y))
        if component == "p":
            return fdot(pr.phat(y))
        if component == "dv1dy":
            return fdot(pr.dv1hat(y))
        if component == "dv2dy":
            return fdot(pr.dv2hat(y))
        if component == "dpdy":
            return fdot(pr.dphat(y))
        if component == "u1":
            return sdot(pr.u1hat(y))
        if component == "u2":
            return sdot(pr.u2hat(y))
        if component == "vb1":
            return -1j * w * sdot(pr.u1hat(y))
        if component == "vb2":
            return -1j * w * sdot(pr.u2hat(y))
        u1 = sdot(pr.u1hat(y))
        u2 = sdot(pr.u2hat(y))
        du1 = sdot(pr.du1hat(y))
        du2 = sdot(pr.du2hat(y))
        if self.model == "ve":
            lam, mus = mat.lambda_s, mat.mu_s
            if component == "s11":
                return lam * (1j * k * u1 + du2) + 2.0 * mus * 1j * k * u1
            if component == "s22":
                return lam * (1j * k * u1 + du2) + 2.0 * mus * du2
            if component in ("s12", "s21"):
                return mus * (du1 + 1j * k * u2)
        else:
            rc2 = mat.rho_s * mat.cp**2
            if component == "s21":
                return rc2 * 1j * k * u2
            if component == "s22":
                return rc2 * du2
        raise InvalidInputError(f"unknown component {component!r} for model {self.model!r}")

    def eval(self, component, x, y, t):
        """Real field value Re[qhat(y) exp(i(kx - omega t))]."""
        x = np.asarray(x, dtype=float)
        prof = self.profile(component, y)
        carrier = np.exp(1j * (self.k * x - self.omega * t))
        out = np.real(prof * carrier)
        return out if np.ndim(out) else float(out)


def build_traveling_wave(model, k, omega, mat, geom, u_max=0.1):
    """Assemble and normalize the traveling-wave coefficients at a root.

    The homogeneous interface system M c = 0 is solved with the last
    coefficient as the free constant, then the whole vector is scaled so the
    interface displacement magnitude equals u_max.
    """
    M = dispersion_matrix(model, omega, k, mat, geom)
    scale = _matrix_scale(M)
    residual = abs(np.linalg.det(M)) / max(scale, 1e-300)
    if residual > 1e-6:
        raise InvalidInputError(
            f"omega={omega} is not a dispersion root (relative residual {residual:.2e})")

    n = M.shape[0]
    if model == "ia":
        q = _hyper(model, omega, k, mat, geom)
        A_s = 1.0 + 0.0j
        A_f = 1j * omega * (q["Sa"] / q["Sk"]) * A_s
        coeffs = np.array([A_f, A_s])
    else:
        sub = M[:n - 1, :n - 1]
        rhs = -M[:n - 1, n - 1]
        if np.linalg.cond(sub) > 1e12:
            raise InvalidInputError(
                "coefficient solve nearly singular; omega is not a true root")
        head = np.linalg.solve(sub, rhs)
        coeffs = np.concatenate([head, [1.0 + 0.0j]])

    spec = TravelingWaveSpec(model=model, k=k, omega=omega, mat=mat, geom=geom,
                             coeffs=coeffs, u_max=u_max, residual=residual)
    u2_0 = spec.profile("u2", 0.0)
    if model == "ve":
        u1_0 = spec.profile("u1", 0.0)
        amp = np.sqrt(abs(u1_0) ** 2 + abs(u2_0) ** 2)
    else:
        amp = abs(u2_0)
    if amp == 0:
        raise InvalidInputError("degenerate eigenfunction with zero interface displacement")
    spec.coeffs = coeffs * (u_max / amp)
    return spec


def eval_traveling_wave(spec, component, x, y, t):
    return spec.eval(component, x, y, t)
