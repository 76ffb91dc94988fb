import numpy as np
import pytest

from fsilab.domain import Geometry, InvalidInputError, MaterialParams
from fsilab.exact import (TrigSolution, TzForcing, build_traveling_wave,
                          dispersion_matrix, dispersion_residual,
                          eval_traveling_wave, solve_dispersion, tz_eval,
                          tz_forcing, _matrix_scale)

TWO_PI = 2.0 * np.pi
K = TWO_PI


class TestTrigSolution:
    def test_spot_values(self):
        assert tz_eval("p", 0.0, 0.25, 0.0) == pytest.approx(1.0)
        assert tz_eval("u1", 0.0, 0.0, 0.0) == pytest.approx(0.25 * np.cos(0.75 * np.pi))
        # components carrying the cos(2 pi t) factor vanish at t = 1/4
        for name in ("u1", "u2", "s11", "s12", "s22", "p", "v1", "v2"):
            assert tz_eval(name, 0.3, -0.2, 0.25) == pytest.approx(0.0, abs=1e-13)

    def test_divergence_free_fluid(self):
        z = TrigSolution()
        div = z.v1.dx() + z.v2.dy()
        rng = np.random.default_rng(0)
        pts = rng.uniform(-1, 1, size=(20, 3))
        for x, y, t in pts:
            assert div(x, y, t) == pytest.approx(0.0, abs=1e-12)

    def test_derivatives_match_finite_differences(self):
        # analytic trig-algebra derivatives vs central differences
        z = TrigSolution()
        h = 1e-5
        pts = [(0.13, -0.41, 0.07), (0.6, 0.2, 0.9)]
        for name in ("u1", "s22", "p", "v2"):
            e = z.expr(name)
            for x, y, t in pts:
                fd_x = (e(x + h, y, t) - e(x - h, y, t)) / (2 * h)
                fd_y = (e(x, y + h, t) - e(x, y - h, t)) / (2 * h)
                fd_t = (e(x, y, t + h) - e(x, y, t - h)) / (2 * h)
                assert e.dx()(x, y, t) == pytest.approx(fd_x, abs=1e-8)
                assert e.dy()(x, y, t) == pytest.approx(fd_y, abs=1e-8)
                assert e.dt()(x, y, t) == pytest.approx(fd_t, abs=1e-8)

    def test_unknown_component(self):
        with pytest.raises(InvalidInputError):
            tz_eval("nope", 0, 0, 0)


class TestTzForcing:
    def test_continuity_forcing_vanishes(self):
        mat = MaterialParams.from_density_ratio(1.0, mu_f=0.05)
        assert tz_forcing("va", "continuity", 0.37, -0.21, 0.11, mat) == pytest.approx(0.0, abs=1e-12)

    def test_momentum_forcing_at_quarter_period(self):
        # at t = 1/4 the fields vanish; forcing reduces to the time-derivative part
        mat = MaterialParams.from_density_ratio(1.0, mu_f=0.05)
        x, y = 0.3, -0.5
        f = tz_forcing("va", "momentum1", x, y, 0.25, mat)
        z = TrigSolution()
        assert f == pytest.approx(mat.rho_f * z.v1.dt()(x, y, 0.25), abs=1e-12)

    def test_forced_equation_residual(self):
        # the forced fluid momentum is satisfied identically by the trig fields
        mat = MaterialParams.from_density_ratio(1.0, mu_f=0.05)
        z = TrigSolution()
        lap_v1 = z.v1.dx().dx() + z.v1.dy().dy()
        rng = np.random.default_rng(3)
        for x, y, t in rng.uniform(-1, 1, size=(10, 3)):
            lhs = mat.rho_f * z.v1.dt()(x, y, t) + z.p.dx()(x, y, t) \
                - mat.mu_f * lap_v1(x, y, t)
            assert lhs == pytest.approx(tz_forcing("va", "momentum1", x, y, t, mat), abs=1e-12)

    def test_unknown_equation(self):
        with pytest.raises(InvalidInputError):
            tz_forcing("va", "solid_momentum1", 0, 0, 0)  # acoustic model has no x-momentum


class TestDispersion:
    """Tabulated frequencies; tolerances reflect their 4-5 significant digits."""

    def setup_method(self):
        self.geom = Geometry()

    def test_inviscid_acoustic_spot_roots(self):
        mat = MaterialParams.from_density_ratio(0.1)
        for w0 in (3.36460699, 15.5134370):
            M = dispersion_matrix("ia", w0, K, mat, self.geom)
            assert abs(np.linalg.det(M)) <= 1e-8 * _matrix_scale(M)
            w = solve_dispersion("ia", K, mat, self.geom, guess=w0)
            assert w.real == pytest.approx(w0, rel=1e-6)
            assert abs(w.imag) < 1e-9

    def test_viscous_acoustic_spot_root(self):
        mat = MaterialParams.from_density_ratio(0.1, mu_f=0.02)
        w = solve_dispersion("va", K, mat, self.geom, guess=2.79 - 0.75j)
        assert w.real == pytest.approx(2.79247701, rel=1e-6)
        assert w.imag == pytest.approx(-0.746859802, rel=1e-6)

    def test_viscous_elastic_spot_root(self):
        mat = MaterialParams.from_density_ratio(0.1, mu_f=0.02)
        w = solve_dispersion("ve", K, mat, self.geom, guess=1.9 - 0.65j)
        assert w.real == pytest.approx(1.90532196, rel=1e-6)
        assert w.imag == pytest.approx(-0.652436711, rel=1e-6)

    @pytest.mark.parametrize("model,delta,table", [
        ("ia", 0.1, (15.513, 0.0)), ("ia", 1.0, (16.556, 0.0)),
        ("ia", 1000.0, (29.294, 0.0)),
        ("va", 0.1, (2.792, -0.7469)), ("va", 1.0, (8.126, -0.7261)),
        ("va", 1000.0, (12.163, -9.730e-4)),
        ("ve", 0.1, (1.905, -0.6524)), ("ve", 1.0, (5.082, -0.4619)),
        ("ve", 1000.0, (6.731, -6.365e-4)),
    ])
    def test_frequency_table(self, model, delta, table):
        mu = 0.0 if model == "ia" else 0.02
        mat = MaterialParams.from_density_ratio(delta, mu_f=mu)
        w = solve_dispersion(model, K, mat, self.geom, guess=complex(*table))
        assert w.real == pytest.approx(table[0], rel=5e-4)
        if table[1] == 0.0:
            assert abs(w.imag) <= 1e-9
        else:
            assert w.imag == pytest.approx(table[1], rel=5e-4)

    def test_scan_finds_root_without_guess(self):
        mat = MaterialParams.from_density_ratio(0.1)
        w = solve_dispersion("ia", K, mat, self.geom)
        assert abs(dispersion_residual("ia", w, K, mat, self.geom)) <= \
            1e-9 * _matrix_scale(dispersion_matrix("ia", w, K, mat, self.geom))

    def test_branch_flip_invariance(self):
        # flipping the branch a -> -a maps C_a -> C_a and S_a -> -S_a, leaving
        # the residual magnitude unchanged (only matched even/odd pairs occur)
        from fsilab.exact import _hyper
        mat = MaterialParams.from_density_ratio(0.3)
        w = 4.0 + 0.0j
        q = _hyper("ia", w, K, mat, self.geom)
        rc2 = mat.rho_s * mat.cp**2
        W_plus = rc2 * q["a"] * K * q["Sk"] * q["Ca"] - mat.rho_f * w**2 * q["Ck"] * q["Sa"]
        W_minus = rc2 * (-q["a"]) * K * q["Sk"] * q["Ca"] \
            - mat.rho_f * w**2 * q["Ck"] * (-q["Sa"])
        assert abs(W_minus) == pytest.approx(abs(W_plus), rel=1e-12)


class TestTravelingWave:
    def setup_method(self):
        self.geom = Geometry()

    def _spec(self, model, delta, guess, mu=0.02, u_max=0.1):
        mat = MaterialParams.from_density_ratio(delta, mu_f=mu)
        w = solve_dispersion(model, K, mat, self.geom, guess=guess)
        return build_traveling_wave(model, K, w, mat, self.geom, u_max)

    def test_acoustic_coefficient_identity(self):
        spec = self._spec("ia", 0.1, 15.513, mu=0.0)
        from fsilab.exact import _hyper
        q = _hyper("ia", spec.omega, K, spec.mat, self.geom)
        A_f, A_s = spec.coeffs
        assert A_f == pytest.approx(1j * spec.omega * q["Sa"] / q["Sk"] * A_s, abs=1e-12)

    @pytest.mark.parametrize("model,delta,guess", [
        ("ia", 0.1, 15.513), ("va", 1.0, 8.126 - 0.7261j), ("ve", 1.0, 5.082 - 0.4619j)])
    def test_interface_amplitude_normalization(self, model, delta, guess):
        mu = 0.0 if model == "ia" else 0.02
        spec = self._spec(model, delta, guess, mu=mu)
        u2 = spec.profile("u2", 0.0)
        if model == "ve":
            u1 = spec.profile("u1", 0.0)
            amp = np.sqrt(abs(u1) ** 2 + abs(u2) ** 2)
        else:
            amp = abs(u2)
        assert amp == pytest.approx(0.1, abs=1e-12)

    def test_wrong_omega_rejected(self):
        mat = MaterialParams.from_density_ratio(0.1)
        with pytest.raises(InvalidInputError):
            build_traveling_wave("ia", K, 5.0 + 0.0j, mat, self.geom)

    def test_periodicity_and_top_condition(self):
        spec = self._spec("ia", 0.1, 15.513, mu=0.0)
        v = eval_traveling_wave(spec, "v2", 0.2, -0.5, 0.3)
        v_shift = eval_traveling_wave(spec, "v2", 1.2, -0.5, 0.3)
        assert v_shift == pytest.approx(v, abs=1e-12)
        assert abs(spec.profile("u2", self.geom.Hbar)) < 1e-14

    def test_viscous_decay_scaling(self):
        spec = self._spec("ve", 1.0, 5.082 - 0.4619j)
        x = np.linspace(0, 1, 41)[:, None]
        y = np.linspace(-1, 0, 21)[None, :]
        # complex envelope |qhat| e^{Im(w) t}: compare over a full period of
        # the real carrier so decay is isolated from the phase
        period = TWO_PI / spec.omega.real
        a0 = np.max(np.abs(spec.profile("v2", y[0])))
        decay = np.exp(spec.omega.imag * period)
        v0 = eval_traveling_wave(spec, "v2", x, y, 0.0)
        v1 = eval_traveling_wave(spec, "v2", x, y, period)
        assert np.max(np.abs(v1)) == pytest.approx(np.max(np.abs(v0)) * decay, rel=2e-2)

    @pytest.mark.parametrize("model,delta,guess", [
        ("ia", 0.1, 15.513), ("va", 1.0, 8.126 - 0.7261j), ("ve", 1.0, 5.082 - 0.4619j)])
    def test_interface_conditions_analytically(self, model, delta, guess):
        mu = 0.0 if model == "ia" else 0.02
        spec = self._spec(model, delta, guess, mu=mu)
        mat = spec.mat
        x = np.linspace(0, 1, 64, endpoint=False)
        t = 0.13
        car = np.exp(1j * (K * x - spec.omega * t))
        ev = lambda c, y=0.0: np.real(spec.profile(c, y) * car)

        # velocity continuity (normal always; tangential for ve)
        assert np.max(np.abs(ev("v2") - ev("vb2"))) < 1e-9
        if model == "ve":
            assert np.max(np.abs(ev("v1") - ev("vb1"))) < 1e-9
        # normal traction: -p + 2 mu dv2/dy = s22
        lhs = -ev("p") + 2 * mu * ev("dv2dy")
        assert np.max(np.abs(lhs - ev("s22"))) < 1e-9
        if model == "ve":
            tau12 = mu * (ev("dv1dy") + np.real(1j * K * spec.profile("v2", 0.0) * car))
            assert np.max(np.abs(tau12 - ev("s12"))) < 1e-9

    def test_pde_residual_oracle(self):
        """Independent check: high-order finite differences of the evaluated
        wave satisfy the governing equations."""
        spec = self._spec("ve", 1.0, 5.082 - 0.4619j)
        mat = spec.mat
        h = 1e-4
        x0, y0, t0 = 0.31, -0.42, 0.17

        def d(comp, var, order=1):
            def f(s):
                args = {"x": x0, "y": y0, "t": t0}
                args[var] += s
                return eval_traveling_wave(spec, comp, args["x"], args["y"], args["t"])
            if order == 1:
                return (8 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12 * h)
            return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h)

        # fluid momentum: rho dv/dt + dp/dx = mu lap v1
        r1 = mat.rho_f * d("v1", "t") + d("p", "x") \
            - mat.mu_f * (d("v1", "x", 2) + d("v1", "y", 2))
        assert abs(r1) < 1e-6
        # incompressibility
        assert abs(d("v1", "x") + d("v2", "y")) < 1e-6
        # solid momentum: rho_s dvb1/dt = ds11/dx + ds12/dy
        r2 = mat.rho_s * d("vb1", "t") - d("s11", "x") - d("s12", "y")
        assert abs(r2) < 1e-6 * max(1.0, mat.rho_s)

    def test_assembled_matrix_near_singular_at_root(self):
        spec = self._spec("ve", 1.0, 5.082 - 0.4619j)
        M = dispersion_matrix("ve", spec.omega, K, spec.mat, self.geom)
        s = np.linalg.svd(M, compute_uv=False)
        assert s[-1] <= 1e-8 * s[0]
