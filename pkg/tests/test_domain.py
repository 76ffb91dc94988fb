import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsilab.domain import (InvalidInputError, MaterialParams, char_incoming,
                           char_outgoing, fluid_impedance,
                           impedance_weighted_velocity)

N_UP = np.array([0.0, 1.0])
T_X = np.array([1.0, 0.0])


def finite_floats(lo=-10.0, hi=10.0):
    return st.floats(min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False)


class TestMaterialParams:
    def test_derived_quantities(self):
        mat = MaterialParams(rho_f=1.0, mu_f=0.0, rho_s=2.0, lambda_s=3.0, mu_s=1.5)
        assert mat.cp == pytest.approx(np.sqrt(6.0 / 2.0))
        assert mat.cs == pytest.approx(np.sqrt(1.5 / 2.0))
        assert mat.zp == pytest.approx(2.0 * mat.cp)
        assert mat.zs == pytest.approx(2.0 * mat.cs)
        assert mat.cp >= mat.cs >= 0.0

    def test_model_problem_material(self):
        mat = MaterialParams.from_density_ratio(1000.0)
        assert mat.rho_s == mat.lambda_s == mat.mu_s == 1000.0
        assert mat.cp == pytest.approx(np.sqrt(3.0))

    @pytest.mark.parametrize("kw", [
        dict(rho_f=0.0, mu_f=0.0, rho_s=1.0, lambda_s=1.0, mu_s=1.0),
        dict(rho_f=1.0, mu_f=-1.0, rho_s=1.0, lambda_s=1.0, mu_s=1.0),
        dict(rho_f=1.0, mu_f=0.0, rho_s=1.0, lambda_s=-3.0, mu_s=1.0),
    ])
    def test_invalid_parameters(self, kw):
        with pytest.raises(InvalidInputError):
            MaterialParams(**kw)


class TestCharacteristics:
    def setup_method(self):
        self.mat = MaterialParams(rho_f=1.0, mu_f=0.0, rho_s=1.0,
                                  lambda_s=2.0, mu_s=1.0)  # zp = 2, zs = 1

    def test_zero_state(self):
        assert char_outgoing([0, 0], [0, 0], N_UP, [T_X], self.mat) == (0, 0, 0)
        assert char_incoming([0, 0], [0, 0], N_UP, [T_X], self.mat) == (0, 0, 0)

    def test_direct_substitution(self):
        # sigma.n = (0,1), v = (0,1), zp = 2: B = 1 + 2, A = 1 - 2
        B, _, _ = char_outgoing([0, 1], [0, 1], N_UP, [T_X], self.mat)
        A, _, _ = char_incoming([0, 1], [0, 1], N_UP, [T_X], self.mat)
        assert B == pytest.approx(3.0)
        assert A == pytest.approx(-1.0)

    def test_non_unit_normal_rejected(self):
        with pytest.raises(InvalidInputError):
            char_outgoing([0, 1], [0, 1], [0, 1.1], [T_X], self.mat)
        with pytest.raises(InvalidInputError):
            char_outgoing([0, 1], [0, 1], N_UP, [[1.0, 0.1]], self.mat)

    @given(sn=st.tuples(finite_floats(), finite_floats()),
           v=st.tuples(finite_floats(), finite_floats()),
           angle=finite_floats(0.0, 2 * np.pi))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_identities(self, sn, v, angle):
        n = np.array([np.sin(angle), np.cos(angle)])
        tvec = np.array([np.cos(angle), -np.sin(angle)])
        B, B1, _ = char_outgoing(sn, v, n, [tvec], self.mat)
        A, A1, _ = char_incoming(sn, v, n, [tvec], self.mat)
        sn = np.asarray(sn, dtype=float)
        v = np.asarray(v, dtype=float)
        # B - A = 2 zp n.v and reconstruction of the normal pieces
        assert B - A == pytest.approx(2.0 * self.mat.zp * (n @ v), abs=1e-12)
        assert (A + B) / 2 == pytest.approx(n @ sn, abs=1e-12)
        assert (B - A) / (2 * self.mat.zp) == pytest.approx(n @ v, abs=1e-12)
        assert B1 - A1 == pytest.approx(2.0 * self.mat.zs * (tvec @ v), abs=1e-12)


class TestImpedanceWeightedVelocity:
    def setup_method(self):
        self.mat = MaterialParams(rho_f=1.0, mu_f=0.0, rho_s=1.0,
                                  lambda_s=2.0, mu_s=1.0)

    @given(w=st.tuples(finite_floats(), finite_floats()),
           z_f=finite_floats(0.1, 100.0), beta=st.sampled_from([0.0, 1.0]))
    @settings(max_examples=40, deadline=None)
    def test_matched_state_is_fixed_point(self, w, z_f, beta):
        tr = np.array([0.3, -0.7])
        out = impedance_weighted_velocity(w, w, tr, tr, N_UP, [T_X],
                                          self.mat, z_f, beta)
        assert out == pytest.approx(np.asarray(w), abs=1e-10)

    def test_fluid_limit(self):
        vf = np.array([0.4, -1.2])
        vs = np.array([3.0, 5.0])
        out = impedance_weighted_velocity(vf, vs, [1, 1], [0, 0], N_UP, [T_X],
                                          self.mat, z_f=1e12, beta=0.0)
        assert out == pytest.approx(vf, rel=1e-10)

    def test_hand_substitution(self):
        # z_f = zp = zs = 1, beta = 1: normal component 0 + 1 + 1 = 2
        mat = MaterialParams(rho_f=1.0, mu_f=0.0, rho_s=1.0,
                             lambda_s=-1.0, mu_s=1.0)  # cp = cs = 1
        assert mat.zp == pytest.approx(1.0)
        assert mat.zs == pytest.approx(1.0)
        out = impedance_weighted_velocity([0, 0], [0, 2], [0, 2], [0, 0],
                                          N_UP, [T_X], mat, z_f=1.0, beta=1.0)
        assert out[1] == pytest.approx(2.0)

    @given(vfn=finite_floats(), vsn=finite_floats(), z_f=finite_floats(0.1, 50))
    @settings(max_examples=40, deadline=None)
    def test_affine_combination(self, vfn, vsn, z_f):
        # with traction terms off, coefficients of fluid/solid velocity sum to 1
        out = impedance_weighted_velocity([0, vfn], [0, vsn], [0, 0], [0, 0],
                                          N_UP, [T_X], self.mat, z_f, beta=0.0)
        gn = z_f / (z_f + self.mat.zp)
        assert out[1] == pytest.approx(gn * vfn + (1 - gn) * vsn, abs=1e-10)


def test_fluid_impedance_arithmetic(mat_unit):
    mat = MaterialParams.from_density_ratio(1.0)
    assert fluid_impedance(mat, dy=0.05, dt=0.01) == pytest.approx(5.0)
    assert fluid_impedance(mat, dy=0.01, dt=0.01) == pytest.approx(1.0)
    # 1D interpretation with dy replaced by the fluid depth H
    assert fluid_impedance(mat, dy=1.0, dt=0.25) == pytest.approx(4.0)
