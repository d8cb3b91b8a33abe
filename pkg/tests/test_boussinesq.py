import numpy as np
import pytest
from scipy import special

from ckdvlab.boussinesq import (AnsatzConfig, BoussinesqState, approximation_error,
                                boussinesq_evolve, make_ansatz_state, n1_of_v,
                                n2_of_v, n_of_v, resolvent_solve, spatial_rhs,
                                u_to_v, v_to_u)
from ckdvlab.ckdv import CkdvRunConfig, ckdv_evolve
from ckdvlab.errors import BranchError, NoConvergence
from ckdvlab.grid import RealField, apply_b2, make_grid

from conftest import random_zero_mean_field


def gaussian_source(grid):
    tau = grid.nodes - grid.center
    return RealField(grid=grid, values=-2.0 * tau * np.exp(-tau ** 2))


class TestChangeOfVariables:
    def test_point_values(self):
        assert u_to_v(0.0) == 0.0
        assert u_to_v(0.1) == pytest.approx(0.11)
        assert u_to_v(-0.1) == pytest.approx(-0.09)
        assert v_to_u(0.11) == pytest.approx(0.1)
        assert v_to_u(0.0) == 0.0

    def test_branch_guard(self):
        with pytest.raises(BranchError):
            v_to_u(-0.3)

    def test_round_trip(self, rng):
        v = rng.uniform(-0.2, 0.2, 1000)
        assert np.abs(u_to_v(v_to_u(v)) - v).max() <= 1e-14
        u = rng.uniform(-0.18, 0.2, 1000)
        assert np.abs(v_to_u(u_to_v(u)) - u).max() <= 1e-14

    def test_field_lift(self, grid64, rng):
        f = random_zero_mean_field(grid64, rng, scale=0.1)
        out = u_to_v(f)
        assert isinstance(out, RealField)
        assert np.allclose(out.values, f.values + f.values ** 2)


class TestRemainder:
    def test_cubic_at_origin(self):
        assert n_of_v(0.0) == 0.0
        h = 1e-5
        assert abs(n1_of_v(0.0)) == 0.0
        assert abs(n2_of_v(0.0)) == 0.0

    def test_leading_coefficient(self):
        # N(v) = 2 v^3 - 5 v^4 + ...
        v = 1e-3
        assert n_of_v(v) / v ** 3 == pytest.approx(2.0, rel=0.01)

    def test_definition_consistency(self, rng):
        v = rng.uniform(-0.2, 0.2, 500)
        assert np.abs(v - v * v + n_of_v(v) - v_to_u(v)).max() <= 1e-14

    def test_derivatives_by_fd(self):
        h = 1e-6
        for v in (-0.15, 0.0, 0.1, 0.2):
            fd1 = (n_of_v(v + h) - n_of_v(v - h)) / (2 * h)
            assert n1_of_v(v) == pytest.approx(fd1, abs=1e-8)
            fd2 = (n1_of_v(v + h) - n1_of_v(v - h)) / (2 * h)
            assert n2_of_v(v) == pytest.approx(fd2, abs=1e-7)


class TestResolvent:
    def test_identity_at_zero_g(self, grid256, rng):
        rhs = RealField(grid=grid256, values=rng.standard_normal(grid256.n))
        zero = RealField(grid=grid256, values=np.zeros(grid256.n))
        h = resolvent_solve(zero, rhs)
        assert np.array_equal(h.values, rhs.values)

    def test_geometric_convergence(self, grid256, rng):
        g = RealField(grid=grid256, values=0.1 * np.cos(2 * np.pi * grid256.nodes / grid256.length))
        rhs = RealField(grid=grid256, values=rng.standard_normal(grid256.n))
        h = resolvent_solve(g, rhs, tol=1e-12)
        resid = h.values - apply_b2(RealField(grid=grid256, values=g.values * h.values)).values - rhs.values
        resid_l2 = np.sqrt(grid256.dx * np.sum(resid ** 2))
        assert resid_l2 <= 1e-12

    def test_divergence_detected(self, grid256, rng):
        g = RealField(grid=grid256, values=1.5 * np.cos(2 * np.pi * grid256.nodes / grid256.length))
        rhs = RealField(grid=grid256, values=rng.standard_normal(grid256.n))
        with pytest.raises(NoConvergence):
            resolvent_solve(g, rhs, tol=1e-12)


class TestSpatialRhs:
    def test_rest_state(self, grid256):
        zero = RealField(grid=grid256, values=np.zeros(grid256.n))
        st = BoussinesqState(r=10.0, v=zero, w=zero)
        fv, fw = spatial_rhs(st)
        assert fv.sup() == 0.0
        assert fw.sup() == 0.0

    def test_linearization_multiplier(self):
        # infinitesimal single mode: f(v, 0) = -kappa^2 v with
        # kappa^2 = k^2/(1+k^2)
        g = make_grid(128, 40.0)
        m = 5
        k = 2 * np.pi * m / 40.0
        kappa2 = k ** 2 / (1 + k ** 2)
        amp = 1e-9
        v = RealField(grid=g, values=amp * np.cos(k * g.nodes))
        w = RealField(grid=g, values=np.zeros(g.n))
        st = BoussinesqState(r=30.0, v=v, w=w)
        _, fw = spatial_rhs(st)
        assert np.abs(fw.values + kappa2 * v.values).max() <= 1e-6 * amp

    def test_constant_profile_killed(self):
        # k = 0 content is annihilated by the multiplier: f = -w/r for
        # constant-in-t data
        g = make_grid(64, 10.0)
        v = RealField(grid=g, values=np.full(g.n, 0.01))
        w = RealField(grid=g, values=np.full(g.n, 0.003))
        st = BoussinesqState(r=7.0, v=v, w=w)
        fv, fw = spatial_rhs(st)
        assert np.array_equal(fv.values, w.values)
        assert np.abs(fw.values + w.values / 7.0).max() <= 1e-15


class TestEvolve:
    def test_zero_data(self, grid256):
        zero = RealField(grid=grid256, values=np.zeros(grid256.n))
        st = BoussinesqState(r=10.0, v=zero, w=zero)
        final = boussinesq_evolve(st, 20.0, 0.25)[-1]
        assert final.v.sup() == 0.0

    def test_bessel_oracle(self):
        n, length = 128, 40.0
        g = make_grid(n, length)
        m = 3
        k = 2 * np.pi * m / length
        kappa = k / np.sqrt(1 + k ** 2)
        amp = 1e-8
        r0, r1 = 50.0, 100.0
        c1, c2 = 0.7, 0.4
        profile = np.cos(k * g.nodes)
        v0 = amp * (c1 * special.j0(kappa * r0) + c2 * special.y0(kappa * r0)) * profile
        w0 = -amp * kappa * (c1 * special.j1(kappa * r0) + c2 * special.y1(kappa * r0)) * profile
        init = BoussinesqState(r=r0, v=RealField(grid=g, values=v0),
                               w=RealField(grid=g, values=w0))
        final = boussinesq_evolve(init, r1, 0.1)[-1]
        v_exact = amp * (c1 * special.j0(kappa * r1) + c2 * special.y0(kappa * r1)) * profile
        rel = np.abs(final.v.values - v_exact).max() / np.abs(v_exact).max()
        assert rel <= 1e-6

    def test_fourth_order_self_convergence(self):
        g = make_grid(64, 40.0)
        v0 = RealField(grid=g, values=0.01 * np.cos(2 * np.pi * 2 * g.nodes / 40.0))
        w0 = RealField(grid=g, values=np.zeros(g.n))
        init = BoussinesqState(r=20.0, v=v0, w=w0)

        def final_at(dr):
            return boussinesq_evolve(init, 30.0, dr, rhs_tol=1e-13)[-1].v.values

        ref = final_at(0.0125)
        e1 = np.abs(final_at(0.1) - ref).max()
        e2 = np.abs(final_at(0.05) - ref).max()
        assert np.log2(e1 / e2) >= 3.8


def build_ansatz(eps=0.1, n=256, l_tau=40.0, nsnap=4, rho0=1.0, rho1=1.5):
    g = make_grid(n, l_tau)
    a0 = gaussian_source(g)
    r0 = rho0 / eps ** 3
    snaps_r = np.linspace(r0, rho1 / eps ** 3, nsnap)
    cfg = CkdvRunConfig(rho0=rho0, rho1=rho1, d_rho=0.02, grid=g)
    states = ckdv_evolve(a0, cfg, output_rhos=[eps ** 3 * r for r in snaps_r])
    return AnsatzConfig(eps=eps, ckdv_source=states, r0=r0), snaps_r


class TestAnsatz:
    def test_zero_source(self):
        g = make_grid(64, 40.0)
        zero = RealField(grid=g, values=np.zeros(g.n))
        from ckdvlab.ckdv import make_state
        st = make_state(zero, 1.0)
        cfg = AnsatzConfig(eps=0.1, ckdv_source=[st], r0=1.0 / 0.1 ** 3)
        out = make_ansatz_state(cfg, 1.0 / 0.1 ** 3)
        assert out.v.sup() == 0.0
        assert out.w.sup() == 0.0

    def test_amplitude_scaling(self):
        cfg, snaps_r = build_ansatz()
        st = make_ansatz_state(cfg, snaps_r[0])
        src = cfg.ckdv_source[0]
        assert st.v.sup() == pytest.approx(0.1 ** 2 * src.A.sup(), rel=1e-12)

    def test_chain_rule_w_against_radial_fd(self):
        eps = 0.1
        g = make_grid(256, 40.0)
        a0 = gaussian_source(g)
        r_c = 1.0 / eps ** 3
        devs = []
        for delta in (0.5, 0.25):
            rho_lo = 1.0 - eps ** 3 * delta
            rho_hi = 1.0 + eps ** 3 * delta
            cfg = CkdvRunConfig(rho0=rho_lo, rho1=rho_hi, d_rho=1e-4, grid=g)
            states = ckdv_evolve(a0, cfg, output_rhos=[rho_lo, 1.0, rho_hi])
            ans = AnsatzConfig(eps=eps, ckdv_source=states, r0=r_c - delta)
            mid = make_ansatz_state(ans, r_c)
            lo = make_ansatz_state(ans, r_c - delta)
            hi = make_ansatz_state(ans, r_c + delta)
            w_fd = (hi.v.values - lo.v.values) / (2 * delta)
            devs.append(np.abs(w_fd - mid.w.values).max())
        # centered differences converge at second order to the chain-rule w
        assert devs[1] <= devs[0] / 3.0
        assert devs[1] <= 2e-6

    def test_out_of_range_rho(self):
        cfg, snaps_r = build_ansatz()
        with pytest.raises(ValueError):
            make_ansatz_state(cfg, snaps_r[-1] * 2.0)

    def test_r0_consistency_enforced(self):
        cfg, _ = build_ansatz()
        with pytest.raises(ValueError):
            AnsatzConfig(eps=cfg.eps, ckdv_source=cfg.ckdv_source, r0=cfg.r0 * 1.5)


class TestApproximationError:
    def test_error_at_initialization(self):
        # starting exactly on the ansatz, the u-error at r0 is the
        # change-of-variables defect |v_to_u(eps^2 psi) - eps^2 psi| = O(eps^4)
        cfg, snaps_r = build_ansatz()
        init = make_ansatz_state(cfg, snaps_r[0])
        row = approximation_error([init], cfg)
        psi = init.v.values
        expected = np.abs(v_to_u(init.v).values - psi).max()
        assert row.err_u == pytest.approx(expected, rel=1e-12)
        assert row.err_u <= 1.1 * np.abs(psi ** 2).max()
        assert row.err_v == 0.0

    def test_zero_source_error(self):
        g = make_grid(64, 40.0)
        zero = RealField(grid=g, values=np.zeros(g.n))
        from ckdvlab.ckdv import make_state
        st = make_state(zero, 1.0)
        cfg = AnsatzConfig(eps=0.1, ckdv_source=[st], r0=1000.0)
        init = make_ansatz_state(cfg, 1000.0)
        row = approximation_error([init], cfg)
        assert row.err_u == 0.0
        assert row.err_v == 0.0
