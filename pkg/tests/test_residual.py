import numpy as np
import pytest

from ckdvlab.boussinesq import AnsatzConfig, boussinesq_evolve, make_ansatz_state
from ckdvlab.ckdv import CkdvRunConfig, ckdv_evolve, make_state
from ckdvlab.errors import MeanValueError
from ckdvlab.grid import RealField, make_grid, spectral_derivative
from ckdvlab.residual import (BETA_EXPONENT, antiderivative_residual, energy,
                              gronwall_growth_check, residual_field, sweep_report,
                              unexpanded_residual_fd)

from conftest import random_zero_mean_field


def gaussian_source(grid):
    tau = grid.nodes - grid.center
    return RealField(grid=grid, values=-2.0 * tau * np.exp(-tau ** 2))


@pytest.fixture(scope="module")
def trajectory():
    g = make_grid(512, 40.0)
    a0 = gaussian_source(g)
    sample = list(np.linspace(1.0, 1.5, 5))
    cfg = CkdvRunConfig(rho0=1.0, rho1=1.5, d_rho=0.02, grid=g)
    return ckdv_evolve(a0, cfg, output_rhos=sample)


class TestResidualField:
    def test_zero_amplitude(self):
        g = make_grid(64, 40.0)
        st = make_state(RealField(grid=g, values=np.zeros(g.n)), 1.0)
        assert residual_field(st, 0.1).sup() == 0.0
        assert antiderivative_residual(st, 0.1).sup() == 0.0

    def test_lives_on_stretched_grid(self, trajectory):
        res = residual_field(trajectory[0], 0.1)
        tau_grid = trajectory[0].A.grid
        assert res.grid.length == pytest.approx(tau_grid.length / 0.1)
        assert res.grid.n == tau_grid.n

    def test_mean_value_guard(self):
        g = make_grid(64, 40.0)
        bad_vals = np.exp(-g.nodes ** 2)
        st_ok = make_state(gaussian_source(g), 1.0)
        bad = type(st_ok)(rho=1.0,
                          A=RealField(grid=g, values=bad_vals),
                          B=st_ok.B)
        with pytest.raises(MeanValueError):
            residual_field(bad, 0.1)

    def test_antiderivative_consistency(self, trajectory):
        # d/dt of the assembled antiderivative reproduces the residual field
        st = trajectory[2]
        res = residual_field(st, 0.1)
        anti = antiderivative_residual(st, 0.1)
        danti = spectral_derivative(anti, 1)
        assert np.abs(danti.values - res.values).max() <= 1e-8 * res.sup()

    def test_scaling_slopes(self, trajectory):
        eps_list = [0.2, 0.14, 0.1, 0.07]
        rows = [sweep_report(trajectory, eps) for eps in eps_list]
        le = np.log(eps_list)
        slope_l2 = np.polyfit(le, np.log([r.res_l2 for r in rows]), 1)[0]
        slope_sup = np.polyfit(le, np.log([r.res_sup for r in rows]), 1)[0]
        slope_anti = np.polyfit(le, np.log([r.antires_l2 for r in rows]), 1)[0]
        assert abs(slope_l2 - 7.5) <= 0.3
        assert abs(slope_anti - 6.5) <= 0.3
        # the sup norm carries no measure stretch: one half power above L2
        assert abs(slope_sup - 8.0) <= 0.5

    def test_radial_block_fd_crosscheck(self):
        # the eliminated -eps^8 (drho^2 + rho^{-1} drho) A block alone, against
        # centered differences of the numerically evolved trajectory
        eps = 0.2
        g = make_grid(512, 40.0)
        a0 = gaussian_source(g)
        rho_c = 1.2
        devs = []
        for delta_r in (0.25, 0.125):
            d = eps ** 3 * delta_r
            cfg = CkdvRunConfig(rho0=rho_c - d, rho1=rho_c + d, d_rho=d / 8, grid=g)
            sm, s0, sp = ckdv_evolve(a0, cfg, output_rhos=[rho_c - d, rho_c, rho_c + d])
            fd = unexpanded_residual_fd((sm, s0, sp), eps, delta_r)
            closed = residual_field(s0, eps)
            devs.append(np.abs(fd.values - closed.values).max())
        scale = residual_field(s0, eps).sup()
        # second-order convergence to the closed form, with a safety floor
        assert devs[1] <= devs[0] / 3.0
        assert devs[1] <= 0.01 * scale + 1e-8

    def test_tau_exact_groups_have_zero_mean(self, trajectory):
        # everything except the rho^{-2} piece is a perfect tau-derivative,
        # so the assembled residual mean reduces to that piece's (zero) mean
        st = trajectory[1]
        res = residual_field(st, 0.1)
        assert abs(res.mean()) <= 1e-12 * res.sup()


class TestEnergy:
    def test_zero_field(self):
        g = make_grid(128, 40.0)
        zero = RealField(grid=g, values=np.zeros(g.n))
        rep = energy(zero, zero, zero, 0.1)
        assert rep.e0 == 0.0 and rep.e1 == 0.0 and rep.e == 0.0
        assert rep.beta_exp == BETA_EXPONENT

    def test_quadratic_scaling_of_e0(self, rng):
        g = make_grid(128, 40.0)
        r = random_zero_mean_field(g, rng, scale=0.05)
        rr = random_zero_mean_field(g, rng, scale=0.05)
        amp = random_zero_mean_field(g, rng, scale=0.5)
        e_base = energy(r, rr, amp, 0.1).e0
        r2 = RealField(grid=g, values=3.0 * r.values)
        rr2 = RealField(grid=g, values=3.0 * rr.values)
        e_scaled = energy(r2, rr2, amp, 0.1).e0
        assert e_scaled == pytest.approx(9.0 * e_base, rel=1e-12)

    def test_sandwich_for_small_fields(self, rng):
        g = make_grid(128, 40.0)
        for _ in range(5):
            r = random_zero_mean_field(g, rng, scale=0.1)
            rr = random_zero_mean_field(g, rng, scale=0.1)
            amp = random_zero_mean_field(g, rng, scale=1.0)
            rep = energy(r, rr, amp, 0.1)
            assert 0.5 * rep.e0 <= rep.e <= 1.5 * rep.e0


class TestGronwall:
    def test_zero_source_stays_zero(self):
        g = make_grid(64, 40.0)
        zero = RealField(grid=g, values=np.zeros(g.n))
        st = make_state(zero, 1.0)
        eps = 0.1
        cfg = AnsatzConfig(eps=eps, ckdv_source=[st], r0=1.0 / eps ** 3)
        init = make_ansatz_state(cfg, cfg.r0)
        traj = [init]
        rep = gronwall_growth_check(traj, cfg)
        assert rep.max_e == 0.0
        assert rep.bounded

    def test_energy_trace_of_short_run(self):
        eps = 0.1
        g = make_grid(256, 40.0)
        a0 = gaussian_source(g)
        r0 = 1.0 / eps ** 3
        snaps_r = list(np.linspace(r0, r0 + 60.0, 4))
        cfg = CkdvRunConfig(rho0=1.0, rho1=eps ** 3 * snaps_r[-1], d_rho=0.02, grid=g)
        states = ckdv_evolve(a0, cfg, output_rhos=[eps ** 3 * r for r in snaps_r])
        ans = AnsatzConfig(eps=eps, ckdv_source=states, r0=r0)
        init = make_ansatz_state(ans, r0)
        traj = boussinesq_evolve(init, snaps_r[-1], 0.2, output_radii=snaps_r)
        rep = gronwall_growth_check(traj, ans, bound=1e3)
        assert rep.energies[0] <= 1e-12
        assert np.all(np.diff(rep.energies) >= -1e-9)
        assert rep.bounded
