"""Residual of the long-wave ansatz and the energy diagnostics.

Inserting eps^2 A(eps^3 r, eps(t-r)) into the transformed radial equation
leaves a residual whose expansion starts at eps^8 once A solves the
cylindrical KdV equation.  Every radial derivative of A is eliminated
symbolically through the cKdV right-hand side (one rho-derivative costs
three tau-derivatives), so the residual is an exact closed expression in
the single snapshot A(rho, .).

Fields are returned on the t-grid (the tau-grid stretched by 1/eps): norms
taken there are the physical-time norms directly, and the spectral
derivative of the antiderivative field reproduces the residual field
identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boussinesq import AnsatzConfig, BoussinesqState, make_ansatz_state, n1_of_v, n2_of_v, n_of_v
from .ckdv import CkdvState
from .errors import MeanValueError
from .grid import (RealField, make_grid, mean_tolerance, spectral_antiderivative,
                   spectral_derivative)

BETA_EXPONENT = 3.5


@dataclass(frozen=True)
class ResidualReport:
    """Norms of the residual and its time-antiderivative at one (eps, rho)."""

    eps: float
    res_l2: float
    res_sup: float
    antires_l2: float
    rho_at_sup: float


@dataclass(frozen=True)
class EnergyReport:
    """Energy E = E0 + E1 controlling the approximation error."""

    e0: float
    e1: float
    e: float
    beta_exp: float


class _Elimination:
    """Snapshot workspace with all tau-spectral pieces of the expansion."""

    def __init__(self, state: CkdvState, mean_tol: float | None):
        self.grid = state.A.grid
        self.rho = state.rho
        tol = mean_tolerance(state.A, mean_tol)
        if abs(state.A.mean()) > tol:
            raise MeanValueError(
                f"residual expansion needs zero-mean A: |mean|={abs(state.A.mean()):.3e}")
        self.a = state.A.values
        self.mean_tol = tol

    def d(self, values: np.ndarray, order: int) -> np.ndarray:
        f = RealField(grid=self.grid, values=values)
        return spectral_derivative(f, order).values

    def build(self):
        a, rho = self.a, self.rho
        a_t2 = self.d(a, 2)
        a_t3 = self.d(a, 3)
        sq = a * a
        sq_t = self.d(sq, 1)
        # drho A eliminated through the cKdV equation
        D = -0.5 * (a / rho + a_t3 - sq_t)
        # drho^2 A: differentiate the elimination once more
        D_t3 = self.d(D, 3)
        aD_t = self.d(2.0 * a * D, 1)
        D2 = -0.5 * (-a / rho ** 2 + D / rho + D_t3 - aD_t)
        return a, sq, D, D2


def _n_terms(a: np.ndarray, D: np.ndarray, D2: np.ndarray, eps: float):
    """N(eps^2 A) and its eliminated rho-derivatives (pointwise fields)."""
    v = eps ** 2 * a
    nn = n_of_v(v)
    n1 = n1_of_v(v)
    n2 = n2_of_v(v)
    n_rho = eps ** 2 * n1 * D
    n_rho2 = eps ** 4 * n2 * D * D + eps ** 2 * n1 * D2
    return nn, n_rho, n_rho2


def _t_grid_of(grid, eps: float):
    return make_grid(grid.n, grid.length / eps, grid.center / eps)


def residual_field(state: CkdvState, eps: float,
                   mean_tol: float | None = None) -> RealField:
    """Residual of the ansatz at one radius, sampled on the t-grid.

    All eps-power prefactors are included; the leading block is O(eps^8).
    """
    ws = _Elimination(state, mean_tol)
    a, sq, D, D2 = ws.build()
    rho = ws.rho
    d = ws.d
    e8, e10, e12 = eps ** 8, eps ** 10, eps ** 12

    res = (-e8 * D2
           - e8 * D / rho
           - 2 * e8 * d(D, 3)
           + e10 * d(D2, 2)
           - e8 * d(a, 3) / rho
           + e10 * d(D, 2) / rho
           - e8 * d(sq, 4)
           + 2 * e10 * d(2 * a * D, 3)
           - e12 * d(2 * (D * D + a * D2), 2)
           + e10 * d(sq, 3) / rho
           - e12 * d(2 * a * D, 2) / rho)

    nn, n_rho, n_rho2 = _n_terms(a, D, D2, eps)
    res = (res
           + eps ** 2 * d(nn, 2)
           + eps ** 4 * d(nn, 4)
           - 2 * eps ** 6 * d(n_rho, 3)
           + e8 * d(n_rho2, 2)
           - eps ** 6 * d(nn, 3) / rho
           + e8 * d(n_rho, 2) / rho)

    return RealField(grid=_t_grid_of(ws.grid, eps), values=res)


def antiderivative_residual(state: CkdvState, eps: float,
                            mean_tol: float | None = None) -> RealField:
    """dt^{-1} of the residual, on the t-grid.

    Every block of the expansion is a perfect tau-derivative except the
    -(4 rho^2)^{-1} A piece left by eliminating the radial block, which is
    integrated spectrally and requires the zero mean of A.  The overall
    dt^{-1} = eps^{-1} dtau^{-1} conversion supplies one inverse power.
    """
    ws = _Elimination(state, mean_tol)
    a, sq, D, D2 = ws.build()
    rho = ws.rho
    d = ws.d
    e8, e10, e12 = eps ** 8, eps ** 10, eps ** 12

    b = spectral_antiderivative(RealField(grid=ws.grid, values=a), ws.mean_tol).values
    a_t2 = d(a, 2)
    # the radial block -(drho^2 + rho^{-1} drho) A after integration:
    # (1/4)(2 drho + rho^{-1})(dtau^2 A - A^2) - (1/4) rho^{-2} dtau^{-1} A
    radial = e8 * (0.25 * (2 * (d(D, 2) - 2 * a * D) + (a_t2 - sq) / rho)
                   - 0.25 * b / rho ** 2)

    anti = (radial
            - 2 * e8 * d(D, 2)
            + e10 * d(D2, 1)
            - e8 * a_t2 / rho
            + e10 * d(D, 1) / rho
            - e8 * d(sq, 3)
            + 2 * e10 * d(2 * a * D, 2)
            - e12 * d(2 * (D * D + a * D2), 1)
            + e10 * d(sq, 2) / rho
            - e12 * d(2 * a * D, 1) / rho)

    nn, n_rho, n_rho2 = _n_terms(a, D, D2, eps)
    anti = (anti
            + eps ** 2 * d(nn, 1)
            + eps ** 4 * d(nn, 3)
            - 2 * eps ** 6 * d(n_rho, 2)
            + e8 * d(n_rho2, 1)
            - eps ** 6 * d(nn, 2) / rho
            + e8 * d(n_rho, 1) / rho)

    return RealField(grid=_t_grid_of(ws.grid, eps), values=anti / eps)


def residual_report(state: CkdvState, eps: float,
                    mean_tol: float | None = None) -> ResidualReport:
    res = residual_field(state, eps, mean_tol)
    anti = antiderivative_residual(state, eps, mean_tol)
    return ResidualReport(eps=eps, res_l2=res.l2(), res_sup=res.sup(),
                          antires_l2=anti.l2(), rho_at_sup=state.rho)


def sweep_report(states: list[CkdvState], eps: float,
                 mean_tol: float | None = None) -> ResidualReport:
    """Sup over the sampled radii of the residual norms (the lemma statement)."""
    best = None
    for st in states:
        row = residual_report(st, eps, mean_tol)
        if best is None:
            best = row
        else:
            best = ResidualReport(
                eps=eps,
                res_l2=max(best.res_l2, row.res_l2),
                res_sup=max(best.res_sup, row.res_sup),
                antires_l2=max(best.antires_l2, row.antires_l2),
                rho_at_sup=row.rho_at_sup if row.res_sup > best.res_sup else best.rho_at_sup)
    return best


def unexpanded_residual_fd(states_minus_plus: tuple[CkdvState, CkdvState, CkdvState],
                           eps: float, delta_r: float) -> RealField:
    """Residual from the untransformed definition with radial finite differences.

    Takes cKdV snapshots at rho - eps^3 dr, rho, rho + eps^3 dr, builds
    v = eps^2 A at the three radii (with the tau argument shifted
    consistently), and assembles
    -(dr^2 + r^{-1} dr) v + dt^2 (1 + dr^2 + r^{-1} dr)(v - v^2 + N(v))
    with centered differences in r and spectral derivatives in t.  Agrees
    with the eliminated closed form to O(delta_r^2).
    """
    sm, s0, sp = states_minus_plus
    grid = s0.A.grid
    k = grid.wavenumbers
    r0 = s0.rho / eps ** 3

    def v_at(state: CkdvState, r: float) -> np.ndarray:
        # tau = eps (t - r): relative to the center snapshot, the argument
        # shifts by eps (r - r0)
        shift = eps * (r - r0)
        phase = np.exp(-1j * k * shift)
        return eps ** 2 * np.fft.ifft(phase * np.fft.fft(state.A.values)).real

    vm = v_at(sm, r0 - delta_r)
    v0 = v_at(s0, r0)
    vp = v_at(sp, r0 + delta_r)

    def transform(v):
        return v - v * v + n_of_v(v)

    um, u0, up = transform(vm), transform(v0), transform(vp)

    def ddr(fm, f0, fp):
        return (fp - fm) / (2 * delta_r)

    def ddr2(fm, f0, fp):
        return (fp - 2 * f0 + fm) / delta_r ** 2

    # dt^2 on the t-grid equals (eps k)^2 multipliers on the tau-layout
    kt = eps * k

    def dt2(vals):
        return np.fft.ifft(-(kt ** 2) * np.fft.fft(vals)).real

    radial_v = ddr2(vm, v0, vp) + ddr(vm, v0, vp) / r0
    radial_u = ddr2(um, u0, up) + ddr(um, u0, up) / r0
    res = -radial_v + dt2(u0 + radial_u)
    return RealField(grid=_t_grid_of(grid, eps), values=res)


def energy(R: RealField, Rr: RealField, A_field: RealField, eps: float,
           beta: float = BETA_EXPONENT, mean_tol: float | None = None) -> EnergyReport:
    """Energy of the scaled error R with radial derivative Rr = dR/dr.

    E0 collects the six quadratic time-integrals (the dr-exact terms of the
    two estimate families; the (dR/dr)^2 integral appears in both and keeps
    its double weight), E1 the seven cubic and amplitude-weighted
    corrections with the eps^beta bookkeeping, beta = 7/2.
    """
    g = R.grid
    dx = g.dx

    def integral(vals):
        return dx * float(np.sum(vals))

    r = R.values
    rr = Rr.values
    rt = spectral_derivative(R, 1).values
    rrt = spectral_derivative(Rr, 1).values
    r_anti = spectral_antiderivative(Rr, mean_tolerance(Rr, mean_tol)).values

    e0 = 0.5 * (integral(r ** 2) + integral(r_anti ** 2) + 2.0 * integral(rr ** 2)
                + integral(rt ** 2) + integral(rrt ** 2))

    av = A_field.values
    eb = eps ** beta
    e1 = (-eps ** 2 * integral(av * r ** 2)
          - eps ** 2 * integral(av * rr ** 2)
          - eb / 3.0 * integral(r ** 3)
          - eb * integral(r * rr ** 2)
          - eps ** 2 * integral(av * rt ** 2)
          - eps ** 2 * integral(av * rrt ** 2)
          - eb * integral(r * rrt ** 2))
    return EnergyReport(e0=e0, e1=e1, e=e0 + e1, beta_exp=beta)


@dataclass(frozen=True)
class GronwallReport:
    """Measured energy trace along a run (diagnostic, not a proof)."""

    radii: np.ndarray
    energies: np.ndarray
    e0_values: np.ndarray
    e1_values: np.ndarray
    fitted_rate: float
    max_e: float
    bounded: bool
    bound: float


def gronwall_growth_check(traj: list[BoussinesqState], cfg: AnsatzConfig,
                          bound: float = 1e3) -> GronwallReport:
    """Energy of R = eps^{-beta} (v - eps^2 psi) along the trajectory.

    Fits the effective exponential growth rate of E(r) and flags whether
    the trace stays below the given bound over the whole radial span.
    """
    eps = cfg.eps
    radii = []
    energies = []
    e0s = []
    e1s = []
    for st in traj:
        ans = make_ansatz_state(cfg, st.r)
        amp = RealField(grid=st.v.grid, values=ans.v.values / eps ** 2)
        R = RealField(grid=st.v.grid, values=(st.v.values - ans.v.values) / eps ** BETA_EXPONENT)
        Rr = RealField(grid=st.v.grid, values=(st.w.values - ans.w.values) / eps ** BETA_EXPONENT)
        rep = energy(R, Rr, amp, eps, mean_tol=1e-6 * max(Rr.sup(), 1e-300))
        radii.append(st.r)
        energies.append(rep.e)
        e0s.append(rep.e0)
        e1s.append(rep.e1)
    radii = np.asarray(radii)
    energies = np.asarray(energies)
    positive = energies > 0
    if positive.sum() >= 2:
        rate = float(np.polyfit(radii[positive], np.log(energies[positive]), 1)[0])
    else:
        rate = 0.0
    max_e = float(energies.max(initial=0.0))
    return GronwallReport(radii=radii, energies=energies,
                          e0_values=np.asarray(e0s), e1_values=np.asarray(e1s),
                          fitted_rate=rate, max_e=max_e,
                          bounded=bool(max_e <= bound), bound=bound)
