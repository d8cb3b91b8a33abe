"""Pseudo-spectral radial evolution of the cylindrical KdV equation.

The equation 2 dA/drho + A/rho + d^3A/dtau^3 = d(A^2)/dtau is integrated in
rho with an integrating-factor Runge-Kutta scheme: the full linear part,
including the non-autonomous 1/rho damping, has the exact mode-wise
solution sqrt(rho0/rho) exp(i k^3 (rho-rho0)/2), so only the quadratic term
is stepped explicitly and the third-derivative stiffness never enters the
stability limit.

The antiderivative B = dtau^{-1} A rides along: its once-integrated
equation 2 dB/drho + B/rho + d^3B/dtau^3 = A^2 shares the same propagator
(with the quadratic forcing projected to zero mean, which pins the B gauge),
so the consistency dB/dtau = A is a genuine accuracy check rather than a
definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MeanValueError, StepUnstable
from .grid import RealField, SpectralGrid, mean_tolerance, spectral_antiderivative

GROWTH_LIMIT = 10.0


@dataclass(frozen=True)
class CkdvState:
    """Snapshot of the radial evolution: amplitude A and antiderivative B."""

    rho: float
    A: RealField
    B: RealField


@dataclass(frozen=True)
class CkdvRunConfig:
    """Run parameters for one radial integration."""

    rho0: float
    rho1: float
    d_rho: float
    grid: SpectralGrid
    dealias: bool = True
    mean_tol: float | None = None

    def __post_init__(self):
        if not (0 < self.rho0 < self.rho1):
            raise ValueError(f"need 0 < rho0 < rho1, got ({self.rho0}, {self.rho1})")
        if not self.d_rho > 0:
            raise ValueError(f"step must be positive, got {self.d_rho}")


def stable_step_hint(grid: SpectralGrid) -> float:
    """Documented step heuristic: d_rho <= 2 * dtau * 0.5."""
    return grid.dx


def ckdv_linear_propagator(k, rho_from: float, rho_to: float):
    """Exact mode factor sqrt(rho_from/rho_to) exp(i k^3 (rho_to-rho_from)/2).

    Solves 2 dA^/drho + A^/rho + (ik)^3 A^ = 0 exactly; the modulus is the
    universal sqrt(rho_from/rho_to) amplitude decay of diverging radial
    waves.
    """
    if not (0 < rho_from <= rho_to):
        raise ValueError(f"need 0 < rho_from <= rho_to, got ({rho_from}, {rho_to})")
    k = np.asarray(k, dtype=float)
    amp = np.sqrt(rho_from / rho_to)
    return amp * np.exp(0.5j * k ** 3 * (rho_to - rho_from))


class _Stepper:
    """Spectral-space workspace for one grid (masks, propagators, stages)."""

    def __init__(self, cfg: CkdvRunConfig):
        self.cfg = cfg
        g = cfg.grid
        self.k = g.wavenumbers
        self.ik = 1j * self.k
        self.ik[g.n // 2] = 0.0  # odd symbol: Nyquist zeroed
        kmax = np.pi * g.n / g.length
        if cfg.dealias:
            self.mask = (np.abs(self.k) <= (2.0 / 3.0) * kmax).astype(float)
        else:
            self.mask = np.ones(g.n)
        self.inv_ik = np.zeros(g.n, dtype=complex)
        nz = self.k != 0
        self.inv_ik[nz] = 1.0 / (1j * self.k[nz])
        self.inv_ik[g.n // 2] = 0.0

    def rhs_pair(self, a_hat: np.ndarray, rho: float, forcing_hat) -> tuple:
        """Stage terms beyond the exact linear flow, for (A, B).

        A:  (1/2) dtau (A^2) + forcing
        B:  (1/2) (A^2 - mean) + dtau^{-1} forcing

        Also returns sup|A| of the (dealiased) stage field as a cheap
        blow-up monitor.
        """
        a = np.fft.ifft(a_hat * self.mask).real
        sq = np.fft.fft(a * a) * self.mask
        na = 0.5 * self.ik * sq
        nb = 0.5 * sq
        nb[0] = 0.0  # zero-mean gauge of B
        if forcing_hat is not None:
            fh = forcing_hat(rho)
            na = na + fh
            nb = nb + self.inv_ik * fh
        return na, nb, float(np.abs(a).max())

    def step(self, a_hat, b_hat, rho: float, h: float, forcing_hat):
        """One integrating-factor RK4 step from rho to rho + h."""
        e_half = ckdv_linear_propagator(self.k, rho, rho + h / 2)
        e_half_b = ckdv_linear_propagator(self.k, rho + h / 2, rho + h)
        e_full = e_half * e_half_b

        ka1, kb1, sup1 = self.rhs_pair(a_hat, rho, forcing_hat)
        ka2, kb2, _ = self.rhs_pair(e_half * (a_hat + h / 2 * ka1), rho + h / 2, forcing_hat)
        ka3, kb3, _ = self.rhs_pair(e_half * a_hat + h / 2 * ka2, rho + h / 2, forcing_hat)
        ka4, kb4, _ = self.rhs_pair(e_full * a_hat + h * e_half_b * ka3, rho + h, forcing_hat)

        a_new = e_full * a_hat + h / 6 * (e_full * ka1 + 2 * e_half_b * (ka2 + ka3) + ka4)
        # B shares the propagator; its stages reuse the A stage fields, so the
        # two integrations track each other only to integrator accuracy.
        b_new = e_full * b_hat + h / 6 * (e_full * kb1 + 2 * e_half_b * (kb2 + kb3) + kb4)
        return a_new, b_new, sup1


def make_state(A0: RealField, rho0: float, mean_tol: float | None = None) -> CkdvState:
    """Initial snapshot with B = dtau^{-1} A0 (zero-mean antiderivative)."""
    tol = mean_tolerance(A0, mean_tol)
    if abs(A0.mean()) > tol:
        raise MeanValueError(
            f"initial data must have zero mean: |mean|={abs(A0.mean()):.3e} > {tol:.3e}")
    B0 = spectral_antiderivative(A0, mean_tol=tol)
    return CkdvState(rho=float(rho0), A=A0, B=B0)


def ckdv_rhs(state: CkdvState) -> RealField:
    """dA/drho = -(A/rho + d^3A/dtau^3 - d(A^2)/dtau) / 2 on the grid."""
    return ckdv_rhs_with_forcing(state, None)


def ckdv_rhs_with_forcing(state: CkdvState, forcing: RealField | None) -> RealField:
    """Radial derivative of A with an optional additive forcing.

    A manufactured profile A_ex(rho, tau) becomes an exact solution when
    forcing = dA_ex/drho - rhs(A_ex); the tests drive convergence studies
    through this hook.
    """
    g = state.A.grid
    k = g.wavenumbers
    ik = (1j * k).copy()
    ik[g.n // 2] = 0.0
    a_hat = np.fft.fft(state.A.values)
    d3 = np.fft.ifft(ik ** 3 * a_hat).real
    sq_tau = np.fft.ifft(ik * np.fft.fft(state.A.values ** 2)).real
    vals = -0.5 * (state.A.values / state.rho + d3 - sq_tau)
    if forcing is not None:
        if forcing.grid != g:
            raise ValueError("forcing grid does not match state grid")
        vals = vals + forcing.values
    return RealField(grid=g, values=vals)


def _forcing_hat_fn(forcing, grid: SpectralGrid):
    if forcing is None:
        return None

    def fh(rho: float) -> np.ndarray:
        fld = forcing(rho)
        if fld.grid != grid:
            raise ValueError("forcing grid does not match run grid")
        return np.fft.fft(fld.values)

    return fh


def ckdv_step(state: CkdvState, d_rho: float, cfg: CkdvRunConfig,
              forcing=None) -> CkdvState:
    """Advance one step of size d_rho; raises StepUnstable on 10x growth."""
    stepper = _Stepper(cfg)
    fh = _forcing_hat_fn(forcing, cfg.grid)
    a_hat = np.fft.fft(state.A.values)
    b_hat = np.fft.fft(state.B.values)
    a_new, b_new, _ = stepper.step(a_hat, b_hat, state.rho, d_rho, fh)
    new = _wrap_state(a_new, b_new, state.rho + d_rho, cfg.grid)
    old_sup = state.A.sup()
    if old_sup > 0 and new.A.sup() > GROWTH_LIMIT * old_sup:
        raise StepUnstable(
            f"sup grew {new.A.sup() / old_sup:.1f}x in one step at rho={new.rho:.6g}")
    return new


def _wrap_state(a_hat, b_hat, rho: float, grid: SpectralGrid) -> CkdvState:
    a = np.fft.ifft(a_hat).real
    b = np.fft.ifft(b_hat).real
    return CkdvState(rho=rho, A=RealField(grid=grid, values=a),
                     B=RealField(grid=grid, values=b))


def ckdv_evolve(A0: RealField, cfg: CkdvRunConfig, output_rhos=None,
                forcing=None) -> list[CkdvState]:
    """Integrate from rho0 to rho1, returning states at the requested radii.

    Steps are d_rho, shortened to land exactly on each output radius and on
    rho1.  Raises MeanValueError for initial data with nonzero mean and
    propagates StepUnstable.
    """
    if output_rhos is None:
        output_rhos = [cfg.rho1]
    targets = sorted(set(float(r) for r in output_rhos) | {cfg.rho1})
    for r in targets:
        if r < cfg.rho0 - 1e-12 or r > cfg.rho1 + 1e-12:
            raise ValueError(f"output radius {r} outside [{cfg.rho0}, {cfg.rho1}]")

    state = make_state(A0, cfg.rho0, cfg.mean_tol)
    stepper = _Stepper(cfg)
    fh = _forcing_hat_fn(forcing, cfg.grid)
    a_hat = np.fft.fft(state.A.values)
    b_hat = np.fft.fft(state.B.values)

    out = []
    if abs(cfg.rho0 - targets[0]) < 1e-14:
        out.append(state)
        targets = targets[1:]

    rho = cfg.rho0
    prev = state
    last_sup = state.A.sup()
    hist_sup = last_sup
    for target in targets:
        nsteps = max(1, int(np.ceil((target - rho) / cfg.d_rho - 1e-12)))
        h = (target - rho) / nsteps
        for _ in range(nsteps):
            a_hat, b_hat, sup_stage = stepper.step(a_hat, b_hat, rho, h, fh)
            # growth measured against the run scale; oscillatory or forced
            # fields may legitimately pass through small norms
            ref = max(last_sup, 0.1 * hist_sup)
            if ref > 0 and sup_stage > GROWTH_LIMIT * ref:
                raise StepUnstable(
                    f"sup grew {sup_stage / ref:.1f}x in one step at rho={rho:.6g}")
            last_sup = sup_stage
            hist_sup = max(hist_sup, sup_stage)
            rho += h
        rho = target
        prev = _wrap_state(a_hat, b_hat, rho, cfg.grid)
        out.append(prev)
    return out
