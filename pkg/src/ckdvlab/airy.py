"""Airy functions Ai, Bi and the solitary-wave profile functions built on them.

The evaluator is self-contained (no external special-function dependency)
and combines four regimes:

* Maclaurin series of the defining equation w'' = z w on the central range,
* large-argument asymptotic expansions on both sides,
* a short downward Taylor march for Ai on the positive range where the
  series cancels catastrophically but the asymptotics have not yet
  converged.

Every branch is accurate to better than 1e-10 relative over the supported
range; adjacent branches overlap to ~1e-11 and the tests pin this down
against an independent high-precision series oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import OverflowGuard

_SQRT_PI = np.sqrt(np.pi)

# branch switch points (validated by overlap tests); the extended-precision
# series pushes the negative seam past the oscillatory test windows
_NEG_ASYM = -8.5       # asymptotics below, series above
_POS_SERIES_END = 4.2  # series cancellation exceeds 1e-10 for Ai beyond this
_POS_ASYM = 7.4        # positive asymptotics converged to ~5e-14 beyond this
_BI_OVERFLOW = 30.0    # guarded ceiling for the growing solution
_MARCH_SEED = 8.0      # downward Taylor march starts here
_MARCH_STEP = 0.25

_KMAX = 26             # asymptotic coefficient table size
_TAIL_Z = 8.0          # quadrature/tail split for the profile integral


def _uv_coefficients(kmax: int = _KMAX):
    u = np.empty(kmax)
    v = np.empty(kmax)
    u[0] = v[0] = 1.0
    for k in range(1, kmax):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v[k] = -u[k] * (6 * k + 1) / (6 * k - 1)
    return u, v


_U, _V = _uv_coefficients()


@dataclass(frozen=True)
class AiryValues:
    """Ai, Bi and first derivatives at one point or an array of points."""

    ai: np.ndarray
    ai_prime: np.ndarray
    bi: np.ndarray
    bi_prime: np.ndarray

    def wronskian(self) -> np.ndarray:
        """Ai*Bi' - Ai'*Bi; identically 1/pi."""
        return self.ai * self.bi_prime - self.ai_prime * self.bi


def _maclaurin(z64: np.ndarray):
    """f, f', g, g' for the two power-series solutions of w'' = z w.

    f(0)=1, f'(0)=0 and g(0)=0, g'(0)=1; the ODE recurrence triples the
    exponent per term, so ~50 iterations converge over the series range.
    Summed in extended precision: the alternating terms cancel by up to
    exp((2/3)|z|^{3/2}), which would cost five digits near the branch edges
    in double arithmetic.
    """
    z = z64.astype(np.longdouble)
    z3 = z ** 3
    f = np.ones_like(z)
    g = z.copy()
    fp = np.zeros_like(z)
    gp = np.ones_like(z)
    tf = np.ones_like(z)
    tg = z.copy()
    zsafe = np.where(z == 0.0, 1.0, z)
    for k in range(1, 200):
        nf = 3 * k
        ng = 3 * k + 1
        tf = tf * z3 / ((nf - 1) * nf)
        tg = tg * z3 / ((ng - 1) * ng)
        f = f + tf
        g = g + tg
        fp = fp + nf * tf / zsafe
        gp = gp + ng * tg / zsafe
        if max(np.abs(tf).max(), np.abs(tg).max()) < 1e-22 * max(1.0, np.abs(f).max()):
            break
    return f, fp, g, gp


_AI0_LD = np.longdouble("0.355028053887817239260063186004183176398")
_AIP0_LD = np.longdouble("-0.2588194037928067984051835601892039634791")
_BI0_LD = np.longdouble("0.6149266274460007351509223690936135535947")
_BIP0_LD = np.longdouble("0.4482883573538263579148237103988283908662")


def _series_all(z: np.ndarray):
    f, fp, g, gp = _maclaurin(z)
    return ((_AI0_LD * f + _AIP0_LD * g).astype(float),
            (_AI0_LD * fp + _AIP0_LD * gp).astype(float),
            (_BI0_LD * f + _BIP0_LD * g).astype(float),
            (_BI0_LD * fp + _BIP0_LD * gp).astype(float))


def _trunc_sum(zeta: np.ndarray, coeffs: np.ndarray, sign: float):
    """sum_k coeffs[k] sign^k zeta^{-k}, truncated at the smallest term."""
    acc = np.full_like(zeta, coeffs[0])
    term = np.ones_like(zeta)
    prev = np.full_like(zeta, np.inf)
    live = np.ones(zeta.shape, dtype=bool)
    for k in range(1, len(coeffs)):
        term = term * (sign * coeffs[k] / coeffs[k - 1]) / zeta
        mag = np.abs(term)
        live &= mag < prev
        acc = np.where(live, acc + term, acc)
        prev = mag
        if not live.any() or mag.max() < 1e-18:
            break
    return acc


def _asym_pos_ai(z: np.ndarray):
    zeta = (2.0 / 3.0) * z ** 1.5
    q = z ** 0.25
    sa = _trunc_sum(zeta, _U, -1.0)
    sap = _trunc_sum(zeta, _V, -1.0)
    with np.errstate(under="ignore"):
        em = np.exp(-zeta)
        ai = em / (2 * _SQRT_PI * q) * sa
        aip = -q * em / (2 * _SQRT_PI) * sap
    return ai, aip


def _asym_pos(z: np.ndarray):
    zeta = (2.0 / 3.0) * z ** 1.5
    q = z ** 0.25
    ai, aip = _asym_pos_ai(z)
    sb = _trunc_sum(zeta, _U, 1.0)
    sbp = _trunc_sum(zeta, _V, 1.0)
    ep = np.exp(zeta)
    bi = ep / (_SQRT_PI * q) * sb
    bip = q * ep / _SQRT_PI * sbp
    return ai, aip, bi, bip


def _pair_sums(zeta: np.ndarray, coeffs: np.ndarray):
    """Even and odd alternating sums of the oscillatory expansions."""
    ev = np.full_like(zeta, coeffs[0])
    od = coeffs[1] / zeta
    prev = np.full_like(zeta, np.inf)
    live = np.ones(zeta.shape, dtype=bool)
    zeta2 = zeta * zeta
    for k in range(1, len(coeffs) // 2):
        te = (-1) ** k * coeffs[2 * k] / zeta2 ** k
        to = (-1) ** k * coeffs[2 * k + 1] / (zeta2 ** k * zeta)
        mag = np.abs(te)
        live &= mag < prev
        ev = np.where(live, ev + te, ev)
        od = np.where(live, od + to, od)
        prev = mag
        if not live.any() or mag.max() < 1e-18:
            break
    return ev, od


def _asym_neg(z: np.ndarray):
    x = -z
    zeta = (2.0 / 3.0) * x ** 1.5
    chi = zeta + np.pi / 4
    pu, qu = _pair_sums(zeta, _U)
    pv, qv = _pair_sums(zeta, _V)
    s, c = np.sin(chi), np.cos(chi)
    q = x ** 0.25
    ai = (s * pu - c * qu) / (_SQRT_PI * q)
    bi = (c * pu + s * qu) / (_SQRT_PI * q)
    aip = -(q / _SQRT_PI) * (c * pv + s * qv)
    bip = (q / _SQRT_PI) * (s * pv - c * qv)
    return ai, aip, bi, bip


def _taylor_step(z0: float, w: float, wp: float, h: float, nterms: int = 34):
    """Advance (w, w') of w'' = z w from z0 by h via the local Taylor series."""
    a = np.empty(nterms)
    a[0], a[1] = w, wp
    a[2] = z0 * a[0] / 2.0
    for n in range(1, nterms - 2):
        a[n + 2] = (z0 * a[n] + a[n - 1]) / ((n + 1) * (n + 2))
    val = 0.0
    der = 0.0
    for n in range(nterms - 1, 0, -1):
        val = (val + a[n]) * h
        der = (der + n * a[n]) * h if n > 1 else der + a[1]
    return val + a[0], der


_GAP_ANCHORS: dict[int, tuple[float, float]] | None = None


def _gap_anchor_table():
    """(Ai, Ai') at 8.0, 7.75, ..., 4.0, marched down from the asymptotic seed.

    Marching toward smaller z is stable for Ai: the contaminating Bi
    component decays in that direction.
    """
    global _GAP_ANCHORS
    if _GAP_ANCHORS is None:
        seed = _asym_pos(np.array([_MARCH_SEED]))
        ai, aip = float(seed[0][0]), float(seed[1][0])
        table = {0: (ai, aip)}
        z0 = _MARCH_SEED
        nsteps = int(round((_MARCH_SEED - 4.0) / _MARCH_STEP))
        for j in range(1, nsteps + 1):
            ai, aip = _taylor_step(z0, ai, aip, -_MARCH_STEP)
            z0 -= _MARCH_STEP
            table[j] = (ai, aip)
        _GAP_ANCHORS = table
    return _GAP_ANCHORS


def _gap_ai(z: np.ndarray):
    """Ai, Ai' on the cancellation gap via Taylor steps from cached anchors."""
    table = _gap_anchor_table()
    idx = np.rint((_MARCH_SEED - z) / _MARCH_STEP).astype(int)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    for j in np.unique(idx):
        sel = idx == j
        z0 = _MARCH_SEED - j * _MARCH_STEP
        a0, a1 = table[int(j)]
        nterms = 20
        a = np.empty(nterms)
        a[0], a[1] = a0, a1
        a[2] = z0 * a[0] / 2.0
        for n in range(1, nterms - 2):
            a[n + 2] = (z0 * a[n] + a[n - 1]) / ((n + 1) * (n + 2))
        h = z[sel] - z0
        val = np.zeros_like(h)
        der = np.zeros_like(h)
        for n in range(nterms - 1, 0, -1):
            val = (val + a[n]) * h
            der = der * h + n * a[n] if n > 1 else der * h + a[1]
        ai[sel] = val + a[0]
        aip[sel] = der
    return ai, aip


def airy_ai_only(z):
    """Ai and Ai' alone, valid for arbitrarily large z (decays to zero).

    The canonical profile family never touches Bi, so its evaluation path
    must not trip the Bi overflow guard; far past the guard Ai simply
    underflows to zero.
    """
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    scalar = np.isscalar(z) or np.ndim(z) == 0
    ai = np.empty_like(zarr)
    aip = np.empty_like(zarr)
    neg = zarr < _NEG_ASYM
    mid = (~neg) & (zarr < _POS_SERIES_END)
    gap = (zarr >= _POS_SERIES_END) & (zarr < _POS_ASYM)
    pos = zarr >= _POS_ASYM
    if neg.any():
        ai[neg], aip[neg], _, _ = _asym_neg(zarr[neg])
    if mid.any():
        f, fp, g, gp = _maclaurin(zarr[mid])
        ai[mid] = (_AI0_LD * f + _AIP0_LD * g).astype(float)
        aip[mid] = (_AI0_LD * fp + _AIP0_LD * gp).astype(float)
    if gap.any():
        ai[gap], aip[gap] = _gap_ai(zarr[gap])
    if pos.any():
        ai[pos], aip[pos] = _asym_pos_ai(zarr[pos])
    if scalar:
        return ai[0], aip[0]
    return ai, aip


def airy_eval(z) -> AiryValues:
    """Evaluate Ai, Ai', Bi, Bi' at scalar or array argument.

    Accurate to 1e-10 relative (absolute near subnormal underflow) for
    z <= 30; arbitrarily negative arguments are served by the oscillatory
    asymptotics whose accuracy only improves with |z|.

    Raises:
        OverflowGuard: z > 30, where Bi would leave the guarded range.
    """
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    scalar = np.isscalar(z) or np.ndim(z) == 0
    if zarr.size and zarr.max() > _BI_OVERFLOW + 1e-12:
        raise OverflowGuard(f"Bi evaluation refused for z={zarr.max():.3f} > {_BI_OVERFLOW}")
    ai = np.empty_like(zarr)
    aip = np.empty_like(zarr)
    bi = np.empty_like(zarr)
    bip = np.empty_like(zarr)

    neg = zarr < _NEG_ASYM
    mid = (~neg) & (zarr < _POS_SERIES_END)
    gap = (zarr >= _POS_SERIES_END) & (zarr < _POS_ASYM)
    pos = zarr >= _POS_ASYM

    if neg.any():
        ai[neg], aip[neg], bi[neg], bip[neg] = _asym_neg(zarr[neg])
    if mid.any():
        ai[mid], aip[mid], bi[mid], bip[mid] = _series_all(zarr[mid])
    if gap.any():
        zg = zarr[gap]
        f, fp, g, gp = _maclaurin(zg)  # Bi has no cancellation here
        bi[gap] = (_BI0_LD * f + _BIP0_LD * g).astype(float)
        bip[gap] = (_BI0_LD * fp + _BIP0_LD * gp).astype(float)
        ai[gap], aip[gap] = _gap_ai(zg)
    if pos.any():
        ai[pos], aip[pos], bi[pos], bip[pos] = _asym_pos(zarr[pos])

    if scalar:
        return AiryValues(ai=ai[0], ai_prime=aip[0], bi=bi[0], bi_prime=bip[0])
    return AiryValues(ai=ai, ai_prime=aip, bi=bi, bi_prime=bip)


@dataclass(frozen=True)
class SolitonSpec:
    """Parameters of the Airy-family solitary-wave profile.

    The profile derivative is -(alpha*Ai^2 + beta*Bi^2 + gamma*Ai*Bi) with
    gamma = branch * 2*sqrt(alpha*beta) forced by the compatibility of the
    linear and quadratic profile equations.  The canonical sign-definite
    family has beta = 0 and alpha >= 0.
    """

    alpha: float
    beta: float = 0.0
    branch: int = 1
    offset: float = 1.0

    def __post_init__(self):
        if self.alpha * self.beta < 0:
            raise ValueError("alpha*beta must be >= 0 for a real profile")
        if self.branch not in (-1, 1):
            raise ValueError("branch must be +1 or -1")
        if not self.offset > 0:
            raise ValueError("offset must be positive")

    @property
    def gamma(self) -> float:
        return self.branch * 2.0 * np.sqrt(self.alpha * self.beta)

    @property
    def canonical(self) -> bool:
        return self.beta == 0.0 and self.alpha >= 0.0


def capital_g(z, spec: SolitonSpec):
    """G(z) = alpha Ai^2 + beta Bi^2 + gamma Ai Bi; equals -F'(z)."""
    av = airy_eval(z)
    return (spec.alpha * av.ai ** 2 + spec.beta * av.bi ** 2
            + spec.gamma * av.ai * av.bi)


def _quadratic_form(z, alpha: float, beta: float, gamma: float):
    """F(z) from the Airy quadratic form with integration constant zero."""
    av = airy_eval(z)
    return (alpha * (av.ai_prime ** 2 - z * av.ai ** 2)
            + beta * (av.bi_prime ** 2 - z * av.bi ** 2)
            + gamma * (av.ai_prime * av.bi_prime - z * av.ai * av.bi))


def _ai_squared_tail(z: float) -> float:
    """Asymptotic integral of Ai^2 over (z, inf), leading decay term."""
    return np.exp(-(4.0 / 3.0) * z ** 1.5) / (8.0 * np.pi * z)


def capital_f(z, spec: SolitonSpec, quad_tol: float = 1e-12):
    """Profile function F(z).

    For the canonical family (beta = 0) this is alpha times the integral of
    Ai^2 over (z, inf), evaluated by adaptive quadrature up to z = 8 plus an
    asymptotic tail; otherwise the closed Airy quadratic form is returned.
    The two routes agree for beta = 0, which the tests exercise.
    """
    if spec.beta != 0.0:
        return _quadratic_form(z, spec.alpha, spec.beta, spec.gamma)
    if spec.alpha == 0.0:
        return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0

    def one(zv: float) -> float:
        if zv >= _TAIL_Z:
            return spec.alpha * _ai_squared_tail(zv)
        integrand = lambda x: float(airy_eval(x).ai ** 2)
        val, _ = quad(integrand, zv, _TAIL_Z, epsabs=quad_tol, epsrel=quad_tol, limit=400)
        return spec.alpha * (val + _ai_squared_tail(_TAIL_Z))

    if np.ndim(z) == 0:
        return one(float(z))
    return np.array([one(float(zv)) for zv in np.asarray(z, dtype=float)])


def capital_f_closed(z, spec: SolitonSpec):
    """F(z) via the closed quadratic form (fast route used by profile code)."""
    return _quadratic_form(z, spec.alpha, spec.beta, spec.gamma)


def profile_pack(z, spec: SolitonSpec):
    """F and its first four derivatives in closed Airy form.

    F'' and beyond come from differentiating the Airy products with
    w'' = z w; no numerical differentiation is involved.  The canonical
    family (beta = 0) avoids Bi entirely, so it is valid for arbitrarily
    large argument where Ai just underflows.
    """
    al, be, ga = spec.alpha, spec.beta, spec.gamma
    if be == 0.0 and ga == 0.0:
        z = np.asarray(z, dtype=float) if np.ndim(z) else z
        a, ap = airy_ai_only(z)
        with np.errstate(under="ignore"):
            f0 = al * (ap ** 2 - z * a ** 2)
            g0 = al * a ** 2
            g1 = 2 * al * a * ap
            g2 = 2 * al * (ap ** 2 + z * a ** 2)
            g3 = 2 * al * (a ** 2 + 4 * z * a * ap)
        return f0, -g0, -g1, -g2, -g3
    av = airy_eval(z)
    a, ap, b, bp = av.ai, av.ai_prime, av.bi, av.bi_prime
    f0 = (al * (ap ** 2 - z * a ** 2) + be * (bp ** 2 - z * b ** 2)
          + ga * (ap * bp - z * a * b))
    g0 = al * a ** 2 + be * b ** 2 + ga * a * b
    g1 = 2 * al * a * ap + 2 * be * b * bp + ga * (ap * b + a * bp)
    g2 = (2 * al * (ap ** 2 + z * a ** 2) + 2 * be * (bp ** 2 + z * b ** 2)
          + ga * (2 * ap * bp + 2 * z * a * b))
    g3 = (2 * al * (a ** 2 + 4 * z * a * ap) + 2 * be * (b ** 2 + 4 * z * b * bp)
          + ga * (2 * a * b + 4 * z * (a * bp + ap * b)))
    return f0, -g0, -g1, -g2, -g3


def compatibility_residual(z, alpha: float, beta: float, gamma: float):
    """[F'']^2 - 4 z [F']^2 + 4 F F' for the general three-parameter profile.

    Analytically equal to (gamma^2 - 4 alpha beta) / pi^2, independent of z;
    the canonical compatibility gamma^2 = 4 alpha beta makes it vanish.
    """
    av = airy_eval(z)
    a, ap, b, bp = av.ai, av.ai_prime, av.bi, av.bi_prime
    f0 = (alpha * (ap ** 2 - z * a ** 2) + beta * (bp ** 2 - z * b ** 2)
          + gamma * (ap * bp - z * a * b))
    g0 = alpha * a ** 2 + beta * b ** 2 + gamma * a * b
    g1 = 2 * alpha * a * ap + 2 * beta * b * bp + gamma * (ap * b + a * bp)
    f1 = -g0
    f2 = -g1
    return f2 ** 2 - 4 * z * f1 ** 2 + 4 * f0 * f1
