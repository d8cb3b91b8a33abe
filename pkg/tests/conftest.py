import mpmath as mp
import numpy as np
import pytest

from ckdvlab.grid import RealField, make_grid


@pytest.fixture
def grid64():
    return make_grid(64, 2 * np.pi)


@pytest.fixture
def grid256():
    return make_grid(256, 40.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_zero_mean_field(grid, rng, kmax=6, scale=1.0):
    """Smooth random periodic field with exactly zero mean."""
    x = grid.nodes
    vals = np.zeros(grid.n)
    for m in range(1, kmax + 1):
        k = 2 * np.pi * m / grid.length
        vals += rng.normal() * np.cos(k * x) + rng.normal() * np.sin(k * x)
    vals *= scale / max(np.abs(vals).max(), 1e-300)
    return RealField(grid=grid, values=vals)


def fd_weights(offsets, order):
    """Finite-difference weights for the given derivative on integer offsets.

    Solves the Vandermonde moment system, so arbitrary accuracy orders come
    out of the stencil width; used to build 6th-order-accurate residual
    checks that stay meaningful for oscillatory profiles.
    """
    import math

    offsets = np.asarray(offsets, dtype=float)
    m = len(offsets)
    A = np.vander(offsets, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(A, rhs)


def fd_derivative(fn, z, order, h, width=4):
    """High-order centered FD derivative of a vectorized function."""
    offsets = np.arange(-width, width + 1)
    w = fd_weights(offsets, order)
    z = np.asarray(z, dtype=float)
    acc = np.zeros_like(z)
    for o, c in zip(offsets, w):
        if c != 0.0:
            acc = acc + c * fn(z + o * h)
    return acc / h ** order


def airy_series_oracle(z, terms=None, dps=None):
    """High-precision Maclaurin-series solution of w'' = z w.

    Independent of the package implementation: sums the two fundamental
    series in multi-precision arithmetic and assembles Ai, Bi from the
    standard origin values.  Precision scales with |z| to absorb the
    exp((2/3)|z|^{3/2})-sized cancellation; validated by the Wronskian
    identity in the tests.
    """
    az = abs(float(z))
    if dps is None:
        dps = 60 + int(1.0 * az ** 1.5)
    if terms is None:
        terms = 400 + int(8 * az ** 1.5)
    with mp.workdps(dps):
        zm = mp.mpf(z)
        c1 = mp.power(3, mp.mpf(-2) / 3) / mp.gamma(mp.mpf(2) / 3)
        c2 = mp.power(3, mp.mpf(-1) / 3) / mp.gamma(mp.mpf(1) / 3)
        f = mp.mpf(1)
        g = zm
        fp = mp.mpf(0)
        gp = mp.mpf(1)
        tf = mp.mpf(1)
        tg = zm
        z3 = zm ** 3
        for k in range(1, terms):
            nf = 3 * k
            ng = 3 * k + 1
            tf = tf * z3 / ((nf - 1) * nf)
            tg = tg * z3 / ((ng - 1) * ng)
            f += tf
            g += tg
            if zm != 0:
                fp += nf * tf / zm
                gp += ng * tg / zm
            if abs(tf) < mp.mpf(10) ** (-dps) and abs(tg) < mp.mpf(10) ** (-dps):
                break
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
        sqrt3 = mp.sqrt(3)
        bi = sqrt3 * (c1 * f + c2 * g)
        bip = sqrt3 * (c1 * fp + c2 * gp)
        return float(ai), float(aip), float(bi), float(bip)
