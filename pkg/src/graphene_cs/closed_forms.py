"""Closed-form series for the three standard coherent-state families.

These are regression fixtures: each expression is written out term by term
and compared against the generic operator path in ``observables``.  All
series are summed in log space so large ``r`` does not overflow the
factorials.  Moments, densities and currents are bilayer only; mean energies
cover both systems.
"""
import math

import numpy as np
from scipy.special import gammaln

from . import kernels
from .coherent import Family, hypergeometric_0F2
from .errors import ValidationError
from .numerics import sum_series
from .physics import PhysicalParams, System, hermite_functions, spectrum

SERIES_TOL = 1e-14
PAIR_CUTOFF = 1e-16


def _lg(n):
    return math.lgamma(n + 1.0)


def _series(log_coef, r2, start=0, power_shift=0, tol=SERIES_TOL):
    """``sum_{n>=start} exp(log_coef(n)) * r2**(n + power_shift)``."""
    if r2 == 0.0:
        # only the n with zero total power survives
        n0 = -power_shift
        return math.exp(log_coef(n0)) if n0 >= start else 0.0
    lr = math.log(r2)

    def term(n):
        return math.exp(log_coef(n) + (n + power_shift) * lr)

    total, _ = sum_series(term, tol=tol, start=start)
    return total


def _check_bilayer(system):
    if System.parse(system) is not System.BILAYER:
        raise ValidationError("closed-form moments and profiles exist for bilayer states only")


def moments(family, alpha) -> dict:
    """Closed-form ``<q>``, ``<p>``, ``<q^2>``, ``<p^2>`` for a bilayer family."""
    family = Family.parse(family)
    alpha = complex(alpha)
    r2 = abs(alpha) ** 2
    re, im = alpha.real, alpha.imag
    c2 = re * re - im * im
    sqrt = math.sqrt
    if family is Family.A:
        d = 2.0 * math.exp(r2) - r2 - 1.0
        s1 = math.exp(r2) + _series(lambda n: 0.5 * math.log(n - 1) - 0.5 * (_lg(n) + _lg(n + 1)), r2, 2)
        s2 = 1.0 + 3.0 * r2 + 2.0 * _series(lambda n: math.log(2 * n - 1) - _lg(n), r2, 2)
        s3 = math.exp(r2) + _series(lambda n: -0.5 * (_lg(n - 2) + _lg(n + 2)), r2, 2)
        mq, mp = sqrt(2.0) * re * s1 / d, sqrt(2.0) * im * s1 / d
        q2 = (s2 + 2.0 * c2 * s3) / (2.0 * d)
        p2 = (s2 - 2.0 * c2 * s3) / (2.0 * d)
    elif family is Family.B:
        d = 2.0 * math.exp(r2) - 1.0
        s1 = (_series(lambda n: 0.5 * math.log(n + 2) - 0.5 * (_lg(n) + _lg(n + 1)), r2, 0)
              + _series(lambda n: -0.5 * (_lg(n - 1) + _lg(n + 1)), r2, 1))
        s2 = 1.0 + 2.0 * _series(lambda n: math.log(2 * n + 1) - _lg(n), r2, 0)
        s3 = (_series(lambda n: 0.5 * math.log(n + 1) - 0.5 * (_lg(n - 1) + _lg(n + 2)), r2, 1)
              + _series(lambda n: 0.5 * math.log(n + 3) - 0.5 * (_lg(n) + _lg(n + 1)), r2, 0))
        mq, mp = sqrt(2.0) * re * s1 / d, sqrt(2.0) * im * s1 / d
        q2 = (s2 + 2.0 * c2 * s3) / (2.0 * d)
        p2 = (s2 - 2.0 * c2 * s3) / (2.0 * d)
    else:
        f02 = hypergeometric_0F2(1.0, 2.0, r2)
        s1 = (_series(lambda n: -_lg(n + 1) - 0.5 * (_lg(n + 2) + 3 * _lg(n)), r2, 0)
              + _series(lambda n: 0.5 * math.log(n + 3) - _lg(n)
                        - 0.5 * (_lg(n + 2) + 3 * _lg(n + 1)), r2, 0))
        s2 = _series(lambda n: math.log(2 * n + 3) - 2 * _lg(n) - _lg(n + 1), r2, 0)
        s3 = (_series(lambda n: 0.5 * math.log(n + 2) - _lg(n + 2)
                      - 0.5 * (_lg(n + 3) + 3 * _lg(n)), r2, 0)
              + _series(lambda n: 0.5 * math.log(n + 4) - _lg(n)
                        - 0.5 * (_lg(n + 1) + 3 * _lg(n + 2)), r2, 0))
        mq, mp = re * s1 / (sqrt(2.0) * f02), im * s1 / (sqrt(2.0) * f02)
        q2 = (s2 + c2 * s3) / (2.0 * f02)
        p2 = (s2 - c2 * s3) / (2.0 * f02)
    return {"mean_q": mq, "mean_p": mp, "mean_q2": q2, "mean_p2": p2}


def mean_energy(family, r: float, params: PhysicalParams = PhysicalParams(),
                system=System.BILAYER) -> float:
    """Closed-form mean-energy series for the standard ladder choices."""
    family = Family.parse(family)
    system = System.parse(system)
    r2 = float(r) ** 2
    if system is System.BILAYER:
        scale = params.hbar * params.omega_c_star
        if family is Family.A:
            s = _series(lambda n: 0.5 * math.log(n * (n - 1)) - _lg(n), r2, 2)
            return scale * 2.0 * s / (2.0 * math.exp(r2) - r2 - 1.0)
        if family is Family.B:
            s = _series(lambda n: 0.5 * math.log(n * (n + 1)) - _lg(n), r2, 1)
            return scale * 2.0 * s / (2.0 * math.exp(r2) - 1.0)
        s = _series(lambda n: 0.5 * math.log((n + 1) * (n + 2)) - 2 * _lg(n) - _lg(n + 1), r2, 0)
        return scale * s / hypergeometric_0F2(1.0, 2.0, r2)
    scale = params.hbar * params.v_fermi * math.sqrt(params.omega)
    if family is Family.A:
        s = _series(lambda n: 0.5 * math.log(n) - _lg(n), r2, 1)
        return scale * 2.0 * s / (2.0 * math.exp(r2) - 1.0)
    if family is Family.B:
        s = _series(lambda j: 0.5 * math.log(j + 1) - _lg(j), r2, 0)
        return scale * math.exp(-r2) * s
    s = _series(lambda n: 0.5 * math.log(n + 2) - 2 * _lg(n) - _lg(n + 1), r2, 0)
    return scale * s / hypergeometric_0F2(1.0, 2.0, r2)


def _family_weights(family, r, M):
    """Magnitudes ``w_j``, ``j = 0..M``, multiplying the closed-form double sums."""
    w = np.zeros(M + 1)
    if r == 0:
        w[0] = 1.0
        return w
    j = np.arange(M + 1, dtype=float)
    logw = j * math.log(r) - 0.5 * gammaln(j + 1)
    if family is Family.C:
        logw = j * math.log(r) - gammaln(j + 1) - 0.5 * gammaln(j + 2)
    return np.exp(logw)


def profile(family, r: float, theta: float, x, params: PhysicalParams = PhysicalParams(),
            M: int = 60, t: float = 0.0, system=System.BILAYER):
    """Closed-form density and reduced currents ``(m*/hbar) J`` on the points ``x``.

    The printed formulas are at ``t = 0``; for ``t > 0`` every ``cos/sin``
    of an index difference uses the evolved phases
    ``phi_n = (n - s) theta - E_n t / hbar`` (``s`` the family's starting
    index), which reduces to the printed arguments at ``t = 0``.
    Returns ``(rho, jx, jy)``.
    """
    _check_bilayer(system)
    family = Family.parse(family)
    x = np.asarray(x, dtype=float)
    om, k = params.omega, params.k
    start = family.start
    nmax = M + 2
    table = hermite_functions(nmax + 1, x, params)
    zero = np.zeros_like(x)

    def psi(i):
        return table[i] if 0 <= i <= nmax + 1 else zero

    def psi_rows(idx):
        out = np.zeros((idx.size, x.size))
        ok = (idx >= 0) & (idx <= nmax + 1)
        out[ok] = table[idx[ok]]
        return out

    energies = spectrum(nmax + 2, System.BILAYER, params) / params.hbar

    def phase(state_index):
        return (state_index - start) * theta - energies[state_index] * t

    half = 0.5 * om * x
    # U_n = sqrt((n-2) w) psi_{n-3} - (w x/2 + 2k) psi_{n-2};  L_n = sqrt(n w) psi_{n-1} - (w x/2) psi_n
    def upper_bracket(idx):
        return (np.sqrt(np.maximum(idx - 2, 0) * om)[:, None] * psi_rows(idx - 3)
                - (half + 2.0 * k) * psi_rows(idx - 2))

    def lower_bracket(idx):
        return np.sqrt(idx * om)[:, None] * psi_rows(idx - 1) - half * psi_rows(idx)

    r2 = r * r
    if family is Family.A:
        norm = 1.0 / (2.0 * math.exp(r2) - r2 - 1.0)
        j = np.arange(2, M + 1)
    elif family is Family.B:
        norm = 1.0 / (2.0 * math.exp(r2) - 1.0)
        j = np.arange(1, M)
    else:
        norm = 1.0 / (2.0 * hypergeometric_0F2(1.0, 2.0, r2))
        j = np.arange(0, M - 1)
    w_all = _family_weights(family, r, M)
    w = w_all[j]
    # state index carried by summation index j
    state = {Family.A: j, Family.B: j + 1, Family.C: j + 2}[family]
    ph = phase(state)
    diff = ph[:, None] - ph[None, :]
    ww = w[:, None] * w[None, :]
    cos_w = ww * np.cos(diff)
    sin_w = ww * np.sin(diff)

    low = psi_rows(state)          # psi_n
    up = psi_rows(state - 2)       # psi_{n-2}
    ub = upper_bracket(state)
    lb = lower_bracket(state)

    def dsum(weights, left, right):
        return kernels.bilinear_sum(weights, left, right, PAIR_CUTOFF)

    rho = dsum(cos_w, up, up) + dsum(cos_w, low, low)
    jx = dsum(sin_w, ub, low) + dsum(sin_w, lb, up)
    jy = dsum(cos_w, ub, low) - dsum(cos_w, lb, up)

    if family is Family.A:
        p0, p1 = psi(0), psi(1)
        ph0, ph1 = phase(0), phase(1)
        rho = rho + p0 ** 2 + r2 * p1 ** 2 + 2.0 * r * math.cos(ph1 - ph0) * p0 * p1
        c0 = w[:, None] * np.cos(ph - ph0)[:, None]
        c1 = w[:, None] * np.cos(ph - ph1)[:, None]
        s0 = w[:, None] * np.sin(ph - ph0)[:, None]
        s1 = w[:, None] * np.sin(ph - ph1)[:, None]
        rho = rho + 2.0 * np.sum((c0 * p0 + r * c1 * p1) * low, axis=0)
        jx = jx + np.sum(ub * (p0 * s0 + p1 * r * s1), axis=0)
        jx = jx - np.sum(math.sqrt(om) * p0 * up * r * s1 - half * up * (p0 * s0 + p1 * r * s1), axis=0)
        jy = jy + np.sum(ub * (p0 * c0 + p1 * r * c1), axis=0)
        jy = jy - np.sum(math.sqrt(om) * p0 * up * r * c1 - half * up * (p0 * c0 + p1 * r * c1), axis=0)
    elif family is Family.B:
        p0, p1 = psi(0), psi(1)
        ph1 = phase(1)
        c1 = w[:, None] * np.cos(ph - ph1)[:, None]
        s1 = w[:, None] * np.sin(ph - ph1)[:, None]
        rho = rho + p1 ** 2 + 2.0 * np.sum(c1 * p1 * low, axis=0)
        tail = math.sqrt(om) * p0 - half * p1
        jx = jx + np.sum(s1 * p1 * ub, axis=0) - np.sum(s1 * up * tail, axis=0)
        jy = jy + np.sum(c1 * p1 * ub, axis=0) - np.sum(c1 * up * tail, axis=0)
    return norm * rho, norm * jx, norm * jy
