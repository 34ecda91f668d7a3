"""Pure numpy implementation of the hot kernels.

Always importable; ``graphene_cs.kernels`` uses it whenever the compiled
``_ckernels`` extension is missing or ``GRAPHENE_CS_PURE`` is set.

The Hermite recurrence runs on rescaled values with a separate log-scale per
sample point, so ``phi_n(xi)`` stays finite for large ``n`` and large ``|xi|``
where ``exp(-xi**2/2)`` alone would underflow.
"""
import math

import numpy as np

_BIG = 1e150
_LOG_BIG = math.log(_BIG)
_LOG_PI_QUARTER = -0.25 * math.log(math.pi)


def hermite_table(nmax, xi):
    """Orthonormal Hermite functions ``phi_n(xi)`` for ``n = 0..nmax``.

    Returns an array of shape ``(nmax + 1, xi.size)``.
    """
    xi = np.ascontiguousarray(xi, dtype=float).ravel()
    out = np.empty((nmax + 1, xi.size))
    logs = -0.5 * xi * xi + _LOG_PI_QUARTER
    prev = np.zeros_like(xi)
    cur = np.ones_like(xi)
    out[0] = np.exp(logs)
    for n in range(nmax):
        nxt = math.sqrt(2.0 / (n + 1)) * xi * cur - math.sqrt(n / (n + 1)) * prev
        big = np.abs(nxt) > _BIG
        if big.any():
            nxt[big] /= _BIG
            cur[big] /= _BIG
            logs[big] += _LOG_BIG
        prev, cur = cur, nxt
        out[n + 1] = cur * np.exp(logs)
    return out


def spinor_fields(upper, lower, xi):
    """Component fields and their xi-derivatives on the sample points.

    ``upper`` and ``lower`` are oscillator coefficient vectors of equal
    length.  Returns ``(u, l, du, dl)`` where ``u = sum_m upper[m] phi_m``
    and ``du = sum_m upper[m] phi_m'`` with
    ``phi_m' = sqrt(2 m) phi_{m-1} - xi phi_m``.
    """
    upper = np.asarray(upper, dtype=complex)
    lower = np.asarray(lower, dtype=complex)
    xi = np.ascontiguousarray(xi, dtype=float).ravel()
    nmax = upper.size - 1
    table = hermite_table(nmax, xi)
    # d/dxi coefficients: phi_m' contributes sqrt(2m) to phi_{m-1}
    shift = np.sqrt(2.0 * np.arange(1, nmax + 1))
    u = upper @ table
    l = lower @ table
    du = -xi * u
    dl = -xi * l
    if nmax > 0:
        du += (upper[1:] * shift) @ table[:-1]
        dl += (lower[1:] * shift) @ table[:-1]
    return u, l, du, dl


def bilinear_sum(weights, left, right, cutoff=0.0):
    """``sum_{n,m} weights[n, m] * left[n, j] * right[m, j]`` for every ``j``.

    Weights with ``|w| <= cutoff * max|w|`` are dropped.
    """
    weights = np.asarray(weights, dtype=float)
    if cutoff > 0.0:
        scale = np.abs(weights).max(initial=0.0)
        weights = np.where(np.abs(weights) > cutoff * scale, weights, 0.0)
    return np.einsum("nj,nj->j", left, weights @ right)
