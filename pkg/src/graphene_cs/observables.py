"""Moments, uncertainty product, mean energy, densities and currents.

Every quantity has a generic route working on the coefficient expansion
(authoritative) and, for the standard families, a series route from
``graphene_cs.closed_forms`` used as a cross-check.

Moments are dimensionless (``q`` and ``p`` in the ``xi`` representation).
Currents in a :class:`FieldProfile` are reduced: ``(m*/hbar) J`` for
bilayer states and ``J / v_F`` for monolayer states.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import closed_forms, kernels
from .coherent import Family, build_coherent
from .errors import GridTooNarrowError, TruncationError, ValidationError
from .numerics import GridSpec, quadrature
from .physics import PhysicalParams, System, coefficients_to_spinor, oscillator_ops, spectrum

GUARD_WEIGHT = 1e-8
GUARD_BIAS = 1e-10
GRID_TAIL = 1e-6
GRID_SPAN = 8.0


@dataclass(frozen=True)
class ObservableReport:
    mean_q: float
    mean_p: float
    mean_q2: float
    mean_p2: float

    @property
    def sigma_q(self) -> float:
        return math.sqrt(max(self.mean_q2 - self.mean_q ** 2, 0.0))

    @property
    def sigma_p(self) -> float:
        return math.sqrt(max(self.mean_p2 - self.mean_p ** 2, 0.0))

    @property
    def product(self) -> float:
        return self.sigma_q * self.sigma_p

    def as_row(self):
        return (self.mean_q, self.mean_p, self.mean_q2, self.mean_p2, self.product)


def _coefficients(state):
    """Coefficients and system of an expansion or evolved expansion."""
    coeffs = getattr(state, "coefficients", None)
    if coeffs is None:
        raise ValidationError(f"expected an expansion, got {type(state).__name__}")
    return np.asarray(coeffs), System.parse(state.system)


def moments_spectral(exp) -> ObservableReport:
    """Moments of ``q = (a+ + a-)/sqrt 2`` and ``p = i(a+ - a-)/sqrt 2``.

    The operators act on each spinor component's oscillator vector; the two
    component expectation values are summed.

    Raises
    ------
    TruncationError
        Guard-band violation: one of the two highest retained coefficients
        (the free coefficient excluded) carries more than ``1e-8`` of the
        weight *and* the dropped tail could shift ``<q^2>``, ``<p^2>`` by more
        than ``1e-10``.  The shift is bounded by
        ``2 (M + 3) tail (max|a_top| + tail)`` since ``q^2`` couples indices
        two apart.  Expansions with a zero tail are exact.
    """
    coeffs, system = _coefficients(exp)
    w = np.abs(coeffs) ** 2
    tail = getattr(getattr(exp, "base", exp), "tail", None)
    nonzero = np.flatnonzero(w)
    first = int(nonzero[0]) if nonzero.size else 0
    band = w[max(first + 1, w.size - 2):]
    if band.size and band.max() > GUARD_WEIGHT:
        bias = math.inf if tail is None else 2.0 * (w.size + 2) * tail * (math.sqrt(band.max()) + tail)
        if bias > GUARD_BIAS:
            raise TruncationError("top coefficients exceed the guard weight; rebuild with a tighter tol")
    spinor = coefficients_to_spinor(coeffs, system, pad=2)
    mq = mp = mq2 = mp2 = 0.0
    for comp in (spinor.upper, spinor.lower):
        down, up = oscillator_ops(comp)
        c = np.pad(comp, (0, 1))
        q = (up + down) / math.sqrt(2.0)
        p = 1j * (up - down) / math.sqrt(2.0)
        mq += np.vdot(c, q).real
        mp += np.vdot(c, p).real
        mq2 += np.vdot(q, q).real
        mp2 += np.vdot(p, p).real
    return ObservableReport(mq, mp, mq2, mp2)


def moments_closed_form(family, alpha, f=None) -> ObservableReport:
    """Moments from the closed-form series (bilayer, standard ladder choices only)."""
    family = Family.parse(family)
    if f is not None and f.tag != family.default_ladder.tag:
        raise ValidationError(f"no closed-form moments for family {family.value} with f={f.tag}")
    return ObservableReport(**closed_forms.moments(family, alpha))


def expectation_energy(exp, params: PhysicalParams = PhysicalParams()) -> float:
    """``sum_n |a_n|^2 E_n`` on the positive branch."""
    coeffs, system = _coefficients(exp)
    return float(np.sum(np.abs(coeffs) ** 2 * spectrum(coeffs.size - 1, system, params)))


def mean_energy(family, alpha, params: PhysicalParams = PhysicalParams(), system=System.BILAYER,
                method: str = "series", f=None, tol: float = 1e-12) -> float:
    """Mean energy of a coherent state.

    ``method="series"`` sums the closed-form series (standard ladder choices
    only); ``method="generic"`` builds the expansion and weights the levels.
    """
    family = Family.parse(family)
    if method == "series":
        if f is not None and f.tag != family.default_ladder.tag:
            raise ValidationError("series mean energy exists only for the standard ladder choices")
        return closed_forms.mean_energy(family, abs(complex(alpha)), params, system)
    if method == "generic":
        exp = build_coherent(family, f, alpha, tol=tol, system=system)
        return expectation_energy(exp, params)
    raise ValidationError(f"unknown mean-energy method {method!r}")


@dataclass(frozen=True, eq=False)
class FieldProfile:
    """Density and reduced currents sampled on a grid.

    ``current_unit`` converts ``jx``/``jy`` to physical currents
    (``hbar/m*`` for bilayer, ``v_F`` for monolayer).
    """

    x: np.ndarray
    rho: np.ndarray
    jx: np.ndarray
    jy: np.ndarray
    family: Optional[Family] = None
    alpha: complex = 0j
    t: float = 0.0
    params: PhysicalParams = field(default_factory=PhysicalParams)
    system: System = System.BILAYER
    mode: str = "generic"

    @property
    def current_unit(self) -> float:
        if self.system is System.BILAYER:
            return self.params.hbar / self.params.m_star
        return self.params.v_fermi

    def restrict(self, mask) -> "FieldProfile":
        mask = np.asarray(mask, dtype=bool)
        return replace(self, x=self.x[mask], rho=self.rho[mask], jx=self.jx[mask], jy=self.jy[mask])


def default_grid(exp, params: PhysicalParams = PhysicalParams(), points: Optional[int] = None) -> GridSpec:
    """Uniform grid wide and fine enough for every retained basis function."""
    coeffs, _ = _coefficients(exp)
    w = np.abs(coeffs) ** 2
    significant = np.nonzero(w > 1e-18 * w.max())[0]
    n_eff = int(significant[-1]) if significant.size else 0
    half_xi = math.sqrt(2.0 * n_eff + 1.0) + 10.0
    dxi = min(0.05, 0.5 / math.sqrt(2.0 * n_eff + 1.0))
    if points is None:
        points = max(801, int(math.ceil(2.0 * half_xi / dxi)) + 1)
    return GridSpec.centered(params.center, half_xi * params.length_scale, points)


def _grid_x(grid):
    if isinstance(grid, GridSpec):
        return grid.x
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 16 or np.any(np.diff(x) <= 0):
        raise ValidationError("grid must be an increasing array of at least 16 points")
    return x


def _evolved_coefficients(state, t, params):
    coeffs, system = _coefficients(state)
    t_total = float(getattr(state, "t", 0.0)) + t
    if t != 0.0:
        from .dynamics import phase_factors
        base = getattr(state, "base", None)
        if base is not None:
            coeffs = np.asarray(base.coefficients)
        coeffs = coeffs * phase_factors(coeffs.size - 1, t_total, system, params)
    return coeffs, system, t_total


def field_profile(exp, grid=None, t: float = 0.0, mode: str = "generic",
                  params: PhysicalParams = PhysicalParams(), check_tail: bool = True) -> FieldProfile:
    """Sample ``rho(x)``, ``J_x(x)``, ``J_y(x)`` of a (possibly evolved) state.

    Parameters
    ----------
    exp : CoherentExpansion or EvolvedExpansion
    grid : GridSpec or array, optional
        Must cover ``-2k/omega +- 8/sqrt(omega)``; defaults to
        :func:`default_grid`.
    t : float
        Extra evolution time applied before sampling.
    mode : {"generic", "closed_form"}
        ``generic`` applies the current operators to the spinor fields;
        ``closed_form`` evaluates the closed-form double series (bilayer
        A/B/C with their standard ladder functions only).
    check_tail : bool
        Raise ``GridTooNarrowError`` when more than ``1e-6`` of the
        probability lies outside the grid.

    Notes
    -----
    Bilayer currents use ``j_x = sigma_x d_x + sigma_y d_y`` and
    ``j_y = sigma_y d_x - sigma_x d_y`` with ``d_y -> i k``.  For
    ``Psi = e^{iky}(u, l)`` this gives, in units of ``hbar/m*``::

        J_x = Im[u* (l' + k l) + l* (u' - k u)]
        J_y = Re[l* (u' - k u)] - Re[u* (l' + k l)]

    Monolayer currents are ``v_F Psi^dagger sigma Psi``.
    """
    if t < 0 or not math.isfinite(t):
        raise ValidationError("t must be finite and non-negative")
    x = default_grid(exp, params).x if grid is None else _grid_x(grid)
    center = params.center
    if x[0] > center - GRID_SPAN / math.sqrt(params.omega) or x[-1] < center + GRID_SPAN / math.sqrt(params.omega):
        raise ValidationError("grid must span at least -2k/omega +- 8/sqrt(omega)")
    coeffs, system, t_total = _evolved_coefficients(exp, t, params)
    base = getattr(exp, "base", exp)
    family = getattr(base, "family", None)
    alpha = getattr(base, "alpha", 0j)

    if mode == "generic":
        rho, jx, jy = _generic_fields(coeffs, system, x, params)
    elif mode == "closed_form":
        ladder = getattr(base, "ladder", None)
        if family is None or ladder is None or ladder.tag != family.default_ladder.tag:
            raise ValidationError("closed-form profiles exist only for the standard families")
        rho, jx, jy = closed_forms.profile(family, base.r, base.theta, x, params,
                                        M=coeffs.size - 1, t=t_total, system=system)
    else:
        raise ValidationError(f"unknown profile mode {mode!r}")

    prof = FieldProfile(x, rho, jx, jy, family, alpha, t_total, params, system, mode)
    if check_tail:
        missing = 1.0 - integrate_profile(prof)
        if missing > GRID_TAIL:
            raise GridTooNarrowError(f"{missing:.3g} of the probability lies outside the grid")
    return prof


def _spinor_fields_x(coeffs, system, x, params):
    """Spinor components and their ``x``-derivatives on the points ``x``."""
    spinor = coefficients_to_spinor(coeffs, system, params, pad=0)
    u, l, du, dl = kernels.spinor_fields(spinor.upper, spinor.lower, params.xi(x))
    amp = (params.omega / 2.0) ** 0.25
    dxi_dx = math.sqrt(params.omega / 2.0)
    return amp * u, amp * l, amp * dxi_dx * du, amp * dxi_dx * dl


def _bilayer_currents(u, l, du, dl, ky):
    a = np.conj(u) * (dl + ky * l)
    b = np.conj(l) * (du - ky * u)
    return (a + b).imag, b.real - a.real


def _generic_fields(coeffs, system, x, params):
    u, l, du, dl = _spinor_fields_x(coeffs, system, x, params)
    rho = (np.abs(u) ** 2 + np.abs(l) ** 2).real
    if system is System.BILAYER:
        jx, jy = _bilayer_currents(u, l, du, dl, params.k)
    else:
        ul = np.conj(u) * l
        jx = 2.0 * ul.real
        jy = 2.0 * ul.imag
    return rho, jx, jy


def integrate_profile(profile: FieldProfile, method: str = "trapezoid") -> float:
    """Total probability ``int rho dx`` over the profile grid."""
    return quadrature(profile.rho, profile.x, method)


def continuity_residual(exp, grid=None, t: float = 0.0, params: PhysicalParams = PhysicalParams(),
                        h: float = 1e-4) -> dict:
    """Diagnostic for ``d rho/dt + d J_x/dx = 0`` on a bilayer state; never enforced.

    Two currents are checked.  ``max_residual`` uses the profile current
    (``d_y -> i k``, no vector potential).  ``max_residual_kinetic`` uses the
    kinetic momentum ``k + omega x / 2`` in place of ``k``, with the overall
    sign fixed by the Hamiltonian convention of this package; it satisfies
    the continuity equation to finite-difference accuracy, while the profile
    current does not.  ``d rho/dt`` is a central difference in ``t`` and
    ``d J_x/dx`` a second-order gradient on the grid.
    """
    coeffs, system = _coefficients(exp)
    if system is not System.BILAYER:
        raise ValidationError("the continuity diagnostic covers bilayer states")
    from .dynamics import phase_factors

    x = default_grid(exp, params).x if grid is None else _grid_x(grid)
    base = np.asarray(getattr(exp, "base", exp).coefficients)
    t0 = float(getattr(exp, "t", 0.0)) + t
    t_lo = max(t0 - h, 0.0)
    t_hi = t0 + h

    def fields(at):
        return _spinor_fields_x(base * phase_factors(base.size - 1, at, system, params), system, x, params)

    def density(at):
        u, l, _, _ = fields(at)
        return (np.abs(u) ** 2 + np.abs(l) ** 2).real

    drho = (density(t_hi) - density(t_lo)) / (t_hi - t_lo)
    unit = params.hbar / params.m_star
    u, l, du, dl = fields(t0)
    jx, _ = _bilayer_currents(u, l, du, dl, params.k)
    jx_kin, _ = _bilayer_currents(u, l, du, dl, params.k + 0.5 * params.omega * x)
    djx = np.gradient(unit * jx, x)
    djx_kin = np.gradient(-unit * jx_kin, x)
    return {"max_residual": float(np.max(np.abs(drho + djx))),
            "max_residual_kinetic": float(np.max(np.abs(drho + djx_kin))),
            "max_drho_dt": float(np.max(np.abs(drho)))}
