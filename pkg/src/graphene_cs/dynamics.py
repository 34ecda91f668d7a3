"""Unitary time evolution of coherent expansions and quasi-period estimates."""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coherent import CoherentExpansion, Family, build_coherent
from .errors import LevelCoincidenceError, NumericalError, ValidationError
from .ladder import LadderFunction
from .physics import PhysicalParams, System, spectrum

TWO_PI = 2.0 * math.pi
LEVEL_TOL = 1e-12
SCAN_CAP = 100_000


def phase_factors(nmax: int, t: float, system=System.BILAYER,
                  params: PhysicalParams = PhysicalParams()) -> np.ndarray:
    """``exp(-i E_n t / hbar)`` for ``n = 0..nmax`` on the positive branch.

    The angle is reduced modulo ``2 pi`` before exponentiation so each factor
    has unit modulus to rounding and long times keep their precision.
    """
    if not math.isfinite(t):
        raise ValidationError(f"t must be finite, got {t}")
    e = spectrum(nmax, system, params) / params.hbar
    angle = np.fmod(e * t, TWO_PI)
    return np.exp(-1j * angle)


@dataclass(frozen=True, eq=False)
class EvolvedExpansion:
    """A coherent expansion carried to time ``t`` (initial time zero)."""

    base: CoherentExpansion
    t: float
    phases: np.ndarray
    system: System
    params: PhysicalParams = PhysicalParams()

    @property
    def coefficients(self) -> np.ndarray:
        return self.base.coefficients * self.phases

    @property
    def M(self) -> int:
        return self.base.M

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))


def evolve(exp, t: float, system=None, params: Optional[PhysicalParams] = None) -> EvolvedExpansion:
    """Multiply coefficient ``n`` by ``exp(-i E_n t / hbar)``.

    Evolving an :class:`EvolvedExpansion` composes the times, so
    ``evolve(evolve(s, t1), t2)`` equals ``evolve(s, t1 + t2)``.
    Zero-energy terms stay fixed.
    """
    if isinstance(exp, EvolvedExpansion):
        base, t = exp.base, exp.t + t
        params = exp.params if params is None else params
    else:
        base = exp
    params = PhysicalParams() if params is None else params
    system = System.parse(system if system is not None else base.system)
    if system is not base.system:
        raise ValidationError(f"expansion is {base.system.value}, evolution requested for {system.value}")
    return EvolvedExpansion(base, float(t), phase_factors(base.M, t, system, params), system, params)


@dataclass(frozen=True)
class PeriodEstimate:
    """Consecutive distinct levels bounding the mean energy and ``2 pi hbar / gap``."""

    mean_energy: float
    lower: float
    upper: float
    tau: float
    revival: Optional[float] = None

    def with_revival(self, value: float) -> "PeriodEstimate":
        return PeriodEstimate(self.mean_energy, self.lower, self.upper, self.tau, value)


def bounding_levels(energy: float, system=System.BILAYER, params: PhysicalParams = PhysicalParams()):
    """Distinct positive-branch levels ``E_j < energy < E_{j+1}``.

    The degenerate bilayer zero level counts once.

    Raises
    ------
    LevelCoincidenceError
        ``energy`` lies within ``1e-12`` (relative to the level scale) of a level.
    NumericalError
        ``energy`` exceeds the level at index ``SCAN_CAP``.
    """
    system = System.parse(system)
    scale = spectrum(2, system, params)[2]
    n = 16
    while True:
        levels = np.unique(spectrum(n, system, params))
        if levels[-1] > energy:
            break
        if n >= SCAN_CAP:
            raise NumericalError(f"mean energy {energy} lies above the level scan cap")
        n = min(4 * n, SCAN_CAP)
    if np.min(np.abs(levels - energy)) <= LEVEL_TOL * scale:
        raise LevelCoincidenceError(f"mean energy {energy} coincides with a level")
    j = int(np.searchsorted(levels, energy)) - 1
    if j < 0:
        raise ValidationError(f"mean energy {energy} lies below the ground level")
    return float(levels[j]), float(levels[j + 1])


def quasi_period(family, alpha, system=System.BILAYER, params: PhysicalParams = PhysicalParams(),
                 f: Optional[LadderFunction] = None, tol: float = 1e-12) -> PeriodEstimate:
    """Quasi-period ``tau = 2 pi hbar / (E_{j+1} - E_j)`` of a coherent state.

    The mean energy is the generic ``sum_n |a_n|^2 E_n``, so any ladder
    function of the family is accepted.
    """
    from .observables import mean_energy

    energy = mean_energy(family, alpha, params, system, method="generic", f=f, tol=tol)
    lo, hi = bounding_levels(energy, system, params)
    return PeriodEstimate(energy, lo, hi, TWO_PI * params.hbar / (hi - lo))


def density_movie(exp, grid, times: Sequence[float], params: PhysicalParams = PhysicalParams(),
                  mode: str = "generic"):
    """Field profiles of ``exp`` evolved to each of ``times``.

    Returns a list of :class:`~graphene_cs.observables.FieldProfile`; stack the
    ``rho`` arrays for the ``(x, t, rho)`` heatmap table.
    """
    from .observables import field_profile

    times = [float(t) for t in times]
    if not times:
        raise ValidationError("times must not be empty")
    if any(t < 0 or not math.isfinite(t) for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise ValidationError("times must be sorted, finite and non-negative")
    return [field_profile(exp, grid, t=t, mode=mode, params=params) for t in times]


def profile_distance(a, b, relative_to: str = "norm") -> float:
    """Distance between two density profiles on the same grid.

    ``relative_to="norm"`` gives ``||rho_a - rho_b||_2 / ||rho_a||_2`` (L2 over
    ``x``); ``"peak"`` gives ``max|rho_a - rho_b| / max rho_a``.
    """
    from .numerics import quadrature

    if a.x.shape != b.x.shape or not np.array_equal(a.x, b.x):
        raise ValidationError("profiles must share a grid")
    diff = a.rho - b.rho
    if relative_to == "norm":
        return math.sqrt(quadrature(diff ** 2, a.x) / quadrature(a.rho ** 2, a.x))
    if relative_to == "peak":
        return float(np.max(np.abs(diff)) / np.max(a.rho))
    raise ValidationError(f"unknown distance normalization {relative_to!r}")


def revival_distance(exp, tau: float, grid=None, params: PhysicalParams = PhysicalParams(),
                     relative_to: str = "norm") -> float:
    """Normalized distance between ``rho(., 0)`` and ``rho(., tau)``."""
    from .observables import default_grid

    grid = default_grid(exp, params) if grid is None else grid
    first, later = density_movie(exp, grid, [0.0, tau], params)
    return profile_distance(first, later, relative_to)


def period_report(family, alpha, system=System.BILAYER, params: PhysicalParams = PhysicalParams(),
                  f: Optional[LadderFunction] = None, tol: float = 1e-12) -> PeriodEstimate:
    """:func:`quasi_period` plus the L2 revival metric at ``tau``."""
    est = quasi_period(family, alpha, system, params, f, tol)
    exp = build_coherent(Family.parse(family), f, alpha, tol=tol, system=system)
    return est.with_revival(revival_distance(exp, est.tau, params=params))
