"""Golden-value and property checks shared by ``graphene-cs regress`` and the tests.

Each check returns a :class:`CheckResult` holding its worst residual and the
threshold it is judged against.  :func:`run_all` runs the registry in order.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .coherent import (Family, annihilation_residual, build_coherent, closed_form_coefficients)
from .dynamics import evolve, profile_distance, quasi_period
from .errors import GrapheneCSError, TruncationError
from .numerics import GridSpec, quadrature
from .observables import (default_grid, field_profile, integrate_profile, mean_energy,
                          moments_closed_form, moments_spectral)
from .physics import (EigenstateLabel, PhysicalParams, System, apply_hamiltonian, build_eigenstate,
                      hermite_functions, level_energy, spectrum)

FAMILIES = (Family.A, Family.B, Family.C)
SWEEP_R = tuple(0.25 * i for i in range(13))
SWEEP_THETA = tuple(math.pi / 8 * i for i in range(17))

GOLDEN_ENERGIES = (
    (System.BILAYER, Family.A, 0.76),
    (System.BILAYER, Family.B, 1.56),
    (System.MONOLAYER, Family.A, 0.95),
    (System.MONOLAYER, Family.B, 1.37),
    (System.MONOLAYER, Family.C, 1.53),
)
GOLDEN_TOL = 0.005

# (system, family, exact tau at r = 1, rounded value quoted alongside it)
ROUNDED_PERIODS = (
    (System.BILAYER, Family.A, math.sqrt(2.0) * math.pi, math.sqrt(2.0) * math.pi),
    (System.MONOLAYER, Family.A, 2.0 * math.pi, 2.0 * math.pi),
    (System.MONOLAYER, Family.B, 2.0 * math.pi / (math.sqrt(2.0) - 1.0), 5.0 * math.pi),
    (System.MONOLAYER, Family.C, 2.0 * math.pi / (math.sqrt(3.0) - math.sqrt(2.0)), 6.0 * math.pi),
)

# Versioned tolerance for generic vs closed-form currents.  v1: both routes
# were found to agree to rounding (about 1e-15), so the density tolerance is
# reused; a deviation above it means one route has regressed.
CURRENT_THRESHOLDS = {"v1": 1e-6}
CURRENT_THRESHOLD_VERSION = "v1"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: residual={self.residual:.3e} threshold={self.threshold:.3e}"
        return f"{text} {self.detail}".rstrip()


def _result(name, residual, threshold, detail="", passed=None) -> CheckResult:
    ok = residual <= threshold if passed is None else passed
    return CheckResult(name, bool(ok and math.isfinite(residual)), float(residual), float(threshold), detail)


def check_spectrum() -> CheckResult:
    e = spectrum(3, System.BILAYER)
    expected = np.array([0.0, 0.0, math.sqrt(2.0), math.sqrt(6.0)])
    worst = float(np.max(np.abs(e - expected) / np.maximum(expected, 1.0)))
    return _result("spectrum_exact", worst, np.finfo(float).eps)


def check_mean_energy_golden() -> CheckResult:
    worst, parts = 0.0, []
    for system, family, golden in GOLDEN_ENERGIES:
        series = mean_energy(family, 1.0, system=system)
        generic = mean_energy(family, 1.0, system=system, method="generic")
        # both routes are held to the golden value
        dev = max(abs(series - golden), abs(generic - golden))
        worst = max(worst, dev)
        parts.append(f"{system.value[0]}{family.value}={series:.4f}")
    return _result("mean_energy_golden", worst, GOLDEN_TOL, " ".join(parts))


def check_quasi_periods() -> CheckResult:
    worst, parts, rounding_ok = 0.0, [], True
    for system, family, exact, rounded in ROUNDED_PERIODS:
        est = quasi_period(family, 1.0, system)
        worst = max(worst, abs(est.tau - exact) / exact)
        if rounded != exact:
            # the quoted value is tau rounded to the nearest multiple of pi
            rounding_ok &= round(est.tau / math.pi) * math.pi == rounded
        parts.append(f"{system.value[0]}{family.value}:tau={est.tau:.6f},quoted={rounded:.6f}")
    return _result("quasi_periods", worst, 1e-12, " ".join(parts), passed=worst <= 1e-12 and rounding_ok)


def check_uncertainty_limits(r: float = 1e-3) -> CheckResult:
    targets = {Family.A: 0.5, Family.B: 1.5, Family.C: 1.5}
    worst, parts = 0.0, []
    for family, target in targets.items():
        prod = moments_spectral(build_coherent(family, alpha=r)).product
        worst = max(worst, abs(prod - target))
        parts.append(f"{family.value}={prod:.6f}")
    return _result("uncertainty_small_r", worst, 1e-3, " ".join(parts))


def check_uncertainty_floor() -> CheckResult:
    lowest = math.inf
    for family in FAMILIES:
        for r in SWEEP_R:
            for th in SWEEP_THETA:
                lowest = min(lowest, moments_spectral(build_coherent(family, alpha=(r, th))).product)
    # residual is the amount by which the floor is undercut
    return _result("uncertainty_floor", 0.5 - lowest, 1e-9, f"min_product={lowest:.12f}")


def check_eigenproperty() -> CheckResult:
    worst = 0.0
    for family in FAMILIES:
        for alpha in (0.5, 1.0, 2.0 * np.exp(1j * math.pi / 3.0)):
            exp = build_coherent(family, alpha=alpha, tol=1e-12)
            worst = max(worst, annihilation_residual(exp))
    return _result("annihilation_eigenproperty", worst, 1e-10)


def check_moments_cross_oracle() -> CheckResult:
    worst = 0.0
    for family in FAMILIES:
        for r in SWEEP_R:
            for th in SWEEP_THETA:
                alpha = r * np.exp(1j * th)
                a = moments_spectral(build_coherent(family, alpha=(r, th))).as_row()
                b = moments_closed_form(family, alpha).as_row()
                worst = max(worst, max(abs(x - y) for x, y in zip(a, b)))
    return _result("moments_cross_oracle", worst, 1e-8)


def _profiled_states(times=(0.0, math.pi, 2.0 * math.pi)):
    for family in FAMILIES:
        for th in (0.0, math.pi / 4.0, math.pi / 2.0):
            exp = build_coherent(family, alpha=(1.0, th))
            grid = default_grid(exp)
            for t in times:
                yield family, th, t, exp, grid


def check_normalization() -> CheckResult:
    worst_rho = worst_norm = 0.0
    for _, _, t, exp, grid in _profiled_states():
        prof = field_profile(exp, grid, t=t, check_tail=False)
        worst_rho = max(worst_rho, abs(integrate_profile(prof) - 1.0))
        worst_norm = max(worst_norm, abs(evolve(exp, t).norm() - 1.0))
    passed = worst_rho <= 1e-6 and worst_norm <= 1e-12
    return _result("normalization_unitarity", max(worst_rho, worst_norm * 1e6), 1e-6,
                   f"int_rho={worst_rho:.3e} norm={worst_norm:.3e}", passed=passed)


def check_revival() -> CheckResult:
    exp = build_coherent(Family.C, alpha=1.0)
    grid = default_grid(exp)
    period = 2.0 * math.pi / PhysicalParams().omega_c_star
    base = field_profile(exp, grid)
    full = profile_distance(base, field_profile(exp, grid, t=period))
    half = profile_distance(base, field_profile(exp, grid, t=0.5 * period))
    passed = full < 0.02 and half > 5.0 * full
    return _result("revival_family_C", full, 0.02, f"half_period={half:.4f}", passed=passed)


def check_theta0_currents() -> CheckResult:
    worst_jx, least_jy = 0.0, math.inf
    for family in FAMILIES:
        prof = field_profile(build_coherent(family, alpha=1.0))
        worst_jx = max(worst_jx, float(np.max(np.abs(prof.jx))))
        least_jy = min(least_jy, float(np.max(np.abs(prof.jy))))
    passed = worst_jx < 1e-10 and least_jy > 0.0
    return _result("theta0_currents", worst_jx, 1e-10, f"min_max_jy={least_jy:.4f}", passed=passed)


def check_profile_cross_oracle() -> CheckResult:
    worst_rho = worst_j = 0.0
    for family in FAMILIES:
        for th in (0.0, math.pi / 4.0, math.pi / 2.0):
            exp = build_coherent(family, alpha=(1.0, th))
            grid = default_grid(exp)
            for t in (0.0, 1.0):
                g = field_profile(exp, grid, t=t)
                c = field_profile(exp, grid, t=t, mode="closed_form")
                worst_rho = max(worst_rho, float(np.max(np.abs(g.rho - c.rho))))
                worst_j = max(worst_j, float(np.max(np.abs(g.jx - c.jx))), float(np.max(np.abs(g.jy - c.jy))))
    j_tol = CURRENT_THRESHOLDS[CURRENT_THRESHOLD_VERSION]
    passed = worst_rho <= 1e-6 and worst_j <= j_tol
    detail = f"rho={worst_rho:.3e} current={worst_j:.3e} current_threshold[{CURRENT_THRESHOLD_VERSION}]={j_tol:.0e}"
    return _result("profile_cross_oracle", max(worst_rho, worst_j), 1e-6, detail, passed=passed)


def check_physics_core(nmax: int = 40) -> CheckResult:
    params = PhysicalParams()
    half = math.sqrt(2.0 * nmax + 1.0) + 12.0
    grid = GridSpec.centered(params.center, half * params.length_scale, 4001)
    table = hermite_functions(nmax, grid.x, params)
    gram = np.array([[quadrature(table[n] * table[m], grid) for m in range(nmax + 1)]
                     for n in range(nmax + 1)])
    ortho = float(np.max(np.abs(gram - np.eye(nmax + 1))))
    eig = 0.0
    for system in (System.BILAYER, System.MONOLAYER):
        for n in range(nmax + 1):
            for branch in (1, -1):
                psi = build_eigenstate(EigenstateLabel(n, branch), nmax + 2, params, system)
                h = apply_hamiltonian(psi)
                e = level_energy(n, system, params, branch)
                eig = max(eig, (h - psi.scaled(e)).norm())
    passed = ortho < 1e-8 and eig < 1e-10
    return _result("orthonormality_eigenresidual", max(ortho, eig * 100.0), 1e-8,
                   f"orthonormality={ortho:.3e} eigen_residual={eig:.3e}", passed=passed)


def check_closed_form_coefficients(perturb: float = 0.0) -> CheckResult:
    """Recurrence vs closed-form coefficients; ``perturb`` is a sensitivity hook."""
    worst = 0.0
    for system in (System.BILAYER, System.MONOLAYER):
        for family in FAMILIES:
            for r in (0.5, 1.0, 2.5, 4.0):
                exp = build_coherent(family, alpha=(r, 0.3), system=system)
                ref = closed_form_coefficients(family, (r, 0.3), exp.M, system)
                if perturb:
                    ref = ref.copy()
                    ref[family.start] *= 1.0 + perturb
                scale = np.maximum(np.abs(ref), 1e-300)
                mask = np.abs(ref) > 1e-200
                worst = max(worst, float(np.max(np.abs(exp.coefficients - ref)[mask] / scale[mask])))
    return _result("closed_form_coefficients", worst, 1e-12)


def check_truncation_surfaced(r: float = 3.0, tol: float = 1e-14) -> CheckResult:
    """A capped build either meets ``tol`` within the cap or raises; never silent."""
    outcomes, silent = [], False
    for cap, must_raise in ((64, False), (32, True)):
        try:
            exp = build_coherent(Family.A, alpha=r, tol=tol, hard_cap=cap)
        except TruncationError:
            outcomes.append(f"cap={cap}:raised")
            continue
        silent |= must_raise or exp.M > cap or exp.tail > tol
        outcomes.append(f"cap={cap}:M={exp.M},tail={exp.tail:.1e}")
    return _result("truncation_surfaced", float(silent), 0.0, " ".join(outcomes))


ACCEPTANCE: Dict[str, Callable[[], CheckResult]] = {
    "spectrum_exact": check_spectrum,
    "mean_energy_golden": check_mean_energy_golden,
    "quasi_periods": check_quasi_periods,
    "uncertainty_small_r": check_uncertainty_limits,
    "uncertainty_floor": check_uncertainty_floor,
    "annihilation_eigenproperty": check_eigenproperty,
    "moments_cross_oracle": check_moments_cross_oracle,
    "normalization_unitarity": check_normalization,
    "revival_family_C": check_revival,
    "theta0_currents": check_theta0_currents,
    "profile_cross_oracle": check_profile_cross_oracle,
    "orthonormality_eigenresidual": check_physics_core,
}

EXTRA: Dict[str, Callable[[], CheckResult]] = {
    "closed_form_coefficients": check_closed_form_coefficients,
    "truncation_surfaced": check_truncation_surfaced,
}


def run_all(names: Optional[List[str]] = None) -> List[CheckResult]:
    """Run the named checks (default: all) and return their results in order.

    A check that raises is reported as failed rather than aborting the run.
    """
    registry = {**ACCEPTANCE, **EXTRA}
    results = []
    for name in names or list(registry):
        try:
            results.append(registry[name]())
        except GrapheneCSError as err:
            results.append(CheckResult(name, False, math.inf, 0.0, f"{type(err).__name__}: {err}"))
    return results
