import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphene_cs import (Family, GridSpec, LadderFunction, PhysicalParams, System, build_coherent,
                         default_grid, expectation_energy, field_profile, hermite_psi,
                         hermite_psi_derivative,
                         integrate_profile, mean_energy, moments_closed_form, moments_spectral,
                         quadrature)
from graphene_cs.coherent import CoherentExpansion
from graphene_cs.errors import GridTooNarrowError, TruncationError, ValidationError
from graphene_cs.observables import continuity_residual
from graphene_cs.physics import coefficients_to_spinor

FAMILIES = list(Family)


def quadrature_moments(exp, params):
    """<q>, <q^2>, <p^2> from sampled wavefunctions: an oracle independent of the ladder algebra."""
    grid = GridSpec.centered(params.center, 40.0, 8001)
    xi = params.xi(grid.x)
    spinor = coefficients_to_spinor(exp.coefficients, exp.system, params, pad=0)
    nmax = spinor.size - 1
    table = np.array([hermite_psi(n, grid.x, params) for n in range(nmax + 1)])
    dtable = np.array([hermite_psi_derivative(n, grid.x, params) for n in range(nmax + 1)])
    dtable /= math.sqrt(params.omega / 2)
    rho = sum(np.abs(c @ table) ** 2 for c in (spinor.upper, spinor.lower))
    dsq = sum(np.abs(c @ dtable) ** 2 for c in (spinor.upper, spinor.lower))
    return quadrature(xi * rho, grid), quadrature(xi ** 2 * rho, grid), quadrature(dsq, grid)


class TestMoments:
    def test_family_a_vacuum(self):
        rep = moments_spectral(build_coherent("A", alpha=0.0))
        assert rep.mean_q == 0 and rep.mean_p == 0
        assert rep.product == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("family", [Family.B, Family.C])
    def test_small_alpha_limit(self, family):
        assert moments_spectral(build_coherent(family, alpha=1e-4)).product == pytest.approx(1.5, abs=1e-3)

    def test_real_alpha_zero_momentum(self):
        assert moments_closed_form("A", 1.3).mean_p == 0.0

    def test_imaginary_alpha_zero_position(self):
        assert moments_closed_form("A", 1.3j).mean_q == 0.0

    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("alpha", [1.0, 0.8 * np.exp(0.9j), 2.2 * np.exp(-2.0j)])
    def test_against_quadrature_oracle(self, family, alpha, params):
        exp = build_coherent(family, alpha=alpha)
        rep = moments_spectral(exp)
        q, q2, p2 = quadrature_moments(exp, params)
        assert rep.mean_q == pytest.approx(q, abs=1e-9)
        assert rep.mean_q2 == pytest.approx(q2, abs=1e-9)
        assert rep.mean_p2 == pytest.approx(p2, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.0, 2 * math.pi), st.sampled_from(FAMILIES))
    def test_closed_form_matches_spectral(self, r, theta, family):
        a = moments_spectral(build_coherent(family, alpha=(r, theta))).as_row()
        b = moments_closed_form(family, r * np.exp(1j * theta)).as_row()
        assert np.allclose(a, b, rtol=0, atol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.0, 2 * math.pi), st.sampled_from(FAMILIES))
    def test_uncertainty_floor(self, r, theta, family):
        rep = moments_spectral(build_coherent(family, alpha=(r, theta)))
        assert rep.product >= 0.5 - 1e-9
        assert rep.mean_q2 >= rep.mean_q ** 2 and rep.mean_p2 >= rep.mean_p ** 2

    def test_guard_band(self):
        full = build_coherent("A", alpha=2.0)
        cut = full.coefficients[:8] / np.linalg.norm(full.coefficients[:8])
        short = CoherentExpansion(Family.A, 2.0, 0.0, cut, 1.0, 0.1, System.BILAYER, full.ladder)
        with pytest.raises(TruncationError):
            moments_spectral(short)

    def test_built_expansions_pass_guard(self):
        for tol in (1e-6, 1e-12):
            for r in (1e-6, 0.5, 3.0):
                moments_spectral(build_coherent("B", alpha=r, tol=tol))

    def test_unsupported_ladder_pair(self):
        with pytest.raises(ValidationError):
            moments_closed_form("A", 1.0, LadderFunction.custom(lambda n: 2.0))

    def test_monolayer_spectral_floor(self):
        assert moments_spectral(build_coherent("B", alpha=1.0, system="monolayer")).product >= 0.5


class TestEnergy:
    @pytest.mark.parametrize("system,family,golden", [
        ("bilayer", "A", 0.76), ("bilayer", "B", 1.56),
        ("monolayer", "A", 0.95), ("monolayer", "B", 1.37), ("monolayer", "C", 1.53),
    ])
    def test_golden_values(self, system, family, golden):
        assert abs(mean_energy(family, 1.0, system=system) - golden) < 0.005

    @pytest.mark.parametrize("system", list(System))
    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("r", [0.1, 1.0, 2.7])
    def test_series_matches_generic(self, system, family, r):
        a = mean_energy(family, r, system=system)
        b = mean_energy(family, r, system=system, method="generic")
        assert a == pytest.approx(b, rel=1e-10, abs=1e-14)

    def test_bilayer_a_against_mpmath(self):
        with mpmath.workdps(30):
            e = mpmath.e
            s = mpmath.nsum(lambda n: mpmath.sqrt(n * (n - 1)) / mpmath.factorial(n), [2, mpmath.inf])
            ref = float(2 * s / (2 * e - 2))
        assert mean_energy("A", 1.0) == pytest.approx(ref, rel=1e-13)

    def test_family_c_at_zero(self):
        assert mean_energy("C", 0.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert mean_energy("A", 0.0) == 0.0 and mean_energy("B", 0.0) == 0.0

    @pytest.mark.parametrize("family", FAMILIES)
    def test_monotone_in_r(self, family):
        values = [mean_energy(family, r) for r in np.arange(0, 3.01, 0.25)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_linear_in_cyclotron_frequency(self):
        base = mean_energy("B", 1.2)
        for wc in (0.25, 3.0):
            assert mean_energy("B", 1.2, PhysicalParams(omega_c_star=wc)) == pytest.approx(wc * base, rel=1e-13)

    def test_expectation_of_eigenstate(self):
        assert expectation_energy(CoherentExpansion.eigenstate(5)) == pytest.approx(math.sqrt(20.0))

    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            mean_energy("A", 1.0, method="magic")


def fd_currents(exp, x, params):
    """Bilayer currents from finite differences of independently sampled components."""
    spinor = coefficients_to_spinor(exp.coefficients, exp.system, params, pad=0)
    h = 1e-5

    def comps(at):
        table = np.array([hermite_psi(n, at, params) for n in range(spinor.size)])
        return spinor.upper @ table, spinor.lower @ table

    u, l = comps(x)
    (up, lp), (um, lm) = comps(x + h), comps(x - h)
    du, dl = (up - um) / (2 * h), (lp - lm) / (2 * h)
    k = params.k
    # j_x = sigma_x d_x + sigma_y d_y, j_y = sigma_y d_x - sigma_x d_y with d_y -> i k
    jx_op = np.stack([dl + k * l, du - k * u])
    jy_op = np.stack([-1j * dl - 1j * k * l, 1j * du - 1j * k * u])
    psi_c = np.conj(np.stack([u, l]))
    return np.sum(psi_c * jx_op, axis=0).imag, np.sum(psi_c * jy_op, axis=0).imag


class TestProfiles:
    def test_vacuum_density(self, params):
        exp = build_coherent("A", alpha=0.0)
        prof = field_profile(exp)
        assert np.allclose(prof.rho, hermite_psi(0, prof.x, params) ** 2, atol=1e-15)
        assert np.max(np.abs(prof.jx)) < 1e-15

    @pytest.mark.parametrize("family", FAMILIES)
    def test_theta_zero_current_along_y(self, family):
        prof = field_profile(build_coherent(family, alpha=1.0))
        assert np.max(np.abs(prof.jx)) < 1e-10
        assert np.max(np.abs(prof.jy)) > 0

    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("theta", [0.3, math.pi / 4, 2.0])
    def test_currents_against_finite_differences(self, family, theta, params):
        exp = build_coherent(family, alpha=(1.0, theta))
        x = np.linspace(params.center - 6, params.center + 6, 97)
        prof = field_profile(exp, GridSpec(params.center - 12, params.center + 12, 1601))
        jx_ref, jy_ref = fd_currents(exp, x, params)
        assert np.allclose(np.interp(x, prof.x, prof.jx), jx_ref, atol=2e-3)
        prof_pts = field_profile(exp, np.concatenate([[params.center - 12], x, [params.center + 12]]),
                                 check_tail=False)
        assert np.allclose(prof_pts.jx[1:-1], jx_ref, atol=1e-8)
        assert np.allclose(prof_pts.jy[1:-1], jy_ref, atol=1e-8)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_closed_form_cross_check(self, family):
        exp = build_coherent(family, alpha=(1.0, math.pi / 4))
        grid = default_grid(exp)
        g = field_profile(exp, grid)
        c = field_profile(exp, grid, mode="closed_form")
        assert np.max(np.abs(g.rho - c.rho)) < 1e-6
        assert np.max(np.abs(g.jx - c.jx)) < 1e-6
        assert np.max(np.abs(g.jy - c.jy)) < 1e-6

    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("system", list(System))
    def test_density_normalized_and_nonnegative(self, family, system):
        prof = field_profile(build_coherent(family, alpha=(1.7, 0.6), system=system))
        assert np.min(prof.rho) >= -1e-12
        assert integrate_profile(prof) == pytest.approx(1.0, abs=1e-6)

    def test_eigenstate_integrates_to_one(self):
        prof = field_profile(CoherentExpansion.eigenstate(3))
        assert integrate_profile(prof) == pytest.approx(1.0, abs=1e-6)

    def test_half_line(self, params):
        prof = field_profile(build_coherent("B", alpha=1.0))
        half = integrate_profile(prof.restrict(prof.x <= params.center))
        assert 0.0 < half < 1.0

    def test_peak_moves_with_theta(self):
        a = field_profile(build_coherent("A", alpha=(1.0, 0.0)))
        b = field_profile(build_coherent("A", alpha=(1.0, math.pi / 2)), a.x)
        step = a.x[1] - a.x[0]
        assert abs(a.x[np.argmax(a.rho)] - b.x[np.argmax(b.rho)]) > step

    def test_grid_span_enforced(self, params):
        with pytest.raises(ValidationError):
            field_profile(build_coherent("A", alpha=1.0), GridSpec(params.center - 4, params.center + 4, 401))

    def test_grid_too_narrow_for_state(self, params):
        exp = build_coherent("A", alpha=4.0)
        with pytest.raises(GridTooNarrowError):
            field_profile(exp, GridSpec(params.center - 8.5, params.center + 8.5, 801))

    def test_monolayer_closed_form_rejected(self):
        exp = build_coherent("A", alpha=1.0, system="monolayer")
        with pytest.raises(ValidationError):
            field_profile(exp, mode="closed_form")

    def test_monolayer_current_is_spinor_overlap(self, params):
        exp = build_coherent("B", alpha=(1.0, 0.7), system="monolayer")
        prof = field_profile(exp)
        spinor = coefficients_to_spinor(exp.coefficients, "monolayer", params, pad=0)
        table = np.array([hermite_psi(n, prof.x, params) for n in range(spinor.size)])
        ul = np.conj(spinor.upper @ table) * (spinor.lower @ table)
        assert np.allclose(prof.jx, 2 * ul.real, atol=1e-13)
        assert np.allclose(prof.jy, 2 * ul.imag, atol=1e-13)

    def test_nondefault_parameters(self):
        p = PhysicalParams(omega_c_star=2.0, k=-0.5)
        prof = field_profile(build_coherent("C", alpha=0.9), params=p)
        assert integrate_profile(prof) == pytest.approx(1.0, abs=1e-6)
        assert abs(prof.x[np.argmax(prof.rho)] - p.center) < 3 * p.length_scale

    def test_negative_time_rejected(self):
        with pytest.raises(ValidationError):
            field_profile(build_coherent("A", alpha=1.0), t=-1.0)


class TestContinuityDiagnostic:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_kinetic_current_conserves_probability(self, family):
        out = continuity_residual(build_coherent(family, alpha=(1.0, 0.7)), t=0.5)
        # the kinetic current closes the balance to finite-difference accuracy
        assert out["max_residual_kinetic"] < 1e-3
        # the profile current (no vector potential) does not
        assert out["max_residual"] > 10 * out["max_residual_kinetic"]
