import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphene_cs import (EigenstateLabel, LadderFunction, PhysicalParams, SpinorWavefunction, System,
                         apply_hamiltonian, apply_ladder_down, apply_ladder_up, bilayer_energy,
                         build_eigenstate, finite_difference, hermite_functions, hermite_psi,
                         hermite_psi_derivative, level_energy, monolayer_energy, quadrature, spectrum)
from graphene_cs.errors import ValidationError
from graphene_cs.numerics import GridSpec
from graphene_cs.physics import annihilation_weights, coefficients_to_spinor, spinor_to_coefficients

LADDERS = [LadderFunction.unit(), LadderFunction.shift1(), LadderFunction.shift2(),
           LadderFunction.custom(lambda n: 1.0 + 0.3 * math.sin(n), "wiggle")]


def mp_psi(n, x, params):
    """Oscillator function from mpmath's Hermite polynomials at 40 digits."""
    with mpmath.workdps(40):
        xi = mpmath.sqrt(mpmath.mpf(params.omega) / 2) * (mpmath.mpf(x) + 2 * mpmath.mpf(params.k) / params.omega)
        norm = mpmath.sqrt(mpmath.mpf(2) ** n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
        val = (mpmath.mpf(params.omega) / 2) ** mpmath.mpf(0.25) * mpmath.hermite(n, xi) * mpmath.exp(-xi ** 2 / 2) / norm
        return float(val)


class TestParams:
    def test_defaults_give_unit_scales(self, params):
        assert params.omega == 1.0
        assert params.center == -2.0
        assert params.v_fermi * math.sqrt(params.omega) == 1.0

    def test_inconsistent_omega(self):
        with pytest.raises(ValidationError):
            PhysicalParams(omega=2.0)

    def test_from_omega_roundtrip(self):
        p = PhysicalParams.from_omega(3.0)
        assert p.omega == pytest.approx(3.0)

    @pytest.mark.parametrize("field", ["hbar", "m_star", "omega_c_star", "v_fermi"])
    def test_rejects_nonpositive(self, field):
        with pytest.raises(ValidationError):
            PhysicalParams(**{field: 0.0})

    def test_field_proxy(self):
        assert PhysicalParams.from_field(0.25).omega_c_star == 0.25


class TestHermite:
    @pytest.mark.parametrize("n", [0, 1, 5, 17, 60])
    def test_matches_mpmath(self, n, params):
        xs = params.center + np.array([-9.0, -3.3, -0.7, 0.0, 1.1, 4.2, 10.5])
        got = hermite_psi(n, xs, params)
        ref = np.array([mp_psi(n, x, params) for x in xs])
        assert np.max(np.abs(got - ref)) < 1e-10

    def test_high_index_finite(self, params):
        xs = np.linspace(-60, 60, 301)
        assert np.all(np.isfinite(hermite_functions(400, xs, params)))

    def test_nondefault_omega(self):
        p = PhysicalParams.from_omega(2.5, k=0.4)
        xs = np.array([-1.0, 0.2, 0.9])
        ref = [mp_psi(7, x, p) for x in xs]
        assert np.allclose(hermite_psi(7, xs, p), ref, atol=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 4, 12, 30])
    def test_derivative_matches_finite_difference(self, n, params):
        for x in (-4.1, -2.0, -0.3, 1.7):
            fd = finite_difference(lambda s: float(hermite_psi(n, s, params)), x, 1e-5)
            assert abs(float(hermite_psi_derivative(n, x, params)) - fd) < 1e-6

    def test_orthonormal_to_40(self, params):
        g = GridSpec.centered(params.center, 30.0, 4001)
        t = hermite_functions(40, g.x, params)
        gram = np.array([[quadrature(t[i] * t[j], g) for j in range(41)] for i in range(41)])
        assert np.max(np.abs(gram - np.eye(41))) < 1e-8

    def test_rejects_negative_index(self, params):
        with pytest.raises(ValidationError):
            hermite_psi(-1, 0.0, params)


class TestSpectrum:
    def test_bilayer_exact(self):
        assert bilayer_energy(0) == bilayer_energy(1) == 0.0
        assert bilayer_energy(2) == math.sqrt(2.0)
        assert bilayer_energy(3) == math.sqrt(6.0)

    def test_monolayer_values(self):
        assert np.allclose(spectrum(4, System.MONOLAYER), [0, 1, math.sqrt(2), math.sqrt(3), 2], atol=0)

    def test_hole_branch(self):
        assert bilayer_energy(4, branch=-1) == -bilayer_energy(4)
        assert monolayer_energy(4, branch=-1) == -2.0

    def test_array_matches_scalar(self):
        for system in System:
            e = spectrum(30, system)
            assert all(e[n] == level_energy(n, system) for n in range(31))

    def test_scaling(self):
        p = PhysicalParams(omega_c_star=3.0)
        assert bilayer_energy(5, params=p) == pytest.approx(3.0 * bilayer_energy(5))


class TestOperators:
    @pytest.mark.parametrize("system", list(System))
    @pytest.mark.parametrize("branch", [1, -1])
    def test_eigen_residual(self, system, branch, params):
        for n in range(41):
            psi = build_eigenstate(EigenstateLabel(n, branch), 42, params, system)
            resid = apply_hamiltonian(psi) - psi.scaled(level_energy(n, system, params, branch))
            assert resid.norm() < 1e-10

    def test_eigenstates_normalized(self):
        for n in range(10):
            assert build_eigenstate(n, 12).norm() == pytest.approx(1.0, abs=1e-15)

    def test_branches_orthogonal(self):
        plus = build_eigenstate(EigenstateLabel(4, 1), 6)
        minus = build_eigenstate(EigenstateLabel(4, -1), 6)
        assert abs(plus.inner(minus)) < 1e-15

    def test_truncation_below_index(self):
        with pytest.raises(ValidationError):
            build_eigenstate(5, 3)

    @pytest.mark.parametrize("system", list(System))
    @pytest.mark.parametrize("f", LADDERS, ids=lambda f: f.tag + f.name)
    def test_annihilation_weights_on_eigenstates(self, system, f):
        c = annihilation_weights(f, 12, system)
        for n in range(1, 10):
            down = apply_ladder_down(build_eigenstate(n, 12, system=system), f)
            expected = build_eigenstate(n - 1, 12, system=system).scaled(c[n])
            assert (down - expected).norm() < 1e-12

    @pytest.mark.parametrize("system", list(System))
    @pytest.mark.parametrize("f", LADDERS, ids=lambda f: f.tag + f.name)
    def test_ladder_consistency(self, system, f):
        for n in [0] + list(range(2, 9)):
            psi = build_eigenstate(n, 12, system=system)
            back = apply_ladder_down(apply_ladder_up(psi, f), f)
            ref = psi.padded(back.size)
            overlap = ref.inner(back)
            assert (back - ref.scaled(overlap)).norm() < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from(list(System)), st.sampled_from(range(len(LADDERS))))
    def test_adjointness(self, seed, system, fi):
        f = LADDERS[fi]
        rng = np.random.default_rng(seed)
        size = 24

        def random_state():
            v = rng.normal(size=(2, size)) + 1j * rng.normal(size=(2, size))
            v[:, -3:] = 0.0  # guard band keeps the support interior
            return SpinorWavefunction(v[0], v[1], 1.0, PhysicalParams(), system)

        phi, chi = random_state(), random_state()
        lhs = apply_ladder_up(phi, f).inner(chi.padded(size + 1))
        rhs = phi.inner(apply_ladder_down(chi, f))
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))

    def test_projection_roundtrip(self):
        a = np.array([0.3, 0.1j, 0.5, -0.2, 0.4 + 0.1j])
        psi = coefficients_to_spinor(a, System.BILAYER, pad=0)
        assert np.allclose(spinor_to_coefficients(psi), a)
