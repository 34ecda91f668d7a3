import math

import numpy as np
import pytest

from graphene_cs import GridSpec, finite_difference, gauss_hermite, hermite_psi, quadrature
from graphene_cs.errors import TruncationError, ValidationError
from graphene_cs.numerics import sum_series


def test_grid_spacing_uniform():
    g = GridSpec(-1.0, 1.0, 101)
    assert g.spacing == pytest.approx(0.02)
    assert np.allclose(np.diff(g.x), g.spacing)


@pytest.mark.parametrize("lo,hi,pts", [(1.0, 1.0, 100), (2.0, 1.0, 100), (0.0, 1.0, 15)])
def test_grid_rejects_bad_specs(lo, hi, pts):
    with pytest.raises(ValidationError):
        GridSpec(lo, hi, pts)


@pytest.mark.parametrize("method", ["trapezoid", "simpson"])
def test_quadrature_constant(method):
    g = GridSpec(0.0, 1.0, 101)
    assert abs(quadrature(np.ones(101), g, method) - 1.0) < 1e-12


def test_quadrature_ground_state_normalized(params):
    sigma = params.length_scale
    g = GridSpec.centered(params.center, 8 * sigma, 2001)
    assert abs(quadrature(hermite_psi(0, g.x, params) ** 2, g) - 1.0) < 1e-8


def test_quadrature_orthogonal_pair(params):
    g = GridSpec.centered(params.center, 10 * params.length_scale, 2001)
    val = quadrature(hermite_psi(5, g.x, params) * hermite_psi(7, g.x, params), g)
    assert abs(val) < 1e-8


def test_quadrature_length_mismatch():
    with pytest.raises(ValidationError):
        quadrature(np.ones(20), GridSpec(0, 1, 21))


def test_trapezoid_order_under_refinement():
    # non-periodic smooth integrand, so the trapezoid rule shows its h^2 order
    exact = math.e - 1.0
    errs = [abs(quadrature(np.exp(np.linspace(0, 1, n)), np.linspace(0, 1, n)) - exact)
            for n in (33, 65, 129)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 1.9


def test_simpson_beats_trapezoid():
    x = np.linspace(0, 1, 65)
    exact = math.e - 1.0
    assert abs(quadrature(np.exp(x), x, "simpson") - exact) < abs(quadrature(np.exp(x), x) - exact)


def test_finite_difference_square():
    assert abs(finite_difference(lambda x: x * x, 3.0, 1e-5) - 6.0) < 1e-8


def test_finite_difference_ground_state_at_centre(params):
    assert abs(finite_difference(lambda x: hermite_psi(0, x, params), params.center)) < 1e-8


def test_finite_difference_rejects_step():
    with pytest.raises(ValidationError):
        finite_difference(math.sin, 0.0, 0.0)


def test_gauss_hermite_moment():
    nodes, weights = gauss_hermite(20)
    assert np.sum(weights * nodes ** 2) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


def test_sum_series_exponential():
    total, trunc = sum_series(lambda n: 1.0 / math.factorial(n))
    assert total == pytest.approx(math.e, rel=1e-15)
    assert trunc.converged


def test_sum_series_cap():
    with pytest.raises(TruncationError):
        sum_series(lambda n: 1.0, hard_cap=50)


def test_tail_bound_monotone_in_cap():
    tails = []
    for cap in (8, 16, 32, 64, 128):
        try:
            _, trunc = sum_series(lambda n: 2.0 ** -n, tol=1e-12, hard_cap=cap)
            tails.append(trunc.tail_bound)
        except TruncationError:
            tails.append(math.inf)
    assert all(b <= a for a, b in zip(tails, tails[1:]))
    assert math.isfinite(tails[-1])
