"""Grids, quadrature, finite differences and series-tail bookkeeping."""
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import TruncationError, ValidationError

MIN_POINTS = 16


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[x_min, x_max]`` with ``points`` samples."""

    x_min: float
    x_max: float
    points: int = 801

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError(f"x_min ({self.x_min}) must be below x_max ({self.x_max})")
        if int(self.points) != self.points or self.points < MIN_POINTS:
            raise ValidationError(f"grid needs an integer number of points >= {MIN_POINTS}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, int(self.points))

    @classmethod
    def centered(cls, center: float, half_width: float, points: int = 801) -> "GridSpec":
        return cls(center - half_width, center + half_width, points)


def quadrature(samples, grid, method: str = "trapezoid") -> float:
    """Integrate samples taken on a uniform grid.

    Parameters
    ----------
    samples : array_like
        Function values, one per grid point.
    grid : GridSpec or array_like
        Either a ``GridSpec`` or the sample abscissae themselves.
    method : {"trapezoid", "simpson"}
        Composite trapezoid (error O(h^2)) or Simpson (O(h^4)).

    Raises
    ------
    ValidationError
        If lengths differ, fewer than 16 points are given or the method is
        unknown.
    """
    x = grid.x if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    y = np.asarray(samples)
    if y.shape[-1] != x.size:
        raise ValidationError(f"{y.shape[-1]} samples for a grid of {x.size} points")
    if x.size < MIN_POINTS:
        raise ValidationError(f"quadrature needs at least {MIN_POINTS} points")
    if method == "trapezoid":
        return float(integrate.trapezoid(y, x))
    if method == "simpson":
        return float(integrate.simpson(y, x=x))
    raise ValidationError(f"unknown quadrature method {method!r}")


def gauss_hermite(order: int):
    """Nodes and weights for ``int exp(-xi^2) g(xi) dxi``."""
    return np.polynomial.hermite.hermgauss(order)


def finite_difference(fn, x: float, h: float = 1e-5) -> float:
    """Central difference ``(f(x+h) - f(x-h)) / 2h``."""
    if not h > 0:
        raise ValidationError("step h must be positive")
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class SeriesTruncation:
    """Outcome of truncating a convergent series.

    ``tail_bound`` estimates the dropped remainder relative to the retained
    sum; ``achieved_M`` is the last retained index.
    """

    tol: float
    hard_cap: int
    achieved_M: int
    tail_bound: float

    @property
    def converged(self) -> bool:
        return self.tail_bound <= self.tol


def sum_series(term, tol: float = 1e-16, hard_cap: int = 4096, start: int = 0,
               min_terms: int = 4) -> tuple[float, SeriesTruncation]:
    """Sum ``term(n)`` for ``n >= start`` until the relative term drops below ``tol``.

    Intended for the positive, eventually decreasing series used for
    normalization constants and closed-form moments.  Stops once three
    consecutive terms fall below ``tol`` times the running sum.
    """
    total = 0.0
    quiet = 0
    n = start
    last = 0.0
    while n - start < hard_cap:
        t = term(n)
        total += t
        last = abs(t)
        if n - start + 1 >= min_terms and last <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        n += 1
    else:
        raise TruncationError(f"series did not converge within {hard_cap} terms")
    tail = last / abs(total) if total else 0.0
    return total, SeriesTruncation(tol, hard_cap, n, tail)
