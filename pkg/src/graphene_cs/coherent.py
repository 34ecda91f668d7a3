"""Coherent states as eigenstates of the deformed annihilation operator.

The expansion ``Psi_alpha = sum_n a_n Psi_n`` is built from the coefficient
recurrence ``a_{n+1} = alpha a_n / c_{n+1}``, where ``c_n`` is the weight of
``A^- Psi_n = c_n Psi_{n-1}`` (see :func:`graphene_cs.physics.annihilation_weights`).
Three families exist depending on which of ``f(1)``, ``f(2)`` vanish:

* ``A``: ``f(1) != 0``; the series starts at ``Psi_0``.
* ``B``: ``f(1) = 0``, ``f(2) != 0``; starts at ``Psi_1``.
* ``C``: ``f(1) = f(2) = 0``; starts at ``Psi_2``.

Phase convention: the first (free) coefficient is real and positive, so
``a_{s+j}`` carries the phase ``exp(i j theta)`` where ``s`` is the family's
starting index.
"""
import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import TruncationError, ValidationError
from .ladder import LadderFunction
from .numerics import SeriesTruncation
from .physics import (PhysicalParams, SpinorWavefunction, System, annihilation_weights,
                      apply_ladder_down, coefficients_to_spinor)

HARD_CAP = 4096
_RESCALE = 1e100


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"

    @property
    def start(self) -> int:
        return {"A": 0, "B": 1, "C": 2}[self.value]

    @property
    def default_ladder(self) -> LadderFunction:
        return {"A": LadderFunction.unit, "B": LadderFunction.shift1,
                "C": LadderFunction.shift2}[self.value]()

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValidationError(f"family must be A, B or C, got {value!r}") from None

    @classmethod
    def of(cls, f: LadderFunction) -> "Family":
        """Family selected by the zeros of ``f(1)`` and ``f(2)``."""
        if f(1) != 0.0:
            return cls.A
        if f(2) != 0.0:
            return cls.B
        return cls.C


def _polar(alpha):
    if isinstance(alpha, tuple):
        r, theta = (float(v) for v in alpha)
    else:
        z = complex(alpha)
        r, theta = abs(z), cmath.phase(z)
    if not (math.isfinite(r) and math.isfinite(theta)) or r < 0:
        raise ValidationError(f"invalid coherent-state label alpha={alpha!r}")
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0:
        theta += 2.0 * math.pi
    return r, theta


@dataclass(frozen=True, eq=False)
class CoherentExpansion:
    """Normalized coefficients ``a_0..a_M`` of a coherent state.

    ``norm_constant`` is the factor that normalizes the series whose free
    coefficient equals one; ``tail`` estimates the norm of the dropped
    remainder ``sqrt(sum_{n>M} |a_n|^2)``.  ``family`` is ``None`` for plain
    basis states.
    """

    family: Optional[Family]
    r: float
    theta: float
    coefficients: np.ndarray
    norm_constant: float
    tail: float
    system: System = System.BILAYER
    ladder: Optional[LadderFunction] = None
    truncation: Optional[SeriesTruncation] = field(default=None, repr=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def alpha(self) -> complex:
        return cmath.rect(self.r, self.theta)

    @property
    def M(self) -> int:
        return self.coefficients.size - 1

    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def to_spinor(self, params: PhysicalParams = PhysicalParams(), pad: int = 3) -> SpinorWavefunction:
        return coefficients_to_spinor(self.coefficients, self.system, params, pad=pad)

    @classmethod
    def eigenstate(cls, n: int, system=System.BILAYER) -> "CoherentExpansion":
        """Single eigenstate ``Psi_n`` wrapped as an expansion."""
        a = np.zeros(n + 1, dtype=complex)
        a[n] = 1.0
        return cls(None, 0.0, 0.0, a, 1.0, 0.0, System.parse(system))


def build_coherent(family, f: Optional[LadderFunction] = None, alpha=0.0, tol: float = 1e-12,
                   system=System.BILAYER, hard_cap: int = HARD_CAP) -> CoherentExpansion:
    """Coherent state of one family from the coefficient recurrence.

    Parameters
    ----------
    family : Family or {"A", "B", "C"}
        Must agree with the zeros of ``f``.
    f : LadderFunction, optional
        Defaults to the family's standard choice (unit, shift1, shift2).
    alpha : complex or (r, theta)
        Eigenvalue of the annihilation operator.
    tol : float
        Truncate at ``M`` once the coefficient ratio has dropped below one
        and the geometric bound on ``sum_{n>M} |a_n|^2`` is below
        ``tol^2 * sum_{n<=M} |a_n|^2``.
    system : {"bilayer", "monolayer"}
    hard_cap : int
        Largest admissible ``M``.

    Raises
    ------
    ValidationError
        Family/``f`` mismatch, ``tol`` outside ``(0, 1e-6]``, or ``f``
        vanishing past the starting index while ``alpha != 0``.
    TruncationError
        Tolerance not reached within ``hard_cap`` terms.
    """
    family = Family.parse(family)
    system = System.parse(system)
    f = f if f is not None else family.default_ladder
    if not 0.0 < tol <= 1e-6:
        raise ValidationError(f"tol must lie in (0, 1e-6], got {tol}")
    if Family.of(f) is not family:
        raise ValidationError(
            f"ladder function {f.name or f.tag} selects family {Family.of(f).value}, not {family.value}"
        )
    r, theta = _polar(alpha)
    z = cmath.rect(r, theta)
    start = family.start
    tol2 = tol * tol

    coeffs = [0j] * start + [1.0 + 0j]
    norm = 1.0
    log_scale = 0.0
    n = start
    tail2 = 0.0
    chunk = 64
    weights = annihilation_weights(f, start + chunk, system)
    while True:
        if n + 2 >= weights.size:
            weights = annihilation_weights(f, 2 * weights.size, system)
        c_next = weights[n + 1]
        if z == 0:
            break
        if c_next == 0.0:
            raise ValidationError(f"f({n + 1}) = 0 truncates the recurrence; alpha must be 0")
        nxt = z * coeffs[-1] / c_next
        ratio = r / abs(weights[n + 2]) if weights[n + 2] != 0.0 else math.inf
        if ratio < 1.0:
            # geometric bound on the whole dropped remainder
            bound = abs(nxt) ** 2 / (1.0 - ratio * ratio)
            if bound < tol2 * norm:
                tail2 = bound
                break
        if n + 1 > hard_cap:
            raise TruncationError(
                f"coherent series for |alpha|={r} needs more than {hard_cap} terms at tol={tol}"
            )
        coeffs.append(nxt)
        norm += abs(nxt) ** 2
        n += 1
        if abs(nxt) > _RESCALE:
            coeffs = [c / _RESCALE for c in coeffs]
            norm /= _RESCALE ** 2
            log_scale += math.log(_RESCALE)
    a = np.array(coeffs, dtype=complex) / math.sqrt(norm)
    norm_constant = math.exp(-log_scale) / math.sqrt(norm)
    tail = math.sqrt(tail2 / norm)
    trunc = SeriesTruncation(tol, hard_cap, a.size - 1, tail)
    return CoherentExpansion(family, r, theta, a, norm_constant, tail, system, f, trunc)


def closed_form_coefficients(family, alpha, M: int, system=System.BILAYER) -> np.ndarray:
    """Closed-form coefficients for the three standard ladder choices.

    Evaluated in log space (``gammaln``) for ``n = 0..M`` and normalized by
    the closed-form prefactor, not by summing the truncated vector.
    """
    family = Family.parse(family)
    system = System.parse(system)
    r, theta = _polar(alpha)
    n = np.arange(M + 1, dtype=float)
    a = np.zeros(M + 1, dtype=complex)
    r2 = r * r
    # at r = 0 only the free coefficient survives; 0 * log(0) is taken as 0
    logr = math.log(r) if r > 0 else 0.0

    def put(idx, log_mag, power):
        phase = np.exp(1j * power * theta)
        mag = np.exp(log_mag) if r > 0 else np.where(power == 0, np.exp(log_mag), 0.0)
        a[idx] = mag * phase

    if family is Family.A:
        if system is System.BILAYER:
            pref = 1.0 / math.sqrt(2.0 * math.exp(r2) - r2 - 1.0)
            a[0] = 1.0
            if M >= 1:
                a[1] = cmath.rect(r, theta)
            idx = n[2:]
            put(slice(2, None), 0.5 * math.log(2.0) + idx * logr - 0.5 * gammaln(idx + 1), idx)
        else:
            pref = 1.0 / math.sqrt(2.0 * math.exp(r2) - 1.0)
            a[0] = 1.0
            idx = n[1:]
            put(slice(1, None), 0.5 * math.log(2.0) + idx * logr - 0.5 * gammaln(idx + 1), idx)
    elif family is Family.B:
        j = n[1:] - 1  # a_{j+1}
        if system is System.BILAYER:
            pref = 1.0 / math.sqrt(2.0 * math.exp(r2) - 1.0)
            a[1] = 1.0
            jj = j[1:]
            put(slice(2, None), 0.5 * math.log(2.0) + jj * logr - 0.5 * gammaln(jj + 1), jj)
        else:
            pref = math.exp(-r2 / 2.0)
            put(slice(1, None), j * logr - 0.5 * gammaln(j + 1), j)
    else:
        pref = 1.0 / math.sqrt(hypergeometric_0F2(1.0, 2.0, r2))
        j = n[2:] - 2
        put(slice(2, None), j * logr - gammaln(j + 1) - 0.5 * gammaln(j + 2), j)
    return pref * a


def annihilation_residual(exp: CoherentExpansion, f: Optional[LadderFunction] = None) -> float:
    """``|| A^- Psi_alpha - alpha Psi_alpha ||`` on the truncated spinor.

    For the truncated series this equals ``|alpha a_M|`` up to rounding.
    """
    f = f if f is not None else exp.ladder
    if f is None:
        raise ValidationError("a ladder function is required for basis-state expansions")
    psi = exp.to_spinor()
    return (apply_ladder_down(psi, f) - psi.scaled(exp.alpha)).norm()


def hypergeometric_0F2(b1: float, b2: float, x: float) -> float:
    """``0F2(;b1, b2; x)`` by direct summation of the positive series.

    Term recurrence ``t_{n+1} = t_n x / ((b1 + n)(b2 + n)(n + 1))``; stops
    once ``t_n <= 1e-16 * sum``.
    """
    for b in (b1, b2):
        if not math.isfinite(b) or (b <= 0 and float(b).is_integer()):
            raise ValidationError(f"0F2 lower parameter {b} must not be a non-positive integer")
    if not (math.isfinite(x) and x >= 0):
        raise ValidationError(f"0F2 argument must be finite and non-negative, got {x}")
    term = 1.0
    total = 1.0
    n = 0
    while n < HARD_CAP:
        term *= x / ((b1 + n) * (b2 + n) * (n + 1))
        total += term
        n += 1
        if abs(term) <= 1e-16 * abs(total):
            return total
    raise TruncationError(f"0F2 series for x={x} did not converge")
