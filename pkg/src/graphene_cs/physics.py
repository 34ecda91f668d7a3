"""Oscillator basis, Landau spectra, spinor eigenstates and ladder operators.

Conventions
-----------
States are two-component spinors ``exp(i k y) (u(x), l(x))``.  The plane-wave
factor is never sampled; a spinor is stored as two coefficient vectors over
the oscillator basis ``psi_m``::

    u(x) = sum_m upper[m] psi_m(x),    l(x) = sum_m lower[m] psi_m(x)

with ``psi_m(x) = (omega/2)**(1/4) phi_m(xi)``, ``xi = sqrt(omega/2) (x + 2k/omega)``
and ``phi_m`` the orthonormal Hermite functions in ``xi``.

Bilayer eigenstates are ``(0, psi_n)`` for ``n = 0, 1`` and
``(psi_{n-2}, psi_n)/sqrt(2)`` for ``n >= 2`` with energy
``hbar omega_c sqrt(n (n-1))``; monolayer eigenstates are ``(0, psi_0)`` and
``(psi_{n-1}, psi_n)/sqrt(2)`` with energy ``hbar v_F sqrt(n omega)``.

The Hamiltonian is applied with ``b^-``/``b^+`` acting as the standard
lowering/raising operators on the ``psi_m`` index.  Relative to the
``a^{+-}`` built from ``xi`` the ``b`` operators carry phases
(``b^+ = i a^+``, ``b^- = -i a^-``); absorbing them into the basis phase keeps
the standard eigenstates above on the positive branch.
"""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import ValidationError
from .ladder import LadderFunction

_REL_TOL = 1e-12


class System(str, Enum):
    BILAYER = "bilayer"
    MONOLAYER = "monolayer"

    @classmethod
    def parse(cls, value) -> "System":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"system must be 'bilayer' or 'monolayer', got {value!r}") from None


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class PhysicalParams:
    """Physical scales in one consistent unit system.

    ``omega = 2 m_star omega_c_star / hbar`` is derived; passing ``omega``
    explicitly only checks consistency.  The defaults (``hbar = 1``,
    ``m_star = 1/2``, ``omega_c_star = 1``) give ``omega = 1``, ``k = 1`` and
    ``v_F sqrt(omega) = 1``, the scales of every plotted result.
    ``b_field`` is a proxy with ``omega_c_star = field_coupling * b_field``.
    """

    hbar: float = 1.0
    m_star: float = 0.5
    omega_c_star: float = 1.0
    k: float = 1.0
    v_fermi: float = 1.0
    field_coupling: float = 1.0
    omega: float = field(default=None)

    def __post_init__(self):
        for name in ("hbar", "m_star", "omega_c_star", "v_fermi", "field_coupling"):
            _positive(name, getattr(self, name))
        if not math.isfinite(self.k):
            raise ValidationError("k must be finite")
        derived = 2.0 * self.m_star * self.omega_c_star / self.hbar
        if self.omega is not None:
            _positive("omega", self.omega)
            if abs(self.omega - derived) > _REL_TOL * derived:
                raise ValidationError(
                    f"omega={self.omega} inconsistent with 2 m* omega_c/hbar = {derived}"
                )
        object.__setattr__(self, "omega", derived)

    @property
    def b_field(self) -> float:
        return self.omega_c_star / self.field_coupling

    @property
    def center(self) -> float:
        """Orbit centre ``-2k/omega`` of the oscillator functions."""
        return -2.0 * self.k / self.omega

    @property
    def length_scale(self) -> float:
        """``dx/dxi = sqrt(2/omega)``."""
        return math.sqrt(2.0 / self.omega)

    def xi(self, x):
        return np.sqrt(self.omega / 2.0) * (np.asarray(x, dtype=float) + 2.0 * self.k / self.omega)

    def with_(self, **changes) -> "PhysicalParams":
        values = {n: getattr(self, n) for n in
                  ("hbar", "m_star", "omega_c_star", "k", "v_fermi", "field_coupling")}
        values.update(changes)
        return PhysicalParams(**values)

    @classmethod
    def from_omega(cls, omega: float, **kwargs) -> "PhysicalParams":
        hbar = kwargs.get("hbar", 1.0)
        m_star = kwargs.get("m_star", 0.5)
        kwargs["omega_c_star"] = omega * hbar / (2.0 * m_star)
        return cls(**kwargs)

    @classmethod
    def from_field(cls, b_field: float, **kwargs) -> "PhysicalParams":
        coupling = kwargs.get("field_coupling", 1.0)
        kwargs["omega_c_star"] = coupling * b_field
        return cls(**kwargs)


@dataclass(frozen=True)
class EigenstateLabel:
    n: int
    branch: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"eigenstate index must be a non-negative integer, got {self.n}")
        if self.branch not in (1, -1):
            raise ValidationError("branch must be +1 (electron) or -1 (hole)")


@dataclass(frozen=True, eq=False)
class SpinorWavefunction:
    """Spinor stored as upper/lower oscillator coefficient vectors."""

    upper: np.ndarray
    lower: np.ndarray
    k: float = 1.0
    params: PhysicalParams = field(default_factory=PhysicalParams)
    system: System = System.BILAYER

    def __post_init__(self):
        up = np.array(self.upper, dtype=complex).ravel()
        lo = np.array(self.lower, dtype=complex).ravel()
        if up.size != lo.size:
            raise ValidationError(
                f"upper ({up.size}) and lower ({lo.size}) must have the same length"
            )
        up.setflags(write=False)
        lo.setflags(write=False)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "system", System.parse(self.system))

    @property
    def size(self) -> int:
        return self.upper.size

    def norm2(self) -> float:
        return float(np.vdot(self.upper, self.upper).real + np.vdot(self.lower, self.lower).real)

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def padded(self, size: int) -> "SpinorWavefunction":
        if size < self.size:
            raise ValidationError("cannot pad to a shorter length")
        extra = size - self.size
        return self._replace(np.pad(self.upper, (0, extra)), np.pad(self.lower, (0, extra)))

    def inner(self, other: "SpinorWavefunction") -> complex:
        """``<self|other>``; vectors are zero-padded to a common length."""
        size = max(self.size, other.size)
        a, b = self.padded(size), other.padded(size)
        return complex(np.vdot(a.upper, b.upper) + np.vdot(a.lower, b.lower))

    def __add__(self, other):
        size = max(self.size, other.size)
        a, b = self.padded(size), other.padded(size)
        return self._replace(a.upper + b.upper, a.lower + b.lower)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, c: complex) -> "SpinorWavefunction":
        return self._replace(c * self.upper, c * self.lower)

    def _replace(self, upper, lower) -> "SpinorWavefunction":
        return SpinorWavefunction(upper, lower, self.k, self.params, self.system)


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("x must be finite")
    return arr


def _check_n(n):
    if int(n) != n or n < 0:
        raise ValidationError(f"oscillator index must be a non-negative integer, got {n}")
    return int(n)


def hermite_psi(n: int, x, params: PhysicalParams = PhysicalParams()):
    """Oscillator eigenfunction ``psi_n(x)`` from the normalized recurrence.

    Never forms ``H_n`` or ``n!``; stable for ``n`` in the thousands.
    """
    n = _check_n(n)
    arr = _check_x(x)
    xi = params.xi(arr).ravel()
    vals = kernels.hermite_table(n, xi)[n] * (params.omega / 2.0) ** 0.25
    return vals.reshape(arr.shape) if arr.ndim else float(vals[0])


def hermite_psi_derivative(n: int, x, params: PhysicalParams = PhysicalParams()):
    """``d psi_n / dx`` from ``dphi_n/dxi = sqrt(2n) phi_{n-1} - xi phi_n``."""
    n = _check_n(n)
    arr = _check_x(x)
    xi = params.xi(arr).ravel()
    table = kernels.hermite_table(n, xi)
    dxi = -xi * table[n]
    if n > 0:
        dxi = dxi + math.sqrt(2.0 * n) * table[n - 1]
    vals = dxi * (params.omega / 2.0) ** 0.25 * math.sqrt(params.omega / 2.0)
    return vals.reshape(arr.shape) if arr.ndim else float(vals[0])


def hermite_functions(nmax: int, x, params: PhysicalParams = PhysicalParams()) -> np.ndarray:
    """Table ``psi_n(x)`` for ``n = 0..nmax``, shape ``(nmax + 1, len(x))``."""
    nmax = _check_n(nmax)
    xi = params.xi(_check_x(x)).ravel()
    return kernels.hermite_table(nmax, xi) * (params.omega / 2.0) ** 0.25


def bilayer_energy(n: int, branch: int = 1, params: PhysicalParams = PhysicalParams()) -> float:
    """Bilayer Landau level ``+- hbar omega_c sqrt(n (n-1))``."""
    n = _check_n(n)
    return branch * params.hbar * params.omega_c_star * math.sqrt(n * (n - 1)) if n > 1 else 0.0


def monolayer_energy(n: int, branch: int = 1, params: PhysicalParams = PhysicalParams()) -> float:
    """Monolayer Landau level ``+- hbar v_F sqrt(n omega)``."""
    n = _check_n(n)
    return branch * params.hbar * params.v_fermi * math.sqrt(n * params.omega)


def level_energy(n: int, system=System.BILAYER, params: PhysicalParams = PhysicalParams(),
                 branch: int = 1) -> float:
    if System.parse(system) is System.BILAYER:
        return bilayer_energy(n, branch, params)
    return monolayer_energy(n, branch, params)


def spectrum(nmax: int, system=System.BILAYER, params: PhysicalParams = PhysicalParams(),
             branch: int = 1) -> np.ndarray:
    """Levels ``E_0..E_nmax`` of one branch as an array."""
    n = np.arange(nmax + 1, dtype=float)
    if System.parse(system) is System.BILAYER:
        return branch * params.hbar * params.omega_c_star * np.sqrt(n * np.maximum(n - 1, 0))
    return branch * params.hbar * params.v_fermi * np.sqrt(n * params.omega)


def basis_offset(system) -> int:
    """Index gap between the lower and upper oscillator in an eigenspinor."""
    return 2 if System.parse(system) is System.BILAYER else 1


def coefficients_to_spinor(coeffs, system=System.BILAYER, params: PhysicalParams = PhysicalParams(),
                           pad: int = 3, branch: int = 1) -> SpinorWavefunction:
    """Realize ``sum_n a_n Psi_n`` as a spinor with ``pad`` spare slots."""
    system = System.parse(system)
    a = np.asarray(coeffs, dtype=complex).ravel()
    size = a.size + pad
    upper = np.zeros(size, dtype=complex)
    lower = np.zeros(size, dtype=complex)
    d = basis_offset(system)
    # states below the offset are pure lower-component
    lower[:min(d, a.size)] = a[:d]
    if a.size > d:
        tail = a[d:] / math.sqrt(2.0)
        upper[: a.size - d] = tail
        lower[d: a.size] = branch * tail
    return SpinorWavefunction(upper, lower, params.k, params, system)


def spinor_to_coefficients(state: SpinorWavefunction, branch: int = 1) -> np.ndarray:
    """Project onto the eigenbasis ``Psi_n`` of one branch."""
    d = basis_offset(state.system)
    size = state.size
    a = np.zeros(size, dtype=complex)
    a[:d] = state.lower[:d]
    a[d:] = (state.upper[: size - d] + branch * state.lower[d:]) / math.sqrt(2.0)
    return a


def build_eigenstate(label, M: int, params: PhysicalParams = PhysicalParams(),
                     system=System.BILAYER) -> SpinorWavefunction:
    """Eigenspinor ``Psi_n`` on a basis truncated at index ``M``."""
    if not isinstance(label, EigenstateLabel):
        label = EigenstateLabel(int(label))
    if M < label.n:
        raise ValidationError(f"truncation M={M} below eigenstate index n={label.n}")
    a = np.zeros(M + 1)
    a[label.n] = 1.0
    return coefficients_to_spinor(a, system, params, pad=0, branch=label.branch)


def annihilation_weights(f: LadderFunction, nmax: int, system=System.BILAYER) -> np.ndarray:
    """``c[n]`` with ``A^- Psi_n = c[n] Psi_{n-1}``; ``c[0] = 0``."""
    system = System.parse(system)
    fv = f.values(nmax)
    c = np.sqrt(np.arange(nmax + 1)) * fv
    if system is System.BILAYER:
        c[1:3] = fv[1:3]
    elif nmax >= 1:
        c[1] = fv[1] / math.sqrt(2.0)
    return c


def _down_weights(f: LadderFunction, size: int, system: System):
    # entry m: weight carrying e_m -> e_{m-1}; index 0 unused
    m = np.arange(size, dtype=float)
    d = basis_offset(system)
    fv = f.values(size + d)
    lower = np.sqrt(m) * fv[:size]
    upper = np.zeros(size)
    upper[1:] = np.sqrt(m[1:] + d) * fv[1 + d: size + d]
    return upper, lower


def apply_ladder_down(state: SpinorWavefunction, f: LadderFunction) -> SpinorWavefunction:
    """Deformed annihilation operator acting componentwise on a spinor.

    Bilayer: upper ``e_m -> sqrt(m+2) f(m+2) e_{m-1}``, lower
    ``e_m -> sqrt(m) f(m) e_{m-1}``.  Monolayer uses ``m+1`` in the upper
    entry.  On eigenspinors ``A^- Psi_n = c_n Psi_{n-1}`` with the weights of
    :func:`annihilation_weights`.
    """
    wu, wl = _down_weights(f, state.size, state.system)
    up = np.zeros(state.size, dtype=complex)
    lo = np.zeros(state.size, dtype=complex)
    up[:-1] = wu[1:] * state.upper[1:]
    lo[:-1] = wl[1:] * state.lower[1:]
    return state._replace(up, lo)


def apply_ladder_up(state: SpinorWavefunction, f: LadderFunction) -> SpinorWavefunction:
    """Hermitian conjugate of :func:`apply_ladder_down`; output is one slot longer."""
    size = state.size + 1
    wu, wl = _down_weights(f, size, state.system)
    up = np.zeros(size, dtype=complex)
    lo = np.zeros(size, dtype=complex)
    up[1:] = wu[1:] * state.upper
    lo[1:] = wl[1:] * state.lower
    return state._replace(up, lo)


def apply_hamiltonian(state: SpinorWavefunction) -> SpinorWavefunction:
    """Effective Hamiltonian in the oscillator basis; output is padded by two slots.

    Bilayer: ``hbar omega_c (b^-^2 l, b^+^2 u)``.  Monolayer:
    ``hbar v_F sqrt(omega) (b^- l, b^+ u)``.
    """
    p = state.params
    d = basis_offset(state.system)
    size = state.size + 2
    m = np.arange(size, dtype=float)
    up_in = np.pad(state.upper, (0, 2))
    lo_in = np.pad(state.lower, (0, 2))
    # b^-^d e_m = sqrt(m (m-1) ... (m-d+1)) e_{m-d}
    drop = np.ones(size)
    for j in range(d):
        drop *= np.sqrt(np.maximum(m - j, 0.0))
    up = np.zeros(size, dtype=complex)
    lo = np.zeros(size, dtype=complex)
    up[: size - d] = drop[d:] * lo_in[d:]
    lo[d:] = drop[d:] * up_in[: size - d]
    if state.system is System.BILAYER:
        scale = p.hbar * p.omega_c_star
    else:
        scale = p.hbar * p.v_fermi * math.sqrt(p.omega)
    return state._replace(scale * up, scale * lo)


def oscillator_ops(c: np.ndarray):
    """Return ``(a^- c, a^+ c)`` for a coefficient vector; ``a^+`` output is one slot longer."""
    c = np.asarray(c, dtype=complex)
    s = np.sqrt(np.arange(1, c.size + 1, dtype=float))
    down = np.zeros(c.size + 1, dtype=complex)
    down[: c.size - 1] = s[:-1] * c[1:]
    up = np.zeros(c.size + 1, dtype=complex)
    up[1:] = s * c
    return down, up
