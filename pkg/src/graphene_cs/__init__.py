"""Coherent states of bilayer and monolayer graphene in a uniform magnetic field.

Landau-level spectra and eigenspinors, deformed ladder operators, coherent
states of the three families, their moments, densities, currents, time
evolution and quasi-periods.
"""
__version__ = "0.1.0"

from .coherent import (CoherentExpansion, Family, annihilation_residual, build_coherent,
                       closed_form_coefficients, hypergeometric_0F2)
from .dynamics import (EvolvedExpansion, PeriodEstimate, density_movie, evolve, period_report,
                       quasi_period, revival_distance)
from .errors import (GrapheneCSError, GridTooNarrowError, LevelCoincidenceError, NumericalError,
                     TruncationError, ValidationError)
from .kernels import BACKEND
from .ladder import LadderFunction, generalized_factorial
from .numerics import GridSpec, SeriesTruncation, finite_difference, gauss_hermite, quadrature
from .observables import (FieldProfile, ObservableReport, continuity_residual, default_grid,
                          expectation_energy, field_profile, integrate_profile, mean_energy,
                          moments_closed_form, moments_spectral)
from .physics import (EigenstateLabel, PhysicalParams, SpinorWavefunction, System,
                      apply_hamiltonian, apply_ladder_down, apply_ladder_up, bilayer_energy,
                      build_eigenstate, hermite_functions, hermite_psi, hermite_psi_derivative,
                      level_energy, monolayer_energy, spectrum)

__all__ = [
    "BACKEND", "CoherentExpansion", "EigenstateLabel", "EvolvedExpansion", "Family", "FieldProfile",
    "GrapheneCSError", "GridSpec", "GridTooNarrowError", "LadderFunction", "LevelCoincidenceError",
    "NumericalError", "ObservableReport", "PeriodEstimate", "PhysicalParams", "SeriesTruncation",
    "SpinorWavefunction", "System", "TruncationError", "ValidationError", "annihilation_residual",
    "apply_hamiltonian", "apply_ladder_down", "apply_ladder_up", "bilayer_energy", "build_coherent",
    "build_eigenstate", "closed_form_coefficients", "continuity_residual", "default_grid",
    "density_movie", "evolve", "expectation_energy", "field_profile", "finite_difference",
    "gauss_hermite", "generalized_factorial", "hermite_functions", "hermite_psi",
    "hermite_psi_derivative", "hypergeometric_0F2", "integrate_profile", "level_energy",
    "mean_energy", "monolayer_energy", "moments_closed_form", "moments_spectral", "period_report",
    "quadrature", "quasi_period", "revival_distance", "spectrum",
]
