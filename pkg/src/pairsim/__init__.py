"""Vacuum pair production in focused, chirped oscillating electric fields.

Phase-space transport solver for the one-dimensional Wigner-function
components, plus a homogeneous-field benchmark, a local-density composite,
and run orchestration with delimited-text outputs.
"""

__version__ = "0.1.0"

from .errors import ContractViolation, IntegrationDivergedError, ValidationError
from .fields import (ChirpedGaussianPulse, HomogeneousSlice, effective_frequency,
                     field_value, homogeneous_slice, make_pulse,
                     spatial_envelope, temporal_profile)
from .grids import (PhaseSpaceGrid, apply_force_operator, force_multiplier_table,
                    make_grid)
from .homogeneous import VectorPotentialTable, evolve_mode, evolve_modes
from .observables import (SpectrumResult, compare_spectra, lda_spectrum,
                          momentum_spectrum, pair_formation_length,
                          particle_density, position_distribution,
                          total_charge, total_yield)
from .reference import SauterPulse, sauter_pair_spectrum
from .solver import (WignerState, integrate, read_snapshot, vacuum_state,
                     write_snapshot)

__all__ = [
    "ChirpedGaussianPulse", "ContractViolation", "HomogeneousSlice",
    "IntegrationDivergedError", "PhaseSpaceGrid", "SauterPulse",
    "SpectrumResult", "ValidationError", "VectorPotentialTable", "WignerState",
    "apply_force_operator", "compare_spectra", "effective_frequency",
    "evolve_mode", "evolve_modes", "field_value", "force_multiplier_table",
    "homogeneous_slice", "integrate", "lda_spectrum", "make_grid",
    "make_pulse", "momentum_spectrum", "pair_formation_length",
    "particle_density", "position_distribution", "read_snapshot",
    "sauter_pair_spectrum", "spatial_envelope", "temporal_profile",
    "total_charge", "total_yield", "vacuum_state", "write_snapshot",
]
