"""Polaronic spectrum and derived observables of silicon-vacancy centers in 4H-SiC."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, NumericalError
from .fitting import FitResult, fit_exponential_convergence, fit_linear_slope, fit_linewidth
from .hamiltonian import (
    HamiltonianMatrix,
    apes,
    assemble,
    assemble_with_spin_orbit,
    trigonal_apes_minimum,
)
from .observables import (
    StrainTensorDiag,
    TemperatureCurve,
    linewidth_model,
    state_zfs,
    zfs_vs_temperature,
    zpl_strain_shift,
)
from .params import K_B, PRESETS, V1, V2, CenterParams, crystal_field_matrix, get_preset, vibronic_coupling
from .phonons import PhononBasis, enumerate_basis, number_operator, q_operator
from .spectrum import (
    PolaronicState,
    Spectrum,
    diagonalize,
    polaronic_gap,
    polaronic_spectrum,
    project_characters,
    so_doublet_structure,
    spin_orbit_structure,
)
