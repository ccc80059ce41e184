"""Exponentiated Hencky energies, their stresses, inversion and convexity checks."""

from .energies import (
    EnergySpec,
    MaterialParams,
    as_principal_function,
    energy_eH,
    energy_eH_sharp,
    energy_H,
    energy_of,
    energy_vol_exp,
)
from .errors import HenckyError, InvalidInputError
from .inversion import invert_cauchy_eH, nonlinear_poisson, uniaxial_tension
from .stress import cauchy_eH, kirchhoff_eH, simple_shear_sigma12
from .tensor import PrincipalState, SymTensor, matrix_exp_sym, matrix_log_spd

__version__ = "0.1.0"
