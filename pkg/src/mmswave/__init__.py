"""Multiple-scales envelope solutions for Kerr media with rational susceptibility,
validated against a pseudospectral solver of the Sellmeier-transformed equations."""

from .susceptibility import Lorentz, Toy, chi_derivs, chi_hat, n_squared
from .grid import Grid, SpectralField
from .modes import DispersionBranch, find_branch, group_velocity, roots, select_branch, track_branch, verify_pairing
from .mms import MmsCoefficients, MmsSolution, compute_coefficients, propagate, propagate_A, propagate_B, reconstruct_E

__version__ = "0.1.0"
