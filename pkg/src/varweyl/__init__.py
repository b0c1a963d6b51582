"""Variable-exponent Luxemburg norms and generalized Weyl almost periodicity.

Subpackages
-----------
funcspace    function, exponent, phi, weight, kernel and sequence specs
varlebesgue  modular, Luxemburg, windowed, Stepanov and BS norms
weylnorms    the six seminorm families and weight transforms
apclass      almost-period search and membership verdicts
ergodic      vanishing functionals and asymptotic decomposition
convolution  convolution products and admissibility checks
fractional   Caputo / Weyl-Liouville derivatives and mild solutions
cli          command line front end
"""
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
