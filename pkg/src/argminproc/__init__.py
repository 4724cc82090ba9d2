"""Argmin chains of random walks and argmin semigroups of stable processes.

The package computes exact transition kernels and stationary laws for the
location of the running minimum over a sliding window, for lattice and
continuous random walks, and the analogous transition semigroup for stable
Levy processes.  Simulation and quadrature utilities cross-check the exact
formulas.
"""

from .chain import (
    ArgminChainKernel,
    brute_force_ssrw,
    build_kernel,
    kernel_from_sign_probabilities,
    ssrw_kernel,
    symmetric_continuous_kernel,
    theta_kernel,
)
from .ladder import (
    LadderSequences,
    SignProbabilities,
    closed_form_ssrw,
    closed_form_theta,
    descending_from_signs,
    persistence_from_signs,
)
from .stable import StableLaw, arcsine_cdf, arcsine_density, positivity, semigroup
from .window import BACKEND, sliding_last_argmin

__version__ = "0.1.0"

__all__ = [
    "ArgminChainKernel",
    "BACKEND",
    "LadderSequences",
    "SignProbabilities",
    "StableLaw",
    "arcsine_cdf",
    "arcsine_density",
    "brute_force_ssrw",
    "build_kernel",
    "closed_form_ssrw",
    "closed_form_theta",
    "descending_from_signs",
    "kernel_from_sign_probabilities",
    "persistence_from_signs",
    "positivity",
    "semigroup",
    "sliding_last_argmin",
    "ssrw_kernel",
    "symmetric_continuous_kernel",
    "theta_kernel",
    "__version__",
]
