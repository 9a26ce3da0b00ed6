"""Entropic Ricci curvature bounds and gradient-estimate checks for finite Markov chains."""

from .chain import GraphSpec, MarkovChain, build_srw, diameter, from_kernel, generate, max_degree
from .curvature import (
    CurvatureReport,
    bakry_emery_curvature,
    entropic_curvature_lower_bound,
    kappa_of_rho,
)
from .estimates import (
    VerificationSample,
    check_corollary,
    check_diameter,
    check_global,
    check_local,
    corollary_constant,
    diameter_bound,
)
from .means import MeanKind, theta, theta_partials

__version__ = "0.1.0"
