"""Superzeta: zeta functions over the Riemann zeros at arbitrary precision.

Exact and transcendental special values of the three superzeta families,
Keiper-Li coefficients (classic and central), synthetic-zero counterfactual
experiments, and the exponential-asymptotic Riemann Hypothesis criterion.
"""

from .precision import (
    PrecisionContext,
    RealMP,
    ComplexMP,
    SuperzetaError,
    DomainError,
    PoleError,
    ConvergenceError,
    EscalationError,
    default_context,
)
from .mpcore import (
    bernoulli_number,
    bernoulli_poly,
    euler_number,
    hurwitz_zeta,
    riemann_zeta,
    dirichlet_beta,
    polygamma,
    stieltjes_gamma,
    stieltjes_cumulants,
)

__version__ = "0.1.0"
