"""Two-dimensional Levy constant for simultaneous approximation in the cylinder norm."""

from .geometry import DomainError, ParamPoint, Region
from .integrand import BudgetExceededError, inner_integrand, inner_oracle
from .quadrature import PUBLISHED_LEVY, PUBLISHED_MU_S3, ZetaConstants, integrate_outer, levy_constant

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "PUBLISHED_LEVY",
    "PUBLISHED_MU_S3",
    "ParamPoint",
    "Region",
    "ZetaConstants",
    "inner_integrand",
    "inner_oracle",
    "integrate_outer",
    "levy_constant",
]
