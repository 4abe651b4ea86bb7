"""Numerical laboratory for F-Yang-Mills connections.

Variational calculus of the F-Yang-Mills functional, the pointwise
Weitzenbock algebra, Gauss-equation invariants of immersions, Simons-type
instability criteria and a discrete gauge sector on surface meshes.
"""

from fymlab.f_family import FFunction, DomainError, make_builtin, degree_analytic, degree_numeric
from fymlab.lie_algebra import LieAlgebraSpec, get_algebra

__all__ = [
    "FFunction",
    "DomainError",
    "make_builtin",
    "degree_analytic",
    "degree_numeric",
    "LieAlgebraSpec",
    "get_algebra",
]

__version__ = "0.1.0"
