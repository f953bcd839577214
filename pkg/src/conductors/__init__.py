"""Conductor statistics of the height-ordered family of elliptic curves
y^2 = x^3 + ax + b with congruence and minimality constraints on (a, b):
exact enumeration, local reduction data, the analytic limiting
distribution, and the machinery to compare the two.
"""

from .family import CurveParams, FamilySpec, discriminant, enumerate_family, iter_family
from .intkernel import FactoredInteger, factor, moebius, valuation, zeta_real
from .reduction import CurveInvariants, LocalInvariants, ReductionType, conductor, tate_oracle
from .theory import DistributionGrid, f_delta, main_term, mass, theory_grid

__all__ = [
    "CurveInvariants",
    "CurveParams",
    "DistributionGrid",
    "FactoredInteger",
    "FamilySpec",
    "LocalInvariants",
    "ReductionType",
    "conductor",
    "discriminant",
    "enumerate_family",
    "f_delta",
    "factor",
    "iter_family",
    "main_term",
    "mass",
    "moebius",
    "tate_oracle",
    "theory_grid",
    "valuation",
    "zeta_real",
]

__version__ = "0.1.0"
