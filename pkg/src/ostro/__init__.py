"""Forced Ostrovsky equation laboratory.

    (u_t + u u_x + alpha u_xxx)_x = beta u + h_x
"""

from .core import (
    ClosedFormField,
    GalileanTopography,
    Grid1D,
    PhysParams,
    QuadraticTopography,
    SampledField,
    TimeFunction,
    X1Generator,
    X2Generator,
    apply_symmetry,
    chi,
    topo_eval,
)
from .errors import OstroError, PreconditionError
from .exact import FAMILIES, ExactSolution, build

__version__ = "0.1.0"

__all__ = [
    "ClosedFormField", "ExactSolution", "FAMILIES", "GalileanTopography", "Grid1D",
    "OstroError", "PhysParams", "PreconditionError", "QuadraticTopography", "SampledField",
    "TimeFunction", "X1Generator", "X2Generator", "apply_symmetry", "build", "chi", "topo_eval",
]
