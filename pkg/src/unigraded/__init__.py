"""Exact computations in unitarily graded algebras Q<U> generated by radicals,
plus the finite-field grading checks."""

from .radicals import RadicalUnit, UnitGroup
from .algebra import GradedAlgebra, build

__all__ = ["RadicalUnit", "UnitGroup", "GradedAlgebra", "build"]
__version__ = "0.1.0"
