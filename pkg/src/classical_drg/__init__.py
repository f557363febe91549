"""Distance-regular graphs with classical parameters (D, b, alpha, beta):
exact parameter arithmetic, feasibility bounds, a case classifier, explicit
family constructions and clique-geometry verification."""

from .params import ClassicalParams, IntersectionArray, intersection_array
from .bounds import classify

__all__ = ["ClassicalParams", "IntersectionArray", "intersection_array", "classify"]
__version__ = "0.1.0"
