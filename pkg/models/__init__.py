"""
Data models for matrix tuples, polynomials, forms, loops and results.
"""

from .pencil import MatrixTuple, ProjectivePoint
from .polynomial import HomogeneousPolynomial, UnivariatePolynomial
from .forms import LinearFunctional, OneFormAtPoint, ScalarOneFormAtPoint
from .geometry import Hyperplane, HyperplaneArrangement, Loop, SliceGrid

__all__ = [
    'MatrixTuple',
    'ProjectivePoint',
    'HomogeneousPolynomial',
    'UnivariatePolynomial',
    'LinearFunctional',
    'OneFormAtPoint',
    'ScalarOneFormAtPoint',
    'Hyperplane',
    'HyperplaneArrangement',
    'Loop',
    'SliceGrid',
]
