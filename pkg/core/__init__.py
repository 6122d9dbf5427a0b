"""
Numerical engines for projective spectra of matrix tuples.
"""

from .exceptions import ProjSpecError
from .periods import PeriodIntegrator, linking_loop

__all__ = [
    'ProjSpecError',
    'PeriodIntegrator',
    'linking_loop',
]
