"""
Command-line interface for projective spectrum computations.
"""

from .main import build_parser, main

__all__ = ['build_parser', 'main']
