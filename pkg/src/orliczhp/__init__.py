"""Numerical testers for Orlicz-space Carleson embeddings on the upper
half-plane: growth-function calculus, box and kernel testing conditions,
maximal operators, Luxembourg norms, and pointwise-multiplier classifiers.
"""

__version__ = "0.1.0"
