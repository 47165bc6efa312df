"""Exact computations in the tensor triangulated category of perfect filtered complexes."""

__version__ = "0.1.0"
