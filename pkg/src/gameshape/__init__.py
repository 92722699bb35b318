"""Spatial evolutionary games on lattices and the persistent homology of
their space-time strategy clouds."""

__version__ = "0.1.0"
