"""Quaternion orthogonal polynomials and the 3D Ginibre-type determinantal point field."""

__version__ = "0.1.0"
