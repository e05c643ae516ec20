"""Approximation toolkit for relaxed {0,1,2,3}-edge-connectivity on planar graphs."""

__version__ = "0.1.0"
