"""Separation-sensitive kinetic collision detection for convex polygons."""

__version__ = "0.1.0"
