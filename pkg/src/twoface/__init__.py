"""Shortest disjoint paths with terminals on two faces of a planar graph."""

__version__ = "0.1.0"
