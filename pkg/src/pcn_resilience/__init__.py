"""Topology analysis and attack simulation for payment channel networks."""

__version__ = "0.1.0"
