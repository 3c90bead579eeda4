"""Controllability analysis and simulation for nonlinearly controlled finite quantum systems."""
__version__ = "0.1.0"
