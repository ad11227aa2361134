"""Projective wallpaper-group symmetries: factor systems, group homology, Clifford bands."""

__version__ = "0.1.0"
