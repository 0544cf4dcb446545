"""Euroleague game-outcome prediction pipeline."""
__version__ = "0.1.0"
