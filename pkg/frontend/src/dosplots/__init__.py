"""Plotting companion for the scheduler simulator's CSV output."""

from .figures import KINDS, Curve, FigureSpec, load_curves, load_table, render

__all__ = ["KINDS", "Curve", "FigureSpec", "load_curves", "load_table", "render"]

__version__ = "0.1.0"
