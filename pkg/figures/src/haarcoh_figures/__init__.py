"""Render the coherence-statistics figure set from haarcoh CSV output."""

__version__ = "0.1.0"

from .render import FIGURE_IDS, FigureInputError, FigureSpec, build_specs, render

__all__ = ["FIGURE_IDS", "FigureInputError", "FigureSpec", "build_specs", "render", "__version__"]
