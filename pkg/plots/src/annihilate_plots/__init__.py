"""Figure rendering for annihilating-random-walk sweep CSVs."""

from .figures import FigureError, FigureSpec, load_specs, render_figures

__version__ = "0.1.0"
