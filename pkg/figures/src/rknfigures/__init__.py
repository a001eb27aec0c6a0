"""Plots for rknsplit benchmark CSVs: efficiency diagrams and parameter scans."""

from .errors import EmptyData, FiguresError, MissingColumn
from .render import FigureSpec, build_figure, load_records, render

__version__ = "0.1.0"
