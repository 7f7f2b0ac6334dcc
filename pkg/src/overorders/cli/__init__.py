"""Command-line interface, polynomial parser and poset export."""

from .main import main, run
from .polyparse import PolySyntaxError, format_poly, parse_poly

__all__ = ["PolySyntaxError", "format_poly", "main", "parse_poly", "run"]
