"""Puiseux expansions, continuation to the controlling singular points, and
convergence radii of algebraic function branches."""

from .curve import Curve, ParseError, parse_curve
from .singular import INFINITY, SingularPoint, SingularSet, order_from, singular_points
from .puiseux import ExpansionError, ExpansionSet, PuiseuxSeries, expand

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "ParseError",
    "parse_curve",
    "INFINITY",
    "SingularPoint",
    "SingularSet",
    "order_from",
    "singular_points",
    "ExpansionError",
    "ExpansionSet",
    "PuiseuxSeries",
    "expand",
]
