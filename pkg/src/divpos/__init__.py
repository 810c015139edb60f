"""Exact positivity tests for divisors on projective bundles over curves and
on Lorentzian Néron-Severi lattices."""

from .bundles import Curve, HNProfile, SplitBundle, hn_profile
from .chow import DivClass, intersection_number
from .numbers import FieldElem, parse_field
from .positivity import classify

__version__ = "0.1.0"
