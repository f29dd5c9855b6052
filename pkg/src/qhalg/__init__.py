"""Exact computations with quasi-hereditary algebras, Auslander algebras and gluings."""

from .algebra import Algebra
from .exactlin import GF, QQ
from .quiver import load_algebra, parse_spec

__all__ = ["Algebra", "GF", "QQ", "load_algebra", "parse_spec"]
