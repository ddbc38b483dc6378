"""Computations for finitely presented connected graded algebras."""

from .field import Field, FieldError, QQ
from .poly import NcPolynomial
from .presentation import (
    AlgebraPresentation,
    PresentationError,
    build_presentation,
    parse_presentation,
    render_presentation,
)

__all__ = [
    "AlgebraPresentation",
    "Field",
    "FieldError",
    "NcPolynomial",
    "PresentationError",
    "QQ",
    "build_presentation",
    "parse_presentation",
    "render_presentation",
]

__version__ = "0.1.0"
