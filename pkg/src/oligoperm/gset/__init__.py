"""Combinatorial backends: atoms, equivariant maps, products, fiber products."""

from .base import (
    Atom,
    AtomMap,
    Backend,
    ElementaryStep,
    Factorization,
    GMap,
    GObject,
    LinearRelation,
    ProductOrbit,
    fiber_product,
    kernel_pair,
)
from .finite import FiniteBackend, parse_cycles, preset_backend
from .line import LineBackend
from .symmetric import SymBackend

SYM = SymBackend()
LINE = LineBackend()

__all__ = [
    "Atom",
    "AtomMap",
    "Backend",
    "ElementaryStep",
    "Factorization",
    "FiniteBackend",
    "GMap",
    "GObject",
    "LINE",
    "LinearRelation",
    "ProductOrbit",
    "SYM",
    "SymBackend",
    "LineBackend",
    "fiber_product",
    "kernel_pair",
    "parse_cycles",
    "preset_backend",
]
