"""Exact computations for rational Cherednik algebras of reflection groups over finite fields."""

from .dunkl import CherednikParams, DunklContext, dunkl_apply, make_context
from .form import gram_block, rank_kernel
from .gf import Field, FieldElement, field_create, field_of_order
from .groups import GroupSpec, group_data
from .poly import ParamScalar, Polynomial
from .series import HilbertSeries, hilbert_L, reduced_series

__all__ = [
    "CherednikParams",
    "DunklContext",
    "Field",
    "FieldElement",
    "GroupSpec",
    "HilbertSeries",
    "ParamScalar",
    "Polynomial",
    "dunkl_apply",
    "field_create",
    "field_of_order",
    "gram_block",
    "group_data",
    "hilbert_L",
    "make_context",
    "rank_kernel",
    "reduced_series",
]
