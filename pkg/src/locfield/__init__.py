"""Exact arithmetic and invariants for GL(N) over F_q((T))."""

from .errors import (
    BudgetExceeded,
    CapExceeded,
    DivisionByZero,
    FactorizationIncomplete,
    InconsistentMinimality,
    InputError,
    Inseparable,
    InseparableRootSearch,
    InsufficientPrecision,
    LocfieldError,
    NonConvergence,
    NormalizationFailed,
    NotIrreducible,
    NotSublattice,
    RelationViolated,
    UnstableKernel,
)
from .gf import GF, GF_of_order
from .series import FqT, SeriesField, TruncatedSeries, format_series, parse_series

__all__ = [
    "GF", "GF_of_order", "FqT", "SeriesField", "TruncatedSeries",
    "format_series", "parse_series",
    "LocfieldError", "InsufficientPrecision", "DivisionByZero", "Inseparable",
    "InseparableRootSearch", "NotIrreducible", "FactorizationIncomplete",
    "NotSublattice", "UnstableKernel", "CapExceeded", "BudgetExceeded",
    "InconsistentMinimality", "RelationViolated", "NormalizationFailed",
    "NonConvergence", "InputError",
]
