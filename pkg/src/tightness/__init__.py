"""Deciding tightness of simplicial complexes."""
from __future__ import annotations

__version__ = "0.1.0"

from .complex import ComplexError, Graph, SimplicialComplex, build
from .generators import gen
from .homology import F2, F3, FieldSpec, Q
from .report import Reason, TightnessReport, Verdict

__all__ = [
    "ComplexError", "Graph", "SimplicialComplex", "build", "gen",
    "FieldSpec", "Q", "F2", "F3", "Reason", "TightnessReport", "Verdict",
]
