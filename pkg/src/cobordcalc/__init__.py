"""Exact computations with 3-dimensional cobordisms, their gluing anomalies,
finite-dimensional Hopf algebras, Hennings invariants and half-projective TQFTs.
"""

from .exactlin import Cyclotomic, Matrix
from .graphcat import GraphMorphism, canonicalize, compose_graphs
from .cobord import CobordismDatum, betti_int, compose_cobordisms, rho_bounds
from .hopfalg import HopfAlgebra, analyze, builtin
from .diagrams import FramedDiagram, hennings_data, hennings_evaluate, parse_diagram
from .tqft import build_evaluator, evaluate, instance, parse_expression

__version__ = "0.1.0"

__all__ = [
    "Cyclotomic", "Matrix", "GraphMorphism", "canonicalize", "compose_graphs",
    "CobordismDatum", "betti_int", "compose_cobordisms", "rho_bounds",
    "HopfAlgebra", "analyze", "builtin", "FramedDiagram", "hennings_data",
    "hennings_evaluate", "parse_diagram", "build_evaluator", "evaluate", "instance",
    "parse_expression",
]
