"""Exact calculus of degree-4 tautological classes on moduli of curves.

Stable-graph combinatorics, intersection products with excess terms,
boundary and forgetful pullbacks, the known degree-4 relation catalog,
essential bases, and the exact rank checks behind the freeness and
generation statements.  Everything is exact rational arithmetic.
"""

from .graphs import (StableGraph, aut_order, canonical_graph,
                     enumerate_stable_graphs, family_name, isomorphic,
                     j_glue, f_contract)
from .expressions import (Space, TautExpression, TautMonomial,
                          TensorExpression, make_class, monomial_name,
                          normalize)
from .calculus import (BoundaryMap, boundary_maps, boundary_pullback,
                       forgetful_pullback, product_deg2, pull, push,
                       attach_tail_pullback, solve_gluings)
from .basis import EssentialBasis, essential_basis, is_essential
from .relations import (Catalog, Relation, RelationCandidate, catalog,
                        native_relations, propagate, rederive_m32,
                        reduce_expression)
from .linalg import RationalMatrix, Echelon
from .reports import due_report, inj0h2_report, piudisette_report
from .acceptance import run_suite

__all__ = [
    "StableGraph", "aut_order", "canonical_graph", "enumerate_stable_graphs",
    "family_name", "isomorphic", "j_glue", "f_contract",
    "Space", "TautExpression", "TautMonomial", "TensorExpression",
    "make_class", "monomial_name", "normalize",
    "BoundaryMap", "boundary_maps", "boundary_pullback",
    "forgetful_pullback", "product_deg2", "pull", "push",
    "attach_tail_pullback", "solve_gluings",
    "EssentialBasis", "essential_basis", "is_essential",
    "Catalog", "Relation", "RelationCandidate", "catalog",
    "native_relations", "propagate", "rederive_m32", "reduce_expression",
    "RationalMatrix", "Echelon",
    "due_report", "inj0h2_report", "piudisette_report",
    "run_suite",
]

__version__ = "1.0.0"
