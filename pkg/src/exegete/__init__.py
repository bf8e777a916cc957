"""Exact checking of program triples under every catalogued reading.

The package decides validity of {b} p {c} style triples over finite
relational semantics, relates the readings through predicate
transformers, and cross-checks each against its equational encoding
in Kleene algebra with tests extended by a top element.
"""

from .errors import (
    ExegeteError,
    ParseError,
    SemanticError,
    SpaceMismatch,
    StateCapExceeded,
)
from .kernels import BACKEND
from .relalg import Predicate, Relation, StateSpace

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ExegeteError",
    "ParseError",
    "Predicate",
    "Relation",
    "SemanticError",
    "SpaceMismatch",
    "StateCapExceeded",
    "StateSpace",
    "__version__",
]
