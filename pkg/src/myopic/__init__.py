"""Double-sided myopic algorithms for unconstrained submodular maximization."""
from .core import Digraph, GroundSet, SetFunction, brute_force_max, cut_function
from .estimators import DoubleGreedyMaximizer, DoublingDicut, InapproximabilityLP
from .exceptions import (
    DomainError,
    InvalidCertificate,
    MyopicError,
    QueryModelViolation,
)

__version__ = "0.1.0"

__all__ = [
    "Digraph",
    "DomainError",
    "DoubleGreedyMaximizer",
    "DoublingDicut",
    "GroundSet",
    "InapproximabilityLP",
    "InvalidCertificate",
    "MyopicError",
    "QueryModelViolation",
    "SetFunction",
    "brute_force_max",
    "cut_function",
]
