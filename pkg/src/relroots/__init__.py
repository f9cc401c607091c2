"""Exact all-terminal reliability polynomials and their roots."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    GraphFormatError,
    IntegrityError,
    RelRootsError,
)
from .graphio import parse_graph  # noqa: E402
from .multigraph import GraphClass, Multigraph, canonical_key, make_family, parse_family  # noqa: E402
from .poly import Poly  # noqa: E402
from .relpoly import f_vector_bruteforce, h_vector, reliability_poly  # noqa: E402
from .rootlab import rational_roots, reliability_roots  # noqa: E402

__all__ = [
    "ConvergenceError", "DomainError", "GraphFormatError", "IntegrityError", "RelRootsError",
    "GraphClass", "Multigraph", "Poly",
    "canonical_key", "f_vector_bruteforce", "h_vector", "make_family", "parse_family",
    "parse_graph", "rational_roots", "reliability_poly", "reliability_roots",
]
