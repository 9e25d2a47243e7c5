"""Finite, exact checks over Z_p of the combinatorial steps in a transfer
argument for free p-adic actions: homology of nerves, cyclic actions and
their orbit quotients, and towers of nerves with their inverse limits."""

from __future__ import annotations

from .covers import Cover, FiniteMetricSpace, nerve
from .errors import NerveCheckError, ParseError
from .field import FpMatrix, PrimeContext
from .homology import HomologyGroup, homology, induced_homology_map
from .simplicial import Chain, SimplicialComplex, SimplicialMap, boundary, build_complex

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "Cover",
    "FiniteMetricSpace",
    "FpMatrix",
    "HomologyGroup",
    "NerveCheckError",
    "ParseError",
    "PrimeContext",
    "SimplicialComplex",
    "SimplicialMap",
    "boundary",
    "build_complex",
    "homology",
    "induced_homology_map",
    "nerve",
]
