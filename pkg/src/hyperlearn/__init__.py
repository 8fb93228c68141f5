"""Learn hidden Erdős–Rényi k-uniform hypergraphs from one batch of hyperedge-detection queries."""

from .errors import ConfigurationError, ContractError, RegimeError, RegimeWarning
from .model import Hypergraph, ModelParams, expected_edges, sample_hypergraph

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ContractError",
    "Hypergraph",
    "ModelParams",
    "RegimeError",
    "RegimeWarning",
    "expected_edges",
    "sample_hypergraph",
]
