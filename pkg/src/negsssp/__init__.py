"""Negative-weight single-source shortest paths by hop reduction."""
from .baselines import bellman_ford
from .dimacs import parse_dimacs, read_dimacs, write_dimacs
from .estimator import NegativeWeightSSSP
from .exceptions import (EnvelopeTooLarge, GraphError, NegativeCycleError, RetryableFailure,
                         VerificationError)
from .generate import InstanceSpec, generate
from .graph import (PotentialVector, Walk, WeightedDigraph, apply_potentials, build_graph,
                    check_validity, preprocess)
from .hops import hop_distances, johnson, negative_reach
from .proper import probe
from .results import IterationReport, SolveResult, verify
from .solver import SolverConfig, solve

__version__ = "0.1.0"

__all__ = [
    "EnvelopeTooLarge", "GraphError", "InstanceSpec", "IterationReport", "NegativeCycleError",
    "NegativeWeightSSSP", "PotentialVector", "RetryableFailure", "SolveResult", "SolverConfig",
    "VerificationError", "Walk", "WeightedDigraph", "apply_potentials", "bellman_ford",
    "build_graph", "check_validity", "generate", "hop_distances", "johnson", "negative_reach",
    "parse_dimacs", "preprocess", "probe", "read_dimacs", "solve", "verify", "write_dimacs",
]
