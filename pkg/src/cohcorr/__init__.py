"""Coherence, partial coherence and geometric discord for finite-dimensional states."""

from .errors import NotPSDError, OptimizationError, ValidationError
from .measurements import computational_basis, lueders_extend, qubit_basis
from .measures import (
    coherence_l1,
    coherence_qfi,
    coherence_rel_entropy,
    coherence_skew,
    partial_coherence_qfi,
    partial_coherence_skew,
    quantum_fisher_information,
    skew_information,
)
from .optim import OptimizerConfig, geometric_discord, lqu_qubit_oracle, strong_coherence_estimate
from .states import bipartite, density_from_matrix, pure_from_vector

__version__ = "0.1.0"
