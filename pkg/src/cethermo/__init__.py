"""Copula-entropy estimation and correlation-entropy decomposition.

Rank-based copula entropy (negative multivariate mutual information)
estimated with k-nearest-neighbor statistics, analytic and quadrature
oracles to validate it, a seeded canonical Monte Carlo sampler for small
periodic particle systems, and the machinery to decompose their entropy
into one-particle and correlation parts.
"""

from .budget import (
    EntropyBudget,
    RdfEstimate,
    WorkQuery,
    assemble_budget,
    compute_rdf,
    configurational_ce,
    extractable_work,
    momentum_entropy,
    n_excluded_bins,
    pair_entropy,
)
from .entropy import (
    DecompositionReport,
    EntropyEstimate,
    PseudoObservations,
    SampleMatrix,
    copula_entropy,
    entropy_decomposition_check,
    knn_entropy,
    mutual_information,
    rank_transform,
)
from .errors import (
    CethermoError,
    ConsistencyError,
    DataValidationError,
    DegenerateSampleError,
    MatrixError,
    ParameterError,
    StatisticsError,
)
from .oracles import (
    CorrelationMatrix,
    DensityGrid,
    equicorrelated,
    gaussian_ce,
    gaussian_entropy,
    grid_boltzmann,
    grid_correlation_entropy,
    grid_marginalize,
    sample_gaussian,
)
from .simulate import (
    BoxSpec,
    PotentialSpec,
    SimParams,
    Trajectory,
    UnitsSpec,
    minimum_image,
    pair_energy,
    read_trajectory,
    run_canonical,
    sample_momenta,
    total_potential,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "BoxSpec",
    "CethermoError",
    "ConsistencyError",
    "CorrelationMatrix",
    "DataValidationError",
    "DecompositionReport",
    "DegenerateSampleError",
    "DensityGrid",
    "EntropyBudget",
    "EntropyEstimate",
    "MatrixError",
    "ParameterError",
    "PotentialSpec",
    "PseudoObservations",
    "RdfEstimate",
    "SampleMatrix",
    "SimParams",
    "StatisticsError",
    "Trajectory",
    "UnitsSpec",
    "WorkQuery",
    "assemble_budget",
    "compute_rdf",
    "configurational_ce",
    "copula_entropy",
    "entropy_decomposition_check",
    "equicorrelated",
    "extractable_work",
    "gaussian_ce",
    "gaussian_entropy",
    "grid_boltzmann",
    "grid_correlation_entropy",
    "grid_marginalize",
    "knn_entropy",
    "minimum_image",
    "momentum_entropy",
    "mutual_information",
    "n_excluded_bins",
    "pair_energy",
    "pair_entropy",
    "rank_transform",
    "read_trajectory",
    "run_canonical",
    "sample_gaussian",
    "sample_momenta",
    "total_potential",
    "write_trajectory",
]
