"""Pareto front tracing with a Hopf-Lax primal-dual solver."""

from ._hlpareto import (
    CertificationFailure,
    EmptyReference,
    Error,
    InvalidArgument,
    NotDifferentiable,
    NumericalFailure,
    Preference,
    Problem,
    UnsupportedOperation,
    convex_envelope,
    dominates,
    front_distance,
    nonconvexity_witness,
    pareto_indices,
    problem,
    problem_ids,
    reference_front,
    solve,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CertificationFailure",
    "EmptyReference",
    "Error",
    "InvalidArgument",
    "NotDifferentiable",
    "NumericalFailure",
    "Preference",
    "Problem",
    "UnsupportedOperation",
    "convex_envelope",
    "dominates",
    "front_distance",
    "nonconvexity_witness",
    "pareto_indices",
    "problem",
    "problem_ids",
    "reference_front",
    "solve",
    "sweep",
]
