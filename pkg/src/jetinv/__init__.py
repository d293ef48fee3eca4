"""Exact-arithmetic engine for reparametrization-invariant jet computations:
truncated jet composition, group matrices, symmetric-power embeddings,
Plücker-minor invariants, and one-parameter-subgroup orbit limits.
"""

from .exact import Matrix, PolyRing, Rational, ResourceLimitError, SparsePolynomial, rat_str
from .jets import JetMap, compose, group_matrix, identity_jet, invert
from .embedding import PhiMatrix, WedgeVector, p_point, phi, wedge_columns
from .invariants import (
    InvariantPoly,
    generator_set,
    solution_space_equals_perp,
    test_curve_system,
    verify_invariance,
)
from .orbits import (
    EpsWeight,
    OneParamSubgroup,
    codim_report,
    hilbert_mumford_torus,
    infinitesimal_stabilizer,
    lambda_sigma,
    limit_point,
    limit_stabilizer_matrix,
    mu_sigma,
    z_closed_form,
)

__all__ = [
    "Matrix",
    "PolyRing",
    "Rational",
    "ResourceLimitError",
    "SparsePolynomial",
    "rat_str",
    "JetMap",
    "compose",
    "group_matrix",
    "identity_jet",
    "invert",
    "PhiMatrix",
    "WedgeVector",
    "p_point",
    "phi",
    "wedge_columns",
    "InvariantPoly",
    "generator_set",
    "solution_space_equals_perp",
    "test_curve_system",
    "verify_invariance",
    "EpsWeight",
    "OneParamSubgroup",
    "codim_report",
    "hilbert_mumford_torus",
    "infinitesimal_stabilizer",
    "lambda_sigma",
    "limit_point",
    "limit_stabilizer_matrix",
    "mu_sigma",
    "z_closed_form",
]
