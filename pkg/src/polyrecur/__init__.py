"""Exact and finite-scale computations for ergodic averages along rationally
independent integer polynomials: binomial-basis polynomial algebra, exact
character sums on ``Z_m x T^d``, multicorrelation sequences and their
nilsequence form, factor projections, and configuration counting in integer
sets.
"""
from .polyalg import (
    IntPolynomial,
    NotIntegerValued,
    PolyFamily,
    compose_affine,
    dependence_witness,
    evaluate,
    from_rational_coeffs,
    is_rationally_independent,
    parse_family,
    parse_polynomial,
    vanishes_at_zero,
)
from .groups import AbGroup, CharSum, ExactComplex, GroupPoint, Phase, integrate, multiply, translate
from .dynsys import RotationSystem, UnipotentSystem, project, spectral_measure
from .averages import multicorrelation, ergodic_average_fn, khintchine_scan
from .nilseq import build_realization, nilsequence_term, verify_identity
from .combinat import WindowSet, configuration_count, cylinder_density, good_n_scan

__version__ = "0.1.0"

__all__ = [
    "IntPolynomial",
    "NotIntegerValued",
    "PolyFamily",
    "compose_affine",
    "dependence_witness",
    "evaluate",
    "from_rational_coeffs",
    "is_rationally_independent",
    "parse_family",
    "parse_polynomial",
    "vanishes_at_zero",
    "AbGroup",
    "CharSum",
    "ExactComplex",
    "GroupPoint",
    "Phase",
    "integrate",
    "multiply",
    "translate",
    "RotationSystem",
    "UnipotentSystem",
    "project",
    "spectral_measure",
    "multicorrelation",
    "ergodic_average_fn",
    "khintchine_scan",
    "build_realization",
    "nilsequence_term",
    "verify_identity",
    "WindowSet",
    "configuration_count",
    "cylinder_density",
    "good_n_scan",
]
