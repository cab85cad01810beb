"""Multiuser MIMO-MAC lattice codes over number-field towers: exact
construction, algebraic guarantees and decay measurement."""

from .catalog import build_tower, catalog_rows, find_inert_primes
from .construction import (
    CodeMatrix, CodeSpec, CoefficientBox, assemble_codeword, build_A,
    build_M, build_user_block, choose_k, codeword_from_coeffs, gamma_basis,
    lattice_basis,
)
from .decay import (
    ALL_USERS, EXHAUSTIVE, FIRST_USER, SAMPLED, BudgetExceeded, DecayReport,
    RankReport, decay_curve, det_exact, fit_decay_exponent, min_abs_det,
    rank_criterion_check, two_user_box_scan, two_user_singularity_test,
    valuation_split_check, zero_det_witness_2user,
)
from .number_field import FieldElem, RealAlgebraic, Tower
from .quadratic import QuadElem, RingTag

__version__ = "0.1.0"

__all__ = [
    "ALL_USERS",
    "BudgetExceeded",
    "CodeMatrix",
    "CodeSpec",
    "CoefficientBox",
    "DecayReport",
    "EXHAUSTIVE",
    "FIRST_USER",
    "FieldElem",
    "QuadElem",
    "RankReport",
    "RealAlgebraic",
    "RingTag",
    "SAMPLED",
    "Tower",
    "assemble_codeword",
    "build_A",
    "build_M",
    "build_tower",
    "build_user_block",
    "catalog_rows",
    "choose_k",
    "codeword_from_coeffs",
    "decay_curve",
    "det_exact",
    "find_inert_primes",
    "fit_decay_exponent",
    "gamma_basis",
    "lattice_basis",
    "min_abs_det",
    "rank_criterion_check",
    "two_user_box_scan",
    "two_user_singularity_test",
    "valuation_split_check",
    "zero_det_witness_2user",
]
