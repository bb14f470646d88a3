"""Operator radii, Harnack domination and invariant metrics on noncommutative
balls of matrix tuples, computed on finite truncations of the full Fock space."""

from .caratheodory import dk, dk_interval, dk_tail_bound
from .errors import (
    DimensionError,
    DomainError,
    NcballError,
    NotInBallError,
    NotPositiveError,
    ParseError,
    PreconditionError,
    SingularityError,
)
from .fock import FockTruncation, creation_matrix, enumerate_words, fock_dim, word_matrix
from .freemaps import NcPolyMap, eval_map, rho_f, sup_norm, verify_mapping
from .harnack import delta, delta_rho_curve, dominates, harnack_factor, lambda_rho
from .optuple import (
    OperatorTuple,
    compressed_shift_tuple,
    eval_word,
    joint_spectral_radius,
    kernel_P,
    reconstruction,
    row_norm,
    toeplitz_section,
)
from .radii import in_class, omega, omega_report, rho_min
from .sampling import InsideBall, Spectral, random_tuple
from .singlevar import L_norm_1d, delta_1d, dominates_1d, kernel_K
from .tuplefile import load_map, load_tuple, save_map, save_tuple

__version__ = "0.1.0"

__all__ = [
    "DimensionError",
    "DomainError",
    "FockTruncation",
    "InsideBall",
    "L_norm_1d",
    "NcPolyMap",
    "NcballError",
    "NotInBallError",
    "NotPositiveError",
    "OperatorTuple",
    "ParseError",
    "PreconditionError",
    "SingularityError",
    "Spectral",
    "compressed_shift_tuple",
    "creation_matrix",
    "delta",
    "delta_1d",
    "delta_rho_curve",
    "dk",
    "dk_interval",
    "dk_tail_bound",
    "dominates",
    "dominates_1d",
    "enumerate_words",
    "eval_map",
    "eval_word",
    "fock_dim",
    "harnack_factor",
    "in_class",
    "joint_spectral_radius",
    "kernel_K",
    "kernel_P",
    "lambda_rho",
    "load_map",
    "load_tuple",
    "omega",
    "omega_report",
    "random_tuple",
    "reconstruction",
    "rho_f",
    "rho_min",
    "row_norm",
    "save_map",
    "save_tuple",
    "sup_norm",
    "toeplitz_section",
    "verify_mapping",
    "word_matrix",
]
