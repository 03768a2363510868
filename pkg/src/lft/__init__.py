"""Exact local Fourier transforms of formal connections.

The library computes the three local transforms of pushforward pieces by
branch-selected series reversion, and re-derives every answer through an
independent companion-matrix/Hensel-lifting path for verification.
"""

from .connections import (
    Connection,
    ConnectionPiece,
    ExponentialFactor,
    RegularPart,
    canonicalize,
    canonicalize_connection,
    descend_ramification,
    invariants,
    is_irreducible,
    make_piece,
    pullback_negate,
    pushforward_regular,
    simple_regular,
    stabilizer_order,
)
from .errors import (
    BackendError,
    BranchError,
    LftError,
    PrecisionError,
    UnsupportedError,
    ValidationError,
)
from .oracle import (
    OracleReport,
    hensel_lift_eigen,
    shift_pairing_inf_to_inf,
    shift_pairing_zero_to_inf,
    verify_transform,
)
from .rings import RATIONAL, ExtensionRing, RationalRing, ring_pow
from .series import TruncSeries, solve_branch
from .transforms import (
    TransformKind,
    lft_inf_to_inf,
    lft_inf_to_zero,
    lft_zero_to_inf,
    solve_symbol_pair,
    symbol_series,
    transform_connection,
    transform_piece,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BranchError",
    "Connection",
    "ConnectionPiece",
    "ExponentialFactor",
    "ExtensionRing",
    "LftError",
    "OracleReport",
    "PrecisionError",
    "RATIONAL",
    "RationalRing",
    "RegularPart",
    "TransformKind",
    "TruncSeries",
    "UnsupportedError",
    "ValidationError",
    "canonicalize",
    "canonicalize_connection",
    "descend_ramification",
    "hensel_lift_eigen",
    "invariants",
    "is_irreducible",
    "lft_inf_to_inf",
    "lft_inf_to_zero",
    "lft_zero_to_inf",
    "make_piece",
    "pullback_negate",
    "pushforward_regular",
    "ring_pow",
    "shift_pairing_inf_to_inf",
    "shift_pairing_zero_to_inf",
    "simple_regular",
    "solve_branch",
    "solve_symbol_pair",
    "stabilizer_order",
    "symbol_series",
    "transform_connection",
    "transform_piece",
    "verify_transform",
]
