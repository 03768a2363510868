"""The three local Fourier transforms of connection pieces.

Each transform solves the change-of-uniformizer equation attached to its
source/target pair by branch-selected series reversion, substitutes into the
defining relation for the new exponential series, and shifts every regular
eigenvalue by half the pole order.  Writing n for the output ramification
(ram+order, ram-order or order-ram), the normalized symbol data a(U) and
b(U') of input and output satisfy the exact leading relation
b_s = (ram/n) * a_s, and b_i depends only on a_0..a_i, so the output is
correct degree for degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .connections import (
    POINT_INFINITY,
    POINT_ZERO,
    Connection,
    ConnectionPiece,
    ExponentialFactor,
    canonicalize,
)
from .errors import (
    BranchError,
    LftError,
    PrecisionError,
    UnsupportedError,
    ValidationError,
)
from .rings import ring_pow
from .series import TruncSeries, solve_branch

Q = Fraction


class TransformKind(str, Enum):
    ZERO_TO_INF = "0-inf"
    INF_TO_ZERO = "inf-0"
    INF_TO_INF = "inf-inf"

    @classmethod
    def parse(cls, text: str) -> "TransformKind":
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValidationError(f"unknown transform kind {text!r}")


@dataclass(frozen=True)
class TransformWitness:
    """Intermediate data of a transform run, kept for cross-verification."""

    kind: TransformKind
    ram_in: int
    order: int
    branch: object
    a_series: TruncSeries
    w_series: TruncSeries
    beta: TruncSeries
    b_series: TruncSeries
    input_canonical: ConnectionPiece


@dataclass(frozen=True)
class TransformResult:
    piece: ConnectionPiece
    witness: TransformWitness


def symbol_series(piece: ConnectionPiece, prec: int) -> TruncSeries:
    """The order-0 normalized symbol a(U) = (s-i)/ram * alpha_{i-s} * U^i + ...

    computed as -(1/ram) * U^(s+1) * alpha'(U) from the canonical alpha; valid
    at either point.  The window is [0, prec + s + 1).
    """
    alpha = piece.factor.alpha.extend_exact(prec + 1)
    s = piece.order
    return alpha.differentiate().shift(s + 1).scale(Q(-1, piece.ram))


def resolve_branch(ring, value, n: int, branch):
    """Turn a branch request into a verified n-th root of ``value``."""
    if branch in (None, "auto"):
        root = ring.nth_root(value, n)
        if root is None:
            raise BranchError(
                f"no exact {n}-th root of {ring.format(value)} in this backend; "
                "pass an explicit branch or use an extension backend"
            )
        return root
    el = ring.coerce(branch)
    if ring_pow(ring, el, n) != value:
        raise BranchError(
            f"branch {ring.format(el)} is not an {n}-th root of {ring.format(value)}"
        )
    return el


def _check_kind(piece: ConnectionPiece, kind: TransformKind):
    s, r = piece.order, piece.ram
    if s < 1:
        raise UnsupportedError("purely regular pieces have no local transform here")
    if kind is TransformKind.ZERO_TO_INF:
        if piece.factor.point != POINT_ZERO:
            raise ValidationError("kind 0-inf expects a piece at zero")
    else:
        if piece.factor.point != POINT_INFINITY:
            raise ValidationError(f"kind {kind.value} expects a piece at infinity")
        if s == r:
            raise UnsupportedError(
                "equal ramification and pole order at infinity is not supported"
            )
        if kind is TransformKind.INF_TO_ZERO and not r > s:
            raise ValidationError("kind inf-0 needs ram > order")
        if kind is TransformKind.INF_TO_INF and not s > r:
            raise ValidationError("kind inf-inf needs order > ram")


def output_ram(kind: TransformKind, r: int, s: int) -> int:
    if kind is TransformKind.ZERO_TO_INF:
        return r + s
    if kind is TransformKind.INF_TO_ZERO:
        return r - s
    return s - r


def solve_symbol_pair(ring, kind: TransformKind, r: int, s: int, a: TruncSeries, branch="auto"):
    """Solve the coupled symbol system for (w, b) given the order-0 symbol a.

    ``w`` is the unit factor of the solved old uniformizer (old = new * w) and
    ``b`` the output symbol; for the three kinds the defining relations are
    w**(r+s) = a(new*w) with b = w**r, w**-(r-s) = -a(new*w) with b = -w**-r,
    and w**(s-r) = -a(new*w) with b = w**-r.
    """
    kind = TransformKind(kind)
    n = output_ram(kind, r, s)
    a0 = a.coeff(0)
    if kind is TransformKind.ZERO_TO_INF:
        branch_el = resolve_branch(ring, a0, n, branch)
        w = solve_branch(a, n, branch_el)
        return branch_el, w, w.pow(r)
    if kind is TransformKind.INF_TO_ZERO:
        branch_el = resolve_branch(ring, -a0, n, branch)
        w = solve_branch((-a).invert_unit(), n, ring.inv(branch_el))
        return branch_el, w, -w.pow(-r)
    branch_el = resolve_branch(ring, -a0, n, branch)
    w = solve_branch(-a, n, branch_el)
    return branch_el, w, w.pow(-r)


def transform_piece(
    piece: ConnectionPiece, kind: TransformKind, prec: int, branch="auto"
) -> TransformResult:
    """Transform one piece, returning the canonical output and the witness."""
    kind = TransformKind(kind)
    _check_kind(piece, kind)
    # branch data refers to the piece as given: no orbit minimization here
    canon = canonicalize(piece, galois_minimize=False)
    ring = canon.ring
    r, s = canon.ram, canon.order
    if prec < s + 1:
        raise PrecisionError(f"precision {prec} is below the floor {s + 1} for this piece")
    n = output_ram(kind, r, s)
    a = symbol_series(canon, prec)
    branch_el, w, b = solve_symbol_pair(ring, kind, r, s, a, branch)
    if kind is TransformKind.ZERO_TO_INF:
        exp_term = b.shift(-s)
        point_out = POINT_INFINITY
    elif kind is TransformKind.INF_TO_ZERO:
        exp_term = w.pow(-r).shift(-s)
        point_out = POINT_ZERO
    else:
        exp_term = b.shift(-s)
        point_out = POINT_INFINITY

    x = w.shift(1)  # new uniformizer times w: the solved old uniformizer
    alpha_in = canon.factor.alpha.extend_exact(prec + 1)
    beta = alpha_in.compose(x) + exp_term
    _check_residuals(canon, kind, x, beta)
    if beta.is_zero or beta.low != -s:
        raise LftError("transformed series does not have the expected pole order")

    beta_neg = TruncSeries.from_terms(ring, {e: c for e, c in beta.terms() if e < 0}, 0)
    out_piece = canonicalize(
        ConnectionPiece(
            ExponentialFactor(point_out, n, beta_neg),
            canon.regular.shifted(ring, Q(s, 2)),
        )
    )
    witness = TransformWitness(
        kind=kind,
        ram_in=r,
        order=s,
        branch=branch_el,
        a_series=a,
        w_series=w,
        beta=beta,
        b_series=b,
        input_canonical=canon,
    )
    return TransformResult(out_piece, witness)


def _check_residuals(canon, kind, x, beta):
    """Both defining equations must hold to working precision after solving."""
    ring = canon.ring
    r, s = canon.ram, canon.order
    alpha = canon.factor.alpha.extend_exact(beta.prec + 1)
    dalpha = alpha.differentiate()
    if kind is TransformKind.ZERO_TO_INF:
        dt_alpha = dalpha.shift(1 - r).scale(Q(1, r))
        tprime_exp = -(r + s)
    else:
        dt_alpha = dalpha.shift(1 + r).scale(Q(-1, r))
        tprime_exp = r - s if kind is TransformKind.INF_TO_ZERO else -(s - r)
    resid = dt_alpha.compose(x)
    resid = resid + TruncSeries.monomial(ring, ring.one, tprime_exp, resid.prec)
    if not resid.is_zero:
        raise LftError("uniformizer-change series failed the defining equation")
    # the second equation defines beta: recheck the combination explicitly
    t_series = x.pow(r) if kind is TransformKind.ZERO_TO_INF else x.pow(-r)
    tt = t_series.shift(tprime_exp)
    again = alpha.compose(x) + tt - beta
    if not again.is_zero:
        raise LftError("transformed series failed its defining equation")


def lft_zero_to_inf(piece: ConnectionPiece, prec: int, branch="auto") -> ConnectionPiece:
    """Transform a piece at zero into its piece at infinity."""
    return transform_piece(piece, TransformKind.ZERO_TO_INF, prec, branch).piece


def lft_inf_to_zero(piece: ConnectionPiece, prec: int, branch="auto") -> ConnectionPiece:
    """Transform a piece at infinity (ram > order) into its piece at zero."""
    return transform_piece(piece, TransformKind.INF_TO_ZERO, prec, branch).piece


def lft_inf_to_inf(piece: ConnectionPiece, prec: int, branch="auto") -> ConnectionPiece:
    """Transform a piece at infinity (order > ram) into another one at infinity."""
    return transform_piece(piece, TransformKind.INF_TO_INF, prec, branch).piece


def transform_connection(
    conn: Connection, kind: TransformKind, prec: int, branch="auto"
) -> tuple[Connection, list[TransformWitness]]:
    """Apply the piece transform across a direct sum, preserving piece order."""
    kind = TransformKind(kind)
    pieces = []
    witnesses = []
    failures = []
    for idx, piece in enumerate(conn.pieces):
        try:
            result = transform_piece(piece, kind, prec, branch)
        except LftError as exc:
            failures.append(f"piece {idx}: {exc}")
            continue
        pieces.append(result.piece)
        witnesses.append(result.witness)
    if failures:
        raise ValidationError("; ".join(failures))
    return Connection(tuple(pieces)), witnesses
