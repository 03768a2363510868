"""Data model for formal connections in pushforward normal form.

A piece is the pushforward, along the degree-``ram`` cover of the chosen
point, of a rank-one exponential twist tensored with a regular part:
the exponential series ``alpha`` lives in the local uniformizer (``t^(1/ram)``
at zero, ``t^(-1/ram)`` at infinity) and contributes the symbol
``U d/dU (alpha)``; the constant term of ``alpha``, when present, acts as a
shift of every regular eigenvalue and is moved there by canonicalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedError, ValidationError
from .rings import ring_pow
from .series import TruncSeries

Q = Fraction

POINT_ZERO = "zero"
POINT_INFINITY = "infinity"
POINTS = (POINT_ZERO, POINT_INFINITY)


@dataclass(frozen=True)
class ExponentialFactor:
    point: str
    ram: int
    alpha: TruncSeries

    def __post_init__(self):
        if self.point not in POINTS:
            raise ValidationError(f"point must be one of {POINTS}")
        if self.ram < 1:
            raise ValidationError("ramification must be a positive integer")
        if self.alpha.denom != 1:
            raise ValidationError("alpha must be written in the uniformizer (denom 1)")

    @property
    def order(self) -> int:
        """The pole order s: alpha has order -s, or 0 for a purely regular piece."""
        if self.alpha.is_zero:
            return 0
        return max(0, -self.alpha.low)


@dataclass(frozen=True)
class RegularPart:
    blocks: tuple[tuple[object, int], ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValidationError("regular part must have at least one block")
        if any(size < 1 for _, size in self.blocks):
            raise ValidationError("block sizes must be positive")

    @property
    def dim(self) -> int:
        return sum(size for _, size in self.blocks)

    def shifted(self, ring, delta) -> "RegularPart":
        delta = ring.coerce(delta)
        return RegularPart(tuple((c + delta, size) for c, size in self.blocks))


def simple_regular(ring, c=0) -> RegularPart:
    return RegularPart(((ring.coerce(c), 1),))


@dataclass(frozen=True)
class ConnectionPiece:
    factor: ExponentialFactor
    regular: RegularPart

    @property
    def ring(self):
        return self.factor.alpha.ring

    @property
    def ram(self) -> int:
        return self.factor.ram

    @property
    def order(self) -> int:
        return self.factor.order

    @property
    def slope(self) -> Q:
        return Q(self.order, self.ram)

    @property
    def irregularity(self) -> int:
        return self.order * self.regular.dim

    @property
    def rank(self) -> int:
        return self.ram * self.regular.dim


@dataclass(frozen=True)
class Connection:
    pieces: tuple[ConnectionPiece, ...]

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.pieces)

    @property
    def irregularity(self) -> int:
        return sum(p.irregularity for p in self.pieces)


def make_piece(ring, point: str, ram: int, alpha_terms: dict, blocks) -> ConnectionPiece:
    """Convenience constructor from exact term data."""
    prec = max((e + 1 for e in alpha_terms), default=0)
    prec = max(prec, 0)
    alpha = TruncSeries.from_terms(
        ring, {e: ring.coerce(c) for e, c in alpha_terms.items()}, prec
    )
    reg = RegularPart(tuple((ring.coerce(c), size) for c, size in blocks))
    return ConnectionPiece(ExponentialFactor(point, ram, alpha), reg)


def invariants(piece: ConnectionPiece) -> tuple[Q, int, int]:
    """(slope, irregularity, rank) of a piece."""
    return piece.slope, piece.irregularity, piece.rank


def _reduce_eigenvalue(ring, c):
    shift = math.floor(ring.rational_part(c))
    return c - ring.coerce(shift)


def canonicalize(piece: ConnectionPiece, galois_minimize: bool = True) -> ConnectionPiece:
    """Invariant-preserving normal form.

    Drops the terms of alpha with positive exponent, moves its constant term
    into the regular eigenvalues, reduces the rational part of every
    eigenvalue into [0, 1), sorts the blocks, and, when the backend has a
    primitive ram-th root of unity, replaces alpha by the smallest
    representative of its orbit under rescaling the uniformizer by that root.
    The orbit step can be switched off by callers whose branch data refers to
    the representative as given.
    """
    ring = piece.ring
    alpha = piece.factor.alpha
    const = ring.zero
    neg_terms = {}
    for e, c in alpha.terms():
        if e == 0:
            const = c
        elif e < 0:
            neg_terms[e] = c
    new_alpha = TruncSeries.from_terms(ring, neg_terms, 0)
    blocks = [
        (_reduce_eigenvalue(ring, c + const), size) for c, size in piece.regular.blocks
    ]
    blocks.sort(key=lambda b: (ring.sort_key(b[0]), b[1]))
    ram = piece.ram
    if galois_minimize and not new_alpha.is_zero and ram > 1 and ring.has_root_of_unity(ram):
        eta = ring.root_of_unity(ram)
        best = None
        for j in range(ram):
            cand = {
                e: ring_pow(ring, eta, (j * e) % ram) * c for e, c in neg_terms.items()
            }
            key = tuple(ring.sort_key(cand[e]) for e in sorted(cand))
            if best is None or key < best[0]:
                best = (key, cand)
        new_alpha = TruncSeries.from_terms(ring, best[1], 0)
    return ConnectionPiece(
        ExponentialFactor(piece.factor.point, ram, new_alpha),
        RegularPart(tuple(blocks)),
    )


def canonicalize_connection(conn: Connection) -> Connection:
    return Connection(tuple(canonicalize(p) for p in conn.pieces))


def stabilizer_order(piece: ConnectionPiece) -> int:
    """Order of the subgroup of uniformizer rescalings fixing the symbol.

    Equals gcd(ram, gcd of the pole orders of the terms of alpha); the piece
    is irreducible iff this is 1 and the regular part is one dimensional.
    """
    canon = canonicalize(piece)
    if canon.order < 1:
        raise UnsupportedError("stabilizer is only defined for irregular pieces")
    g = 0
    for e, _ in canon.factor.alpha.terms():
        g = math.gcd(g, -e)
    return math.gcd(canon.ram, g)


def is_irreducible(piece: ConnectionPiece) -> bool:
    return stabilizer_order(piece) == 1 and piece.regular.dim == 1


def descend_ramification(piece: ConnectionPiece) -> list[ConnectionPiece]:
    """Split a piece with nontrivial stabilizer into pieces of smaller cover degree.

    With stabilizer order p, alpha is supported on exponents divisible by p,
    so it rewrites in tau = U^p; the piece is isomorphic to the direct sum of
    p pieces of ramification ram/p whose eigenvalues pick up the shifts j/p,
    j = 1..p.  Rank, slope and irregularity are preserved in total.
    """
    p = stabilizer_order(piece)
    if p == 1:
        return [piece]
    canon = canonicalize(piece)
    ring = piece.ring
    tau_terms = {e // p: c for e, c in canon.factor.alpha.terms()}
    alpha_tau = TruncSeries.from_terms(ring, tau_terms, 0)
    factor = ExponentialFactor(canon.factor.point, canon.ram // p, alpha_tau)
    return [
        ConnectionPiece(factor, canon.regular.shifted(ring, Q(j, p))) for j in range(1, p + 1)
    ]


def pushforward_regular(d: int, regular: RegularPart, ring) -> RegularPart:
    """Pushforward of a regular part along a degree-d cover: each eigenvalue c
    fans out into c + i/d for i = 1..d, block sizes unchanged."""
    if d < 1:
        raise ValidationError("cover degree must be positive")
    blocks = []
    for c, size in regular.blocks:
        for i in range(1, d + 1):
            blocks.append((c + ring.coerce(Q(i, d)), size))
    return RegularPart(tuple(blocks))


def pullback_negate(piece: ConnectionPiece, zeta=None) -> ConnectionPiece:
    """Pullback along t -> -t: rescales the uniformizer by a ram-th root of -1.

    The coefficient at exponent e picks up zeta**e; eigenvalues are unchanged.
    For odd ram the rational backend suffices (zeta = -1); otherwise pass an
    explicit root or use a backend containing one.
    """
    ring = piece.ring
    ram = piece.ram
    if zeta is None:
        if ram % 2 == 1:
            zeta = ring.coerce(-1)
        elif ring.has_root_of_unity(2 * ram):
            zeta = ring.root_of_unity(2 * ram)
        else:
            raise UnsupportedError(
                f"backend has no {ram}-th root of -1; pass zeta explicitly"
            )
    elif ring_pow(ring, ring.coerce(zeta), ram) != ring.coerce(-1):
        raise ValidationError("zeta**ram must equal -1")
    else:
        zeta = ring.coerce(zeta)
    terms = {
        e: ring_pow(ring, zeta, e % (2 * ram)) * c for e, c in piece.factor.alpha.terms()
    }
    alpha = TruncSeries.from_terms(ring, terms, piece.factor.alpha.prec)
    return ConnectionPiece(
        ExponentialFactor(piece.factor.point, ram, alpha), piece.regular
    )
