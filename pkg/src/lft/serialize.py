"""JSON schema for connections, reports, and job metadata.

Coefficients are exact strings ("p/q" rationals, or polynomial strings in
the declared generators ``zeta`` and ``x`` for extension backends).  Key
order is fixed at construction so identical inputs serialize to identical
bytes.  Parsing is strict: unknown fields are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .connections import (
    Connection,
    ConnectionPiece,
    ExponentialFactor,
    RegularPart,
)
from .errors import ValidationError
from .rings import RATIONAL, backend_from_doc
from .series import TruncSeries

Q = Fraction

_PIECE_KEYS = {"point", "ram", "alpha", "regular"}
_DOC_KEYS = {"pieces", "backend", "meta"}


def piece_to_doc(piece: ConnectionPiece) -> dict:
    ring = piece.ring
    alpha = {str(e): ring.format(c) for e, c in piece.factor.alpha.terms()}
    alpha = dict(sorted(alpha.items(), key=lambda kv: int(kv[0])))
    return {
        "point": piece.factor.point,
        "ram": piece.factor.ram,
        "alpha": alpha,
        "regular": [
            {"c": ring.format(c), "size": size} for c, size in piece.regular.blocks
        ],
    }


def connection_to_doc(conn: Connection, ring, meta: dict | None = None) -> dict:
    doc = {}
    if ring != RATIONAL:
        doc["backend"] = ring.describe()
    doc["pieces"] = [piece_to_doc(p) for p in conn.pieces]
    if meta is not None:
        doc["meta"] = meta
    return doc


def piece_from_doc(doc, ring) -> ConnectionPiece:
    if not isinstance(doc, dict):
        raise ValidationError("piece must be an object")
    unknown = set(doc) - _PIECE_KEYS
    if unknown:
        raise ValidationError(f"unknown piece fields {sorted(unknown)}")
    missing = _PIECE_KEYS - set(doc)
    if missing:
        raise ValidationError(f"piece is missing fields {sorted(missing)}")
    if not isinstance(doc["ram"], int) or doc["ram"] < 1:
        raise ValidationError("ram must be a positive integer")
    if not isinstance(doc["alpha"], dict):
        raise ValidationError("alpha must be an object keyed by integer exponents")
    terms = {}
    for key, val in doc["alpha"].items():
        try:
            e = int(key)
        except ValueError:
            raise ValidationError(f"alpha key {key!r} is not an integer exponent") from None
        terms[e] = ring.parse(val) if isinstance(val, str) else ring.coerce(val)
    if terms:
        low = min(terms)
        if ring.is_zero(terms[low]):
            raise ValidationError(
                f"alpha has an explicit zero at its lowest exponent {low}"
            )
    prec = max((e + 1 for e in terms), default=0)
    alpha = TruncSeries.from_terms(ring, terms, max(prec, 0))
    if not isinstance(doc["regular"], list) or not doc["regular"]:
        raise ValidationError("regular must be a non-empty list of blocks")
    blocks = []
    for block in doc["regular"]:
        if not isinstance(block, dict) or set(block) != {"c", "size"}:
            raise ValidationError("each regular block needs exactly the fields c, size")
        if not isinstance(block["size"], int) or block["size"] < 1:
            raise ValidationError("block size must be a positive integer")
        c = block["c"]
        blocks.append((ring.parse(c) if isinstance(c, str) else ring.coerce(c), block["size"]))
    return ConnectionPiece(
        ExponentialFactor(doc["point"], doc["ram"], alpha),
        RegularPart(tuple(blocks)),
    )


def connection_from_doc(doc, ring=None):
    """Parse a connection document; returns (connection, ring)."""
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        raise ValidationError(f"unknown document fields {sorted(unknown)}")
    if "pieces" not in doc:
        raise ValidationError("document must contain a 'pieces' list")
    doc_ring = backend_from_doc(doc.get("backend")) if "backend" in doc else None
    if ring is None:
        ring = doc_ring or RATIONAL
    elif doc_ring is not None and doc_ring != ring:
        raise ValidationError("document backend conflicts with the requested backend")
    if not isinstance(doc["pieces"], list):
        raise ValidationError("'pieces' must be a list")
    pieces = tuple(piece_from_doc(p, ring) for p in doc["pieces"])
    return Connection(pieces), ring
