#!/usr/bin/env python3
"""Walk the flagship rank-one examples through all three transforms.

Prints the input piece, the transformed piece, the solved branch data, and
the oracle's per-identity verdicts.  Everything is exact; no tolerances.
"""

from fractions import Fraction as Q

from lft import RATIONAL, TransformKind, make_piece, verify_transform
from lft.serialize import piece_to_doc
from lft.transforms import transform_piece

EXAMPLES = [
    ("zero to infinity", TransformKind.ZERO_TO_INF,
     make_piece(RATIONAL, "zero", 1, {-1: 4}, [(0, 1)])),
    ("infinity to zero", TransformKind.INF_TO_ZERO,
     make_piece(RATIONAL, "infinity", 2, {-1: 1}, [(0, 1)])),
    ("infinity to infinity", TransformKind.INF_TO_INF,
     make_piece(RATIONAL, "infinity", 1, {-2: 1}, [(0, 1)])),
]


def main():
    for label, kind, piece in EXAMPLES:
        print(f"== {label} ==")
        print("  input: ", piece_to_doc(piece))
        res = transform_piece(piece, kind, prec=8)
        wit = res.witness
        print("  output:", piece_to_doc(res.piece))
        print(f"  branch {RATIONAL.format(wit.branch)}, "
              f"eigenvalue shift {Q(wit.order, 2)}")
        b = ", ".join(RATIONAL.format(wit.b_series.coeff(i)) for i in range(4))
        print(f"  output symbol coefficients: {b}, ...")
        report = verify_transform(piece, res.piece, kind, prec=8)
        verdicts = " ".join(
            f"{c.name}={c.status}" for c in report.identities if c.status != "skipped"
        )
        print(f"  oracle: ok={report.ok}  {verdicts}")
        print()


if __name__ == "__main__":
    main()
