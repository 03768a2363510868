#!/usr/bin/env python3
"""Randomized dual-path sweep.

Draws rational instances for each transform kind, runs the series-reversion
path and the companion/Hensel path, and tabulates agreement and timing.
Useful for shaking out precision bookkeeping at higher windows.

    python3 scripts/dual_path_sweep.py --per-kind 30 --prec 16 --seed 3
"""

import argparse
import random
import sys
import time
from fractions import Fraction as Q

from lft import RATIONAL, TransformKind, make_piece, verify_transform
from lft.transforms import transform_piece

PAIRS = {
    TransformKind.ZERO_TO_INF: [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 4), (3, 4), (2, 5)],
    TransformKind.INF_TO_ZERO: [(2, 1), (3, 1), (3, 2), (4, 1), (5, 2), (4, 3), (5, 4), (7, 2)],
    TransformKind.INF_TO_INF: [(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 4), (3, 5), (2, 7)],
}


def draw_instance(rng, kind):
    r, s = rng.choice(PAIRS[kind])
    n = r + s if kind is TransformKind.ZERO_TO_INF else abs(r - s)
    w0 = Q(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2]))
    a0 = w0**n if kind is TransformKind.ZERO_TO_INF else -(w0**n)
    terms = {-s: Q(r, s) * a0}
    for e in range(-s + 1, 0):
        if rng.random() < 0.6:
            terms[e] = Q(rng.randint(-5, 5), rng.randint(1, 3))
    point = "zero" if kind is TransformKind.ZERO_TO_INF else "infinity"
    blocks = [(Q(rng.choice([0, 1, 2, Q(1, 2)])), rng.randint(1, 2))]
    return make_piece(RATIONAL, point, r, terms, blocks), w0


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--per-kind", type=int, default=20)
    ap.add_argument("--prec", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    failures = 0
    for kind in TransformKind:
        t0 = time.monotonic()
        for _ in range(args.per_kind):
            piece, w0 = draw_instance(rng, kind)
            out = transform_piece(piece, kind, args.prec, w0).piece
            rep = verify_transform(piece, out, kind, args.prec, w0)
            if not rep.ok:
                failures += 1
                bad = rep.first_failure()
                print(f"  FAIL {kind.value} ram={piece.ram} order={piece.order}: "
                      f"{bad.name} ({bad.detail})")
        dt = time.monotonic() - t0
        print(f"{kind.value:8s}  {args.per_kind} instances at prec {args.prec}: "
              f"{dt:.2f}s ({dt / args.per_kind * 1000:.0f} ms each)")
    print("all dual paths agree" if not failures else f"{failures} disagreements")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
