"""Shared helpers: series builders, brute-force polynomial oracle, generators."""

from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest

from lft import RATIONAL, TransformKind, make_piece
from lft.series import TruncSeries


def series(terms, prec, ring=RATIONAL, denom=1):
    return TruncSeries.from_terms(ring, {e: Q(c) for e, c in terms.items()}, prec, denom)


# -- brute-force Laurent polynomial arithmetic (independent of TruncSeries) --


def poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[ea + eb] = out.get(ea + eb, Q(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Q(0)) + c
    return {e: c for e, c in out.items() if c}


def poly_inverse(a: dict, bound: int) -> dict:
    """Coefficients of 1/a on exponents < bound, by direct long division."""
    low = min(a)
    lead = a[low]
    out = {}
    rem = {0: Q(1)}
    while rem:
        elow = min(rem)
        e = elow - low
        if e >= bound:
            break
        coeff = rem[elow] / lead
        out[e] = coeff
        rem = poly_add(rem, {ex + e: -coeff * cx for ex, cx in a.items()})
    return out


def poly_compose_bruteforce(f: dict, g: dict, bound: int) -> dict:
    """Direct substitution of g into the Laurent polynomial f, keeping
    exponents < bound.  g must have positive order."""
    out = {}
    ginv = poly_inverse(g, bound + abs(min(f, default=0)) * abs(min(g)) + 4)
    for e, c in f.items():
        base = g if e >= 0 else ginv
        power = {0: Q(1)}
        for _ in range(abs(e)):
            power = poly_mul(power, base)
            power = {ex: cx for ex, cx in power.items() if ex < bound + 8}
        out = poly_add(out, {ex: cx * c for ex, cx in power.items()})
    return {e: c for e, c in out.items() if e < bound and c}


# -- randomized transform instances -----------------------------------------


KIND_PAIRS = {
    TransformKind.ZERO_TO_INF: [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 4), (4, 1), (2, 5), (3, 4), (4, 5)],
    TransformKind.INF_TO_ZERO: [(2, 1), (3, 1), (3, 2), (4, 1), (5, 2), (4, 3), (5, 4), (6, 1), (7, 2), (5, 3)],
    TransformKind.INF_TO_INF: [(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 4), (3, 5), (1, 6), (2, 7), (4, 5)],
}


def rational_instance(rng: random.Random, kind: TransformKind, r=None, s=None,
                      eigen_pool=(0, 1, 2, 3), max_dim=1):
    """A random piece whose branch stays rational, plus that branch."""
    if r is None:
        r, s = rng.choice(KIND_PAIRS[kind])
    n = r + s if kind is TransformKind.ZERO_TO_INF else abs(r - s)
    w0 = Q(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2]))
    val = w0**n
    a0 = val if kind is TransformKind.ZERO_TO_INF else -val
    terms = {-s: Q(r, s) * a0}
    for e in range(-s + 1, 0):
        if rng.random() < 0.6:
            terms[e] = Q(rng.randint(-5, 5), rng.randint(1, 3))
    blocks = []
    for _ in range(rng.randint(1, max_dim)):
        blocks.append((Q(rng.choice(eigen_pool)), rng.randint(1, 2)))
    point = "zero" if kind is TransformKind.ZERO_TO_INF else "infinity"
    return make_piece(RATIONAL, point, r, terms, blocks), w0


@pytest.fixture
def rng():
    return random.Random(20240811)
