from fractions import Fraction as Q

import pytest

from lft import (
    BranchError,
    Connection,
    ExtensionRing,
    PrecisionError,
    RATIONAL,
    TransformKind,
    UnsupportedError,
    ValidationError,
    canonicalize,
    lft_inf_to_inf,
    lft_inf_to_zero,
    lft_zero_to_inf,
    make_piece,
    pullback_negate,
    ring_pow,
    transform_connection,
)
from lft.series import TruncSeries
from lft.transforms import symbol_series, transform_piece

from conftest import KIND_PAIRS, rational_instance


def test_worked_example_rank_one():
    p = make_piece(RATIONAL, "zero", 1, {-1: 4}, [(0, 1)])
    out = lft_zero_to_inf(p, 8)
    assert out.factor.point == "infinity" and out.ram == 2
    assert dict(out.factor.alpha.terms()) == {-1: Q(4)}
    assert out.regular.blocks == ((Q(1, 2), 1),)


def test_zero_to_inf_second_example():
    # ram 1, order 2: the symbol constant is 8, the cube branch is 2
    p = make_piece(RATIONAL, "zero", 1, {-2: 4}, [(0, 1)])
    res = transform_piece(p, TransformKind.ZERO_TO_INF, 8)
    assert res.witness.branch == 2
    assert res.piece.ram == 3 and res.piece.order == 2
    assert res.witness.b_series.coeff(0) == 2
    # the raw shift is s/2 = 1, which the canonical form reduces mod 1
    assert res.piece.regular.blocks == ((Q(0), 1),)


def test_inf_to_zero_example():
    p = make_piece(RATIONAL, "infinity", 2, {-1: 1}, [(0, 1)])
    res = transform_piece(p, TransformKind.INF_TO_ZERO, 8)
    assert res.witness.a_series.coeff(0) == Q(1, 2)
    assert res.piece.factor.point == "zero" and res.piece.ram == 1
    assert dict(res.piece.factor.alpha.terms()) == {-1: Q(-1, 4)}
    assert res.witness.b_series.coeff(0) == Q(-1, 4)
    assert res.piece.regular.blocks == ((Q(1, 2), 1),)


def test_inf_to_inf_example():
    p = make_piece(RATIONAL, "infinity", 1, {-2: 1}, [(0, 1)])
    res = transform_piece(p, TransformKind.INF_TO_INF, 8)
    assert res.piece.ram == 1 and res.piece.order == 2
    assert dict(res.piece.factor.alpha.terms()) == {-2: Q(-1, 4)}
    assert res.witness.b_series.coeff(0) == Q(-1, 2)


def test_validation_and_dispatch():
    reg = make_piece(RATIONAL, "zero", 1, {}, [(0, 1)])
    with pytest.raises(UnsupportedError):
        lft_zero_to_inf(reg, 5)
    wrong_point = make_piece(RATIONAL, "infinity", 2, {-1: 1}, [(0, 1)])
    with pytest.raises(ValidationError):
        lft_zero_to_inf(wrong_point, 5)
    equal = make_piece(RATIONAL, "infinity", 2, {-2: 1}, [(0, 1)])
    with pytest.raises(UnsupportedError):
        lft_inf_to_zero(equal, 5)
    with pytest.raises(UnsupportedError):
        lft_inf_to_inf(equal, 5)
    steep = make_piece(RATIONAL, "infinity", 1, {-2: 1}, [(0, 1)])
    with pytest.raises(ValidationError):
        lft_inf_to_zero(steep, 5)
    with pytest.raises(PrecisionError):
        lft_inf_to_inf(steep, 2)
    with pytest.raises(BranchError):
        # minus the symbol constant is 2, which has no rational square root
        lft_inf_to_inf(make_piece(RATIONAL, "infinity", 1, {-3: Q(-2, 3)}, [(0, 1)]), 5)
    with pytest.raises(BranchError):
        lft_zero_to_inf(make_piece(RATIONAL, "zero", 1, {-1: 4}, [(0, 1)]), 5, branch=3)


def test_ratio_laws_randomized(rng):
    ratios = {
        TransformKind.ZERO_TO_INF: lambda r, s: Q(r, r + s),
        TransformKind.INF_TO_ZERO: lambda r, s: Q(r, r - s),
        TransformKind.INF_TO_INF: lambda r, s: Q(r, s - r),
    }
    from lft.transforms import solve_symbol_pair

    for kind, ratio in ratios.items():
        for _ in range(25):
            r, s = rng.choice(KIND_PAIRS[kind])
            n = r + s if kind is TransformKind.ZERO_TO_INF else abs(r - s)
            w0 = Q(rng.choice([1, 2, -1, -3]))
            a0 = w0**n if kind is TransformKind.ZERO_TO_INF else -(w0**n)
            coeffs = [a0] + [
                Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(s)
            ]
            a = TruncSeries.from_terms(RATIONAL, dict(enumerate(coeffs)), s + 2)
            _, _, b = solve_symbol_pair(RATIONAL, kind, r, s, a, w0)
            assert b.coeff(s) == ratio(r, s) * coeffs[s]


def test_vanishing_top_coefficient(rng):
    # symbols coming from an exponential series alone have a_s = 0, so b_s = 0
    for kind in TransformKind:
        for _ in range(8):
            piece, w0 = rational_instance(rng, kind)
            res = transform_piece(piece, kind, piece.order + 3, w0)
            assert res.witness.a_series.coeff(piece.order) == 0
            assert res.witness.b_series.coeff(piece.order) == 0


def test_bookkeeping_and_order(rng):
    for kind in TransformKind:
        for _ in range(10):
            piece, w0 = rational_instance(rng, kind, max_dim=2)
            res = transform_piece(piece, kind, piece.order + 2, w0)
            r, s, dim = piece.ram, piece.order, piece.regular.dim
            n = r + s if kind is TransformKind.ZERO_TO_INF else abs(r - s)
            out = res.piece
            assert out.ram == n
            assert out.order == s
            assert out.rank == n * dim
            assert out.slope == Q(s, n)
            assert out.irregularity == s * dim
            assert res.witness.beta.low == -s


def test_eigenvalue_shift_including_jordan_blocks(rng):
    piece, w0 = rational_instance(rng, TransformKind.ZERO_TO_INF, r=2, s=3)
    piece = make_piece(
        RATIONAL, "zero", 2,
        dict(piece.factor.alpha.terms()),
        [(Q(1, 4), 2), (Q(1, 4), 1), (0, 3)],
    )
    res = transform_piece(piece, TransformKind.ZERO_TO_INF, 6, w0)
    shifted = sorted(
        ((c + Q(3, 2)) % 1, size) for c, size in piece.regular.blocks
    )
    got = sorted((c, size) for c, size in res.piece.regular.blocks)
    assert got == shifted
    assert {size for _, size in got} == {1, 2, 3}


def test_transform_connection_distributes(rng):
    assert transform_connection(Connection(()), TransformKind.ZERO_TO_INF, 5)[0] == Connection(())
    p1, w1 = rational_instance(rng, TransformKind.ZERO_TO_INF, r=1, s=1)
    p2, w2 = rational_instance(rng, TransformKind.ZERO_TO_INF, r=2, s=1)
    conn = Connection((p1, p2))
    out, wits = transform_connection(conn, TransformKind.ZERO_TO_INF, 6)
    assert len(out.pieces) == 2 and len(wits) == 2
    assert out.pieces[0] == transform_piece(p1, TransformKind.ZERO_TO_INF, 6).piece
    assert out.pieces[1] == transform_piece(p2, TransformKind.ZERO_TO_INF, 6).piece
    assert out.rank == sum((p.ram + p.order) * p.regular.dim for p in conn.pieces)


def test_transform_connection_aggregates_errors():
    good = make_piece(RATIONAL, "zero", 1, {-1: 4}, [(0, 1)])
    bad = make_piece(RATIONAL, "zero", 1, {}, [(0, 1)])
    with pytest.raises(ValidationError) as err:
        transform_connection(Connection((good, bad)), TransformKind.ZERO_TO_INF, 5)
    assert "piece 1" in str(err.value)


def test_composition_inf_zero_round_trip(rng):
    done = 0
    for r, s in [(3, 1), (3, 2), (5, 2), (5, 4), (7, 2), (5, 1), (7, 4), (9, 2), (3, 1), (5, 3)]:
        g = Q(rng.choice([1, 2, -2]), rng.choice([1, 2]))
        a0 = -(g ** (r - s))
        terms = {-s: Q(r, s) * a0}
        for e in range(-s + 1, 0):
            if rng.random() < 0.7:
                terms[e] = Q(rng.randint(-5, 5), rng.randint(1, 3))
        piece = make_piece(RATIONAL, "infinity", r, terms, [(Q(rng.randint(0, 3)), 1)])
        mid = lft_inf_to_zero(piece, s + 6)
        back = lft_zero_to_inf(mid, s + 6)
        assert canonicalize(back) == canonicalize(pullback_negate(piece))
        done += 1
    assert done >= 10


def test_composition_inf_inf_round_trip(rng):
    done = 0
    for r, s in [(3, 4), (3, 5), (5, 6), (5, 7), (5, 8), (5, 9), (7, 8), (3, 4), (7, 9), (9, 10)]:
        g = Q(rng.choice([1, 2, -2, 3]), rng.choice([1, 2]))
        a0 = -(g ** (s - r))
        terms = {-s: Q(r, s) * a0}
        for e in range(-s + 1, 0):
            if rng.random() < 0.5:
                terms[e] = Q(rng.randint(-4, 4), rng.randint(1, 3))
        piece = make_piece(RATIONAL, "infinity", r, terms, [(Q(rng.randint(0, 2)), 1)])
        mid = lft_inf_to_inf(piece, s + 5)
        back = lft_inf_to_inf(mid, s + 5)
        assert canonicalize(back) == canonicalize(pullback_negate(piece))
        done += 1
    assert done >= 10


def test_branch_equivariance_extension():
    # with branch eps*w0 the output coefficients pick up eps^(i + ram)
    for r, s in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]:
        n = r + s
        ring = ExtensionRing(n, 1, 1)
        eps = ring.zeta
        terms = {-s: ring.coerce(Q(r, s))}
        for e in range(-s + 1, 0):
            terms[e] = ring.coerce(e + 2)
        piece = make_piece(ring, "zero", r, terms, [(ring.zero, 1)])
        base = transform_piece(piece, TransformKind.ZERO_TO_INF, s + 3, ring.one)
        twisted = transform_piece(piece, TransformKind.ZERO_TO_INF, s + 3, eps)
        b0, b1 = base.witness.b_series, twisted.witness.b_series
        for i in range(b0.prec):
            assert b1.coeff(i) == ring_pow(ring, eps, i + r) * b0.coeff(i)
        # the canonical outputs agree: the orbit quotient removes the branch
        assert base.piece == twisted.piece


def test_residuals_hold(rng):
    for kind in TransformKind:
        piece, w0 = rational_instance(rng, kind)
        res = transform_piece(piece, kind, piece.order + 4, w0)
        wit = res.witness
        r, s = wit.ram_in, wit.order
        n = r + s if kind is TransformKind.ZERO_TO_INF else abs(r - s)
        x = wit.w_series.shift(1)
        if kind is TransformKind.ZERO_TO_INF:
            resid = wit.w_series.pow(n) - wit.a_series.compose(x)
        elif kind is TransformKind.INF_TO_ZERO:
            resid = wit.w_series.pow(n) - (-wit.a_series).invert_unit().compose(x)
        else:
            resid = wit.w_series.pow(n) - (-wit.a_series).compose(x)
        assert resid.is_zero


def test_symbol_series_formula():
    piece = make_piece(RATIONAL, "zero", 2, {-3: 6, -1: 4}, [(0, 1)])
    a = symbol_series(canonicalize(piece), 4)
    # a_i = (s - i)/ram * alpha_(i-s)
    assert a.coeff(0) == Q(3, 2) * 6
    assert a.coeff(2) == Q(1, 2) * 4
    assert a.coeff(1) == 0 and a.coeff(3) == 0
