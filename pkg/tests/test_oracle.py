from fractions import Fraction as Q

import pytest

from lft import (
    ConnectionPiece,
    ExtensionRing,
    RATIONAL,
    TransformKind,
    ValidationError,
    hensel_lift_eigen,
    make_piece,
    shift_pairing_inf_to_inf,
    shift_pairing_zero_to_inf,
    verify_transform,
)
from lft.connections import ExponentialFactor, RegularPart
from lft.oracle import (
    SeriesMatrix,
    c_families_inf_to_inf,
    charpoly_const,
    charpoly_series,
    companion_inf_to_zero,
    companion_zero_to_inf,
    corner_matrices_inf_to_inf,
    display_block_matrix,
    transfer_inf_to_inf,
)
from lft.series import TruncSeries
from lft.transforms import transform_piece

from conftest import rational_instance


def consts(vals, prec=4):
    return TruncSeries.from_terms(RATIONAL, dict(enumerate(vals)), prec)


def test_companion_small_shapes():
    a = [Q(5), Q(3)]
    gamma, gamma0 = companion_zero_to_inf(RATIONAL, 1, 1, a, 3)
    assert gamma.entry(0, 0).coeff(1) == 3 and gamma.entry(1, 0).coeff(0) == 5
    assert gamma.entry(0, 1).coeff(0) == 1
    chi = charpoly_series(gamma)
    # lambda^2 - a_1 X lambda - a_0
    assert chi[0] == TruncSeries.monomial(RATIONAL, Q(-5), 0, 3)
    assert chi[1] == TruncSeries.monomial(RATIONAL, Q(-3), 1, 3)
    chi0 = charpoly_const(RATIONAL, gamma0.coeff_matrix(0))
    assert chi0 == [Q(-5), Q(0), Q(1)]

    gamma, _ = companion_zero_to_inf(RATIONAL, 2, 1, a, 3)
    col = [gamma.entry(i, 0) for i in range(3)]
    assert col[0].is_zero and col[1].coeff(1) == 3 and col[2].coeff(0) == 5


def test_display_block_matches_power():
    for r, s in [(1, 1), (2, 1), (1, 2), (2, 3), (3, 2)]:
        a = [Q(k + 2) for k in range(s + 1)]
        gamma, _ = companion_zero_to_inf(RATIONAL, r, s, a, s + 1)
        disp = display_block_matrix(RATIONAL, r, s, a, s + 1)
        assert disp == gamma.power(r)


def test_hensel_lift_examples():
    gamma, _ = companion_zero_to_inf(RATIONAL, 1, 1, [Q(1), Q(1)], 3)
    alpha, u = hensel_lift_eigen(gamma, Q(1))
    assert [alpha.coeff(i) for i in range(3)] == [1, Q(1, 2), Q(1, 8)]

    diag = SeriesMatrix.build(
        RATIONAL, 2, 3,
        {(0, 0): TruncSeries.constant(RATIONAL, 1, 3),
         (1, 1): TruncSeries.constant(RATIONAL, 2, 3)},
    )
    alpha, u = hensel_lift_eigen(diag, Q(1))
    assert alpha == TruncSeries.constant(RATIONAL, 1, 3)
    assert u[0].coeff(0) == 1 and u[1].is_zero

    prec1 = SeriesMatrix.build(
        RATIONAL, 2, 1,
        {(0, 1): TruncSeries.constant(RATIONAL, 1, 1),
         (1, 0): TruncSeries.constant(RATIONAL, 4, 1)},
    )
    alpha, _ = hensel_lift_eigen(prec1, Q(2))
    assert alpha == TruncSeries.constant(RATIONAL, 2, 1)


def test_hensel_lift_rejections():
    ident = SeriesMatrix.identity(RATIONAL, 2, 2)
    with pytest.raises(ValidationError):
        hensel_lift_eigen(ident, Q(1))  # multiple root
    with pytest.raises(ValidationError):
        hensel_lift_eigen(ident, Q(3))  # not a root


def test_verify_each_kind(rng):
    for kind in TransformKind:
        for _ in range(4):
            piece, w0 = rational_instance(rng, kind, eigen_pool=(0, 1, Q(1, 2), Q(3, 4)))
            out = transform_piece(piece, kind, piece.order + 4, w0).piece
            rep = verify_transform(piece, out, kind, piece.order + 4, w0)
            assert rep.ok, [(c.name, c.detail) for c in rep.identities if c.status == "fail"]
            assert any(c.name == "b_dual_path" and c.status == "pass" for c in rep.identities)


def test_verify_lists_every_identity(rng):
    piece, w0 = rational_instance(rng, TransformKind.ZERO_TO_INF, r=1, s=1)
    out = transform_piece(piece, TransformKind.ZERO_TO_INF, 5, w0).piece
    rep = verify_transform(piece, out, TransformKind.ZERO_TO_INF, 5, w0)
    names = {c.name for c in rep.identities}
    assert {"branch_valid", "b_dual_path", "output_alpha", "eigenvalue_shift",
            "a_expansion_is_power", "a0_block_form", "shift_system",
            "head_charpoly"} <= names


def test_verify_negative_control_corrupted_coefficient(rng):
    piece, w0 = rational_instance(rng, TransformKind.ZERO_TO_INF, r=2, s=3)
    out = transform_piece(piece, TransformKind.ZERO_TO_INF, 7, w0).piece
    terms = dict(out.factor.alpha.terms())
    # corrupt the output coefficient carrying b_1
    e = 1 - out.order
    terms[e] = terms.get(e, Q(0)) + 1
    bad = ConnectionPiece(
        ExponentialFactor(out.factor.point, out.factor.ram,
                          TruncSeries.from_terms(RATIONAL, terms, 0)),
        out.regular,
    )
    rep = verify_transform(piece, bad, TransformKind.ZERO_TO_INF, 7, w0)
    assert not rep.ok
    fail = rep.first_failure()
    assert fail.name == "output_alpha" and "index 1" in fail.detail


def test_verify_negative_control_corrupted_eigenvalue(rng):
    piece, w0 = rational_instance(rng, TransformKind.INF_TO_ZERO)
    out = transform_piece(piece, TransformKind.INF_TO_ZERO, piece.order + 3, w0).piece
    bad = ConnectionPiece(
        out.factor,
        RegularPart(tuple((c + Q(1, 3), size) for c, size in out.regular.blocks)),
    )
    rep = verify_transform(piece, bad, TransformKind.INF_TO_ZERO, piece.order + 3, w0)
    assert not rep.ok
    assert any(c.name == "eigenvalue_shift" and c.status == "fail" for c in rep.identities)


def test_c_family_identities():
    for r, s in [(1, 2), (1, 3), (2, 4), (2, 5), (1, 4)]:
        a = [Q(2)] + [Q(k - 1, 2) for k in range(s)]
        c_list, cp_list = c_families_inf_to_inf(RATIONAL, r, s, a, s + 1)
        for k in range(s):
            assert c_list[k] == cp_list[k]
        _, p_mat = corner_matrices_inf_to_inf(RATIONAL, r, s, a[0])
        defect = [
            [cp_list[s][i][j] - c_list[s][i][j] for j in range(s)] for i in range(s)
        ]
        expect = [
            [(Q(i + 1, s - r) if i == j else Q(0)) - p_mat[i][j] for j in range(s)]
            for i in range(s)
        ]
        assert defect == expect


def test_c_top_defect_fails_when_corrupted():
    r, s = 1, 3
    a = [Q(2), Q(1), Q(0), Q(0)]
    c_list, cp_list = c_families_inf_to_inf(RATIONAL, r, s, a, s + 1)
    _, p_mat = corner_matrices_inf_to_inf(RATIONAL, r, s, a[0])
    corrupted = [row[:] for row in c_list[s]]
    corrupted[0][0] += 1
    defect = [
        [cp_list[s][i][j] - corrupted[i][j] for j in range(s)] for i in range(s)
    ]
    expect = [
        [(Q(i + 1, s - r) if i == j else Q(0)) - p_mat[i][j] for j in range(s)]
        for i in range(s)
    ]
    assert defect != expect


def test_transfer_head_charpoly():
    for r, s in [(1, 2), (2, 5), (1, 4)]:
        a = [Q(3)] + [Q(1)] * s
        d = transfer_inf_to_inf(RATIONAL, r, s, a, s + 1)
        chi0 = charpoly_const(RATIONAL, d.coeff_matrix(0))
        expected = [Q(0)] * (s + 1)
        expected[r] = Q(1, 3)
        expected[s] = Q(1)
        assert chi0 == expected


def test_companion_inf_to_zero_charpoly():
    r, s = 4, 2
    a = [Q(-1), Q(2), Q(5)]
    comp, comp0 = companion_inf_to_zero(RATIONAL, r, s, a, s + 1)
    chi = charpoly_series(comp)
    # lambda^4 + a_0 lambda^2 + a_1 X lambda + a_2 X^2
    assert chi[2] == TruncSeries.constant(RATIONAL, Q(-1), s + 1)
    assert chi[1] == TruncSeries.monomial(RATIONAL, Q(2), 1, s + 1)
    assert chi[0] == TruncSeries.monomial(RATIONAL, Q(5), 2, s + 1)
    chi0 = charpoly_const(RATIONAL, comp0.coeff_matrix(0))
    assert chi0 == [Q(0), Q(0), Q(-1), Q(0), Q(1)]


def test_verify_reduction_path(rng):
    # ram < order < 2*ram goes through the composition reduction
    for r, s in [(3, 4), (3, 5)]:
        g = Q(rng.choice([1, 2]))
        a0 = -(g ** (s - r))
        terms = {-s: Q(r, s) * a0, -1: Q(1, 2)}
        piece = make_piece(RATIONAL, "infinity", r, terms, [(Q(1), 1)])
        out = transform_piece(piece, TransformKind.INF_TO_INF, s + 3, g).piece
        rep = verify_transform(piece, out, TransformKind.INF_TO_INF, s + 3, g)
        assert rep.ok, [(c.name, c.detail) for c in rep.identities if c.status == "fail"]
        names = {c.name: c.status for c in rep.identities}
        assert names.get("reduction_composition") == "pass"
        assert names.get("c_top_defect") == "skipped"


def test_shift_pairings_small():
    assert shift_pairing_zero_to_inf(1, 1, Q(1)).ok
    assert shift_pairing_zero_to_inf(2, 2, Q(3)).ok
    assert shift_pairing_zero_to_inf(3, 2, Q(5, 2)).ok
    assert shift_pairing_inf_to_inf(1, 2, Q(2)).ok
    assert shift_pairing_inf_to_inf(2, 5, Q(-7, 3)).ok
    with pytest.raises(ValidationError):
        shift_pairing_inf_to_inf(2, 3, Q(1))


def test_extension_backend_verify():
    # branch in a genuine extension: symbol constant 2 with a square-root radical
    ring = ExtensionRing(1, 2, 2)
    piece = make_piece(ring, "infinity", 1, {-3: ring.coerce(Q(-2, 3))}, [(ring.zero, 1)])
    out = transform_piece(piece, TransformKind.INF_TO_INF, 5, ring.radical)
    rep = verify_transform(piece, out.piece, TransformKind.INF_TO_INF, 5, ring.radical)
    assert rep.ok, [(c.name, c.detail) for c in rep.identities if c.status == "fail"]
