"""Exact linear algebra over a coefficient backend.

Matrices are plain lists of lists of ring elements.  Elimination only ever
divides by unit pivots; a column whose nonzero entries are all non-units
raises BackendError rather than guessing.
"""

from __future__ import annotations

from .errors import BackendError


def mat_identity(ring, n):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def mat_mul(ring, a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = [[ring.zero] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            c = a[i][k]
            if ring.is_zero(c):
                continue
            row_b = b[k]
            row_o = out[i]
            for j in range(p):
                if not ring.is_zero(row_b[j]):
                    row_o[j] = row_o[j] + c * row_b[j]
    return out


def mat_vec(ring, a, v):
    out = []
    for row in a:
        acc = ring.zero
        for c, x in zip(row, v):
            if not (ring.is_zero(c) or ring.is_zero(x)):
                acc = acc + c * x
        out.append(acc)
    return out


def mat_sub(ring, a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(ring, a, c):
    return [[x * c for x in row] for row in a]


def _eliminate(ring, rows, ncols):
    """Row-reduce in place over the ring; returns pivot (row, col) pairs."""
    pivots = []
    r = 0
    for col in range(ncols):
        sel = None
        for k in range(r, len(rows)):
            if not ring.is_zero(rows[k][col]) and ring.is_unit(rows[k][col]):
                sel = k
                break
        if sel is None:
            if any(not ring.is_zero(rows[k][col]) for k in range(r, len(rows))):
                raise BackendError("exact elimination stuck on a non-unit pivot")
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = ring.inv(rows[r][col])
        rows[r] = [c * inv for c in rows[r]]
        for k in range(len(rows)):
            if k != r and not ring.is_zero(rows[k][col]):
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append((r, col))
        r += 1
    return pivots


def solve_linear(ring, mat, rhs):
    """One exact solution of mat x = rhs (free variables set to zero), or None."""
    n = len(mat)
    ncols = len(mat[0])
    rows = [list(row) + [b] for row, b in zip(mat, rhs)]
    pivots = _eliminate(ring, rows, ncols)
    rank = len(pivots)
    for k in range(rank, n):
        if not ring.is_zero(rows[k][ncols]):
            return None
    x = [ring.zero] * ncols
    for r, col in pivots:
        x[col] = rows[r][ncols]
    return x


def kernel_dim_and_vector(ring, mat):
    """(nullity, one normalized kernel vector or None) for a square matrix.

    The vector is scaled so its first nonzero coordinate is one.
    """
    n = len(mat)
    rows = [list(row) for row in mat]
    pivots = _eliminate(ring, rows, n)
    pivot_cols = {col for _, col in pivots}
    free = [c for c in range(n) if c not in pivot_cols]
    if not free:
        return 0, None
    col = free[0]
    vec = [ring.zero] * n
    vec[col] = ring.one
    for r, pc in pivots:
        vec[pc] = -rows[r][col]
    lead = next(i for i, c in enumerate(vec) if not ring.is_zero(c))
    inv = ring.inv(vec[lead])
    return len(free), [c * inv for c in vec]
