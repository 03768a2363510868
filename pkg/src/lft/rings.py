"""Exact coefficient backends.

Two backends are provided: the plain rationals, and a quotient ring
``Q(zeta_N)[x]/(x^m - a)`` presented by a primitive N-th root of unity and a
radical generator.  The quotient is a ring, not necessarily a field:
inverting a zero divisor raises :class:`BackendError` instead of attempting
any factorization.  All elements are kept in canonical dense form so that
equality is decidable by comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .errors import BackendError, ValidationError

Q = Fraction


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Integer polynomial division, den monic, coefficients low-to-high.
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for i in range(dn + 1):
                num[k - dn + i] -= c * den[i]
    if any(num[:dn]):
        raise ValueError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_poly(d))
    return tuple(poly)


def _int_nth_root(x: int, n: int) -> int:
    """Floor of the n-th root of x >= 0."""
    if x < 2:
        return x
    hi = 1
    while hi**n <= x:
        hi <<= 1
    lo = hi >> 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid**n <= x:
            lo = mid
        else:
            hi = mid
    return lo


def ring_pow(ring, el, k: int):
    """el**k in the given ring; negative k inverts first."""
    if k < 0:
        return ring_pow(ring, ring.inv(el), -k)
    out = ring.one
    base = el
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


class RationalRing:
    """The exact rationals, with Fraction as the element type."""

    kind = "rational"
    zero = Q(0)
    one = Q(1)

    def coerce(self, value):
        if isinstance(value, Q):
            return value
        if isinstance(value, int):
            return Q(value)
        if isinstance(value, str):
            try:
                return Q(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"bad rational literal {value!r}") from exc
        raise ValidationError(f"cannot coerce {value!r} into the rational backend")

    parse = coerce

    def is_zero(self, el) -> bool:
        return el == 0

    def is_unit(self, el) -> bool:
        return el != 0

    def inv(self, el):
        if el == 0:
            raise BackendError("division by zero in the rational backend")
        return 1 / el

    def nth_root(self, el, n: int):
        """Exact rational n-th root, or None.  Even roots return the positive one."""
        el = self.coerce(el)
        if n == 1:
            return el
        if el == 0:
            return self.zero
        if el < 0 and n % 2 == 0:
            return None
        p, q = abs(el.numerator), el.denominator
        rp, rq = _int_nth_root(p, n), _int_nth_root(q, n)
        if rp**n != p or rq**n != q:
            return None
        root = Q(rp, rq)
        return -root if el < 0 else root

    def root_of_unity(self, n: int):
        if n == 1:
            return self.one
        if n == 2:
            return -self.one
        return None

    def has_root_of_unity(self, n: int) -> bool:
        return n in (1, 2)

    def rational_part(self, el) -> Q:
        return el

    def sort_key(self, el):
        return (el < 0, abs(el))

    def format(self, el) -> str:
        return str(el)

    def describe(self) -> dict:
        return {"kind": "rational"}

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalRing)

    def __hash__(self) -> int:
        return hash("rational")

    def __repr__(self) -> str:
        return "RationalRing()"


RATIONAL = RationalRing()


class ExtElem:
    """Element of :class:`ExtensionRing`, dense over the basis zeta^i * x^j."""

    __slots__ = ("ring", "vec")

    def __init__(self, ring: "ExtensionRing", vec: tuple[tuple[Q, ...], ...]):
        self.ring = ring
        self.vec = vec

    def _lift(self, other):
        if isinstance(other, ExtElem):
            if other.ring != self.ring:
                raise ValidationError("mixing elements of different extension rings")
            return other
        if isinstance(other, (int, Q)):
            return self.ring.coerce(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ExtElem(
            self.ring,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.vec, other.vec)
            ),
        )

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.ring, tuple(tuple(-a for a in row) for row in self.vec))

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.ring._mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Q)):
            other = self.ring.coerce(other)
        if not isinstance(other, ExtElem) or other.ring != self.ring:
            return False
        return self.vec == other.vec

    def __repr__(self) -> str:
        return f"ExtElem({self.ring.format(self)})"


class ExtensionRing:
    """Q(zeta_N)[x]/(x^m - a) with zeta_N a primitive N-th root of unity."""

    kind = "extension"

    def __init__(self, cyclo_order: int, radical_degree: int, radical_base):
        if cyclo_order < 1 or radical_degree < 1:
            raise ValidationError("extension ring needs cyclo_order >= 1, radical_degree >= 1")
        base = Q(radical_base)
        if base == 0:
            raise ValidationError("radical base must be nonzero")
        self.cyclo_order = cyclo_order
        self.radical_degree = radical_degree
        self.radical_base = base
        poly = cyclotomic_poly(cyclo_order)
        self.zeta_degree = len(poly) - 1
        # zeta^k in the reduced basis: cover every residue mod N and the
        # overflow degrees produced by products
        table: list[tuple[Q, ...]] = []
        cur = [Q(1)] + [Q(0)] * (self.zeta_degree - 1)
        for _ in range(max(2 * self.zeta_degree - 1, cyclo_order)):
            table.append(tuple(cur))
            nxt = [Q(0)] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(self.zeta_degree):
                    nxt[i] -= top * poly[i]
            cur = nxt
        self._zeta_pows = table
        self.dim = self.zeta_degree * radical_degree
        self.zero = self._from_entries({})
        self.one = self._from_entries({(0, 0): Q(1)})
        self.zeta = self.zeta_power(1)
        self.radical = self._from_entries(
            {(0, 1 % radical_degree): Q(1)} if radical_degree > 1 else {}
        )
        if radical_degree == 1:
            # x == a in the quotient, no new generator
            self.radical = self.coerce(base)

    def _from_entries(self, entries: dict) -> ExtElem:
        vec = [[Q(0)] * self.radical_degree for _ in range(self.zeta_degree)]
        for (i, j), c in entries.items():
            vec[i][j] += c
        return ExtElem(self, tuple(tuple(row) for row in vec))

    def zeta_power(self, k: int) -> ExtElem:
        k %= self.cyclo_order
        row = self._zeta_pows[k]
        return self._from_entries({(i, 0): c for i, c in enumerate(row) if c})

    def coerce(self, value):
        if isinstance(value, ExtElem):
            if value.ring != self:
                raise ValidationError("element belongs to a different extension ring")
            return value
        if isinstance(value, (int, Q)):
            return self._from_entries({(0, 0): Q(value)})
        if isinstance(value, str):
            return self.parse(value)
        raise ValidationError(f"cannot coerce {value!r} into the extension backend")

    def _mul(self, e1: ExtElem, e2: ExtElem) -> ExtElem:
        zd, rd = self.zeta_degree, self.radical_degree
        acc = [[Q(0)] * (2 * rd - 1) for _ in range(2 * zd - 1)]
        for i1 in range(zd):
            row1 = e1.vec[i1]
            for j1 in range(rd):
                c1 = row1[j1]
                if not c1:
                    continue
                for i2 in range(zd):
                    row2 = e2.vec[i2]
                    arow = acc[i1 + i2]
                    for j2 in range(rd):
                        c2 = row2[j2]
                        if c2:
                            arow[j1 + j2] += c1 * c2
        # x^(m + t) == a * x^t
        for j in range(2 * rd - 2, rd - 1, -1):
            for i in range(2 * zd - 1):
                c = acc[i][j]
                if c:
                    acc[i][j - rd] += self.radical_base * c
        out = [[Q(0)] * rd for _ in range(zd)]
        for i in range(2 * zd - 1):
            if i < zd:
                for j in range(rd):
                    out[i][j] += acc[i][j]
            else:
                red = self._zeta_pows[i] if i < len(self._zeta_pows) else None
                if red is None:  # pragma: no cover - table always covers 2*zd-2
                    raise BackendError("zeta reduction table exhausted")
                for j in range(rd):
                    c = acc[i][j]
                    if c:
                        for i2, rc in enumerate(red):
                            if rc:
                                out[i2][j] += rc * c
        return ExtElem(self, tuple(tuple(row) for row in out))

    def is_zero(self, el) -> bool:
        return all(c == 0 for row in el.vec for c in row)

    def is_rational(self, el) -> bool:
        return all(
            c == 0 for i, row in enumerate(el.vec) for j, c in enumerate(row) if (i, j) != (0, 0)
        )

    def rational_part(self, el) -> Q:
        return el.vec[0][0]

    def _support(self, el):
        return [(i, j) for i, row in enumerate(el.vec) for j, c in enumerate(row) if c]

    def inv(self, el: ExtElem) -> ExtElem:
        support = self._support(el)
        if not support:
            raise BackendError("zero is not a unit")
        if len(support) == 1:
            i, j = support[0]
            c = el.vec[i][j]
            out = self.coerce(1 / c)
            if i:
                out = out * self.zeta_power(self.cyclo_order - i)
            if j:
                # x^(-1) == x^(m-1) / a
                xinv = ring_pow(self, self.radical, self.radical_degree - 1) * self.coerce(
                    1 / self.radical_base
                )
                out = out * ring_pow(self, xinv, j)
            return out
        # general case: solve (mult-by-el) v = 1 over Q
        basis = [
            self._from_entries({(i, j): Q(1)})
            for i in range(self.zeta_degree)
            for j in range(self.radical_degree)
        ]
        cols = [self._mul(el, b) for b in basis]
        n = self.dim
        mat = [[Q(0)] * (n + 1) for _ in range(n)]
        for col, prod in enumerate(cols):
            flat = [c for row in prod.vec for c in row]
            for rix in range(n):
                mat[rix][col] = flat[rix]
        mat[0][n] = Q(1)
        sol = _solve_rational(mat, n)
        if sol is None:
            raise BackendError("element is not a unit (zero divisor in the quotient ring)")
        out = self.zero
        for coef, b in zip(sol, basis):
            if coef:
                out = out + self.coerce(coef) * b
        return out

    def is_unit(self, el) -> bool:
        try:
            self.inv(el)
            return True
        except BackendError:
            return False

    def nth_root(self, el, n: int):
        el = self.coerce(el)
        if self.is_rational(el):
            r = RATIONAL.nth_root(self.rational_part(el), n)
            if r is not None:
                return self.coerce(r)
        if n == self.radical_degree and el == self.coerce(self.radical_base):
            return self.radical
        return None

    def root_of_unity(self, n: int):
        if n == 1:
            return self.one
        if self.cyclo_order % n == 0:
            return self.zeta_power(self.cyclo_order // n)
        if n == 2:
            return self.coerce(-1)
        return None

    def has_root_of_unity(self, n: int) -> bool:
        return n in (1, 2) or self.cyclo_order % n == 0

    def sort_key(self, el):
        return tuple((c < 0, abs(c)) for row in el.vec for c in row)

    def format(self, el) -> str:
        parts = []
        for i, row in enumerate(el.vec):
            for j, c in enumerate(row):
                if not c:
                    continue
                factors = []
                if i:
                    factors.append("zeta" if i == 1 else f"zeta^{i}")
                if j:
                    factors.append("x" if j == 1 else f"x^{j}")
                if not factors or abs(c) != 1:
                    factors.insert(0, str(abs(c)))
                body = "*".join(factors)
                if not parts:
                    parts.append(body if c > 0 else f"-{body}")
                else:
                    parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts) if parts else "0"

    _TERM_RE = re.compile(r"^(?:(\d+(?:/\d+)?)|zeta(?:\^(\d+))?|x(?:\^(\d+))?)$")

    def parse(self, text: str) -> ExtElem:
        s = text.replace(" ", "")
        if not s:
            raise ValidationError("empty coefficient literal")
        out = self.zero
        pos = 0
        sign = 1
        if s[0] in "+-":
            sign = -1 if s[0] == "-" else 1
            pos = 1
        while pos <= len(s):
            nxt = pos
            while nxt < len(s) and s[nxt] not in "+-":
                nxt += 1
            term = s[pos:nxt]
            if not term:
                raise ValidationError(f"bad coefficient literal {text!r}")
            coef = Q(sign)
            zpow = xpow = 0
            for factor in term.split("*"):
                m = self._TERM_RE.match(factor)
                if not m:
                    raise ValidationError(f"bad factor {factor!r} in {text!r}")
                if m.group(1) is not None:
                    coef *= Q(m.group(1))
                elif factor.startswith("zeta"):
                    zpow += int(m.group(2) or 1)
                else:
                    xpow += int(m.group(3) or 1)
            mono = self.coerce(coef) * self.zeta_power(zpow) * ring_pow(
                self, self.radical, xpow
            )
            out = out + mono
            if nxt == len(s):
                break
            sign = -1 if s[nxt] == "-" else 1
            pos = nxt + 1
        return out

    def describe(self) -> dict:
        return {
            "kind": "extension",
            "cyclotomic_order": self.cyclo_order,
            "radical_degree": self.radical_degree,
            "radical_base": str(self.radical_base),
        }

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtensionRing)
            and self.cyclo_order == other.cyclo_order
            and self.radical_degree == other.radical_degree
            and self.radical_base == other.radical_base
        )

    def __hash__(self) -> int:
        return hash(("extension", self.cyclo_order, self.radical_degree, self.radical_base))

    def __repr__(self) -> str:
        return (
            f"ExtensionRing(zeta_{self.cyclo_order}, x^{self.radical_degree}"
            f"={self.radical_base})"
        )


def _solve_rational(mat: list[list[Q]], n: int):
    """Solve the n x n rational system stored as rows [A | b]; None if singular."""
    rows = [row[:] for row in mat]
    col_of = {}
    r = 0
    for col in range(n):
        sel = None
        for k in range(r, n):
            if rows[k][col]:
                sel = k
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [c * inv for c in rows[r]]
        for k in range(n):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        col_of[col] = r
        r += 1
    if r < n:
        return None
    return [rows[col_of[col]][n] for col in range(n)]


def backend_from_doc(doc) -> RationalRing | ExtensionRing:
    """Build a backend from its JSON description."""
    if doc is None:
        return RATIONAL
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("backend description must be an object with a 'kind'")
    if doc["kind"] == "rational":
        if set(doc) - {"kind"}:
            raise ValidationError("unknown keys in rational backend description")
        return RATIONAL
    if doc["kind"] == "extension":
        keys = {"kind", "cyclotomic_order", "radical_degree", "radical_base"}
        if set(doc) != keys:
            raise ValidationError(f"extension backend needs exactly the keys {sorted(keys)}")
        try:
            return ExtensionRing(
                int(doc["cyclotomic_order"]),
                int(doc["radical_degree"]),
                Q(str(doc["radical_base"])),
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad extension backend: {exc}") from exc
    raise ValidationError(f"unknown backend kind {doc['kind']!r}")


def backend_from_spec(spec: str) -> RationalRing | ExtensionRing:
    """Parse a CLI backend spec: 'rational' or 'extension(N,m,a)'."""
    s = spec.strip()
    if s == "rational":
        return RATIONAL
    m = re.match(r"^extension\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(-?\d+(?:/\d+)?)\s*\)$", s)
    if m:
        return ExtensionRing(int(m.group(1)), int(m.group(2)), Q(m.group(3)))
    raise ValidationError(f"bad backend spec {spec!r}; expected 'rational' or 'extension(N,m,a)'")
