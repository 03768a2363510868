"""Truncated Laurent/Puiseux series with strict precision windows.

A series is a window of exact coefficients: exponents are integers in units
of ``1/denom``, the window covers ``[low, prec)`` and the series is known
modulo ``X**(prec/denom)``.  Requesting a coefficient at or beyond ``prec``
raises :class:`PrecisionError` instead of silently returning zero; every
operation computes the largest window its output is actually correct on.
Values are immutable and all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .errors import BackendError, BranchError, PrecisionError, ValidationError
from .rings import ring_pow

Q = Fraction


class TruncSeries:
    __slots__ = ("ring", "denom", "low", "coeffs", "prec")

    def __init__(self, ring, denom: int, low: int, coeffs, prec: int):
        if denom < 1:
            raise ValidationError("denominator must be a positive integer")
        coeffs = tuple(coeffs)
        if low + len(coeffs) != prec:
            raise ValidationError("window mismatch: low + len(coeffs) must equal prec")
        while coeffs and ring.is_zero(coeffs[0]):
            coeffs = coeffs[1:]
            low += 1
        if not coeffs:
            low = prec
        self.ring = ring
        self.denom = denom
        self.low = low
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring, prec: int, denom: int = 1) -> "TruncSeries":
        return cls(ring, denom, prec, (), prec)

    @classmethod
    def monomial(cls, ring, coeff, exp: int, prec: int, denom: int = 1) -> "TruncSeries":
        if exp >= prec:
            raise PrecisionError("monomial exponent at or beyond the requested window")
        pad = [ring.zero] * (prec - exp - 1)
        return cls(ring, denom, exp, [ring.coerce(coeff)] + pad, prec)

    @classmethod
    def constant(cls, ring, value, prec: int, denom: int = 1) -> "TruncSeries":
        return cls.monomial(ring, value, 0, prec, denom)

    @classmethod
    def from_terms(cls, ring, terms: dict, prec: int, denom: int = 1) -> "TruncSeries":
        if not terms:
            return cls.zero(ring, prec, denom)
        low = min(terms)
        if max(terms) >= prec:
            raise PrecisionError("term exponent at or beyond the requested window")
        coeffs = [ring.zero] * (prec - low)
        for e, c in terms.items():
            coeffs[e - low] = ring.coerce(c)
        return cls(ring, denom, low, coeffs, prec)

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> Q | None:
        return None if self.is_zero else Q(self.low, self.denom)

    def coeff(self, exp: int):
        """Coefficient at integer exponent ``exp`` (units of 1/denom)."""
        if exp >= self.prec:
            raise PrecisionError(
                f"coefficient at exponent {exp}/{self.denom} is beyond the window "
                f"(prec {self.prec}/{self.denom})"
            )
        if exp < self.low:
            return self.ring.zero
        return self.coeffs[exp - self.low]

    def terms(self) -> Iterator[tuple[int, object]]:
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                yield self.low + i, c

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.denom == other.denom
            and self.low == other.low
            and self.prec == other.prec
            and len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __repr__(self) -> str:
        var = "X" if self.denom == 1 else f"X^(1/{self.denom})"
        body = " + ".join(
            f"({self.ring.format(c)})*{var}^{e}" for e, c in self.terms()
        )
        return f"<{body or '0'} + O({var}^{self.prec})>"

    # -- window management -------------------------------------------------

    def truncate(self, new_prec: int) -> "TruncSeries":
        if new_prec > self.prec:
            raise PrecisionError("cannot truncate to a larger window")
        if new_prec <= self.low:
            return TruncSeries.zero(self.ring, new_prec, self.denom)
        return TruncSeries(
            self.ring, self.denom, self.low, self.coeffs[: new_prec - self.low], new_prec
        )

    def extend_exact(self, new_prec: int) -> "TruncSeries":
        """Widen the window with zeros.  Only valid when the series is exact
        polynomial data (all omitted coefficients genuinely vanish)."""
        if new_prec <= self.prec:
            return self.truncate(new_prec)
        pad = [self.ring.zero] * (new_prec - self.prec)
        low = self.low if self.coeffs else new_prec
        coeffs = self.coeffs + tuple(pad) if self.coeffs else ()
        return TruncSeries(self.ring, self.denom, low, coeffs, new_prec)

    def rescale_denom(self, new_denom: int) -> "TruncSeries":
        """Losslessly re-express with a denominator that is a multiple of ours."""
        if new_denom % self.denom:
            raise ValidationError("new denominator must be a multiple of the old one")
        k = new_denom // self.denom
        if k == 1:
            return self
        coeffs = [self.ring.zero] * (len(self.coeffs) * k)
        for i, c in enumerate(self.coeffs):
            coeffs[i * k] = c
        return TruncSeries(self.ring, new_denom, self.low * k, coeffs, self.prec * k)

    # -- arithmetic --------------------------------------------------------

    def _check_compat(self, other: "TruncSeries"):
        if self.ring != other.ring:
            raise ValidationError("series over different coefficient rings")
        if self.denom != other.denom:
            raise ValidationError(
                f"denominator mismatch ({self.denom} vs {other.denom}); rescale first"
            )

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check_compat(other)
        prec = min(self.prec, other.prec)
        low = min(self.low, other.low, prec)
        coeffs = [self.ring.zero] * (prec - low)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                e = src.low + i
                if e < prec:
                    coeffs[e - low] = coeffs[e - low] + c
        return TruncSeries(self.ring, self.denom, low, coeffs, prec)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(
            self.ring, self.denom, self.low, [-c for c in self.coeffs], self.prec
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check_compat(other)
        prec = min(self.prec + other.low, other.prec + self.low)
        if self.is_zero or other.is_zero:
            return TruncSeries.zero(self.ring, prec, self.denom)
        low = self.low + other.low
        coeffs = [self.ring.zero] * (prec - low)
        for i, a in enumerate(self.coeffs):
            if self.ring.is_zero(a):
                continue
            ea = self.low + i
            for j, b in enumerate(other.coeffs):
                e = ea + other.low + j
                if e >= prec:
                    break
                coeffs[e - low] = coeffs[e - low] + a * b
        return TruncSeries(self.ring, self.denom, low, coeffs, prec)

    def scale(self, c) -> "TruncSeries":
        c = self.ring.coerce(c) if isinstance(c, (int, Q, str)) else c
        return TruncSeries(
            self.ring, self.denom, self.low, [a * c for a in self.coeffs], self.prec
        )

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by X^(k/denom): exact exponent shift."""
        return TruncSeries(
            self.ring, self.denom, self.low + k, self.coeffs, self.prec + k
        )

    def add_const(self, c) -> "TruncSeries":
        """Add an exactly-known constant without losing precision."""
        if 0 >= self.prec:
            raise PrecisionError("window too small to hold a constant term")
        low = min(self.low, 0)
        coeffs = [self.ring.zero] * (self.prec - low)
        for i, a in enumerate(self.coeffs):
            coeffs[self.low + i - low] = a
        coeffs[-low] = coeffs[-low] + self.ring.coerce(c)
        return TruncSeries(self.ring, self.denom, low, coeffs, self.prec)

    def differentiate(self) -> "TruncSeries":
        """d/dX: maps c*X^(e/n) to c*(e/n)*X^(e/n - 1); precision drops by one."""
        coeffs = [c * Q(self.low + i, self.denom) for i, c in enumerate(self.coeffs)]
        return TruncSeries(
            self.ring, self.denom, self.low - self.denom, coeffs, self.prec - self.denom
        )

    def invert_unit(self) -> "TruncSeries":
        """Multiplicative inverse of a series whose leading coefficient is a unit."""
        if self.is_zero:
            raise BackendError("cannot invert the zero series")
        lead_inv = self.ring.inv(self.coeffs[0])
        m = len(self.coeffs)
        out = [lead_inv]
        for k in range(1, m):
            acc = self.ring.zero
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(lead_inv * acc))
        return TruncSeries(self.ring, self.denom, -self.low, out, -self.low + m)

    def pow(self, e: int) -> "TruncSeries":
        if e < 0:
            return self.invert_unit().pow(-e)
        if e == 0:
            m = len(self.coeffs) if self.coeffs else max(self.prec - self.low, 1)
            return TruncSeries.constant(self.ring, self.ring.one, m, self.denom)
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """Substitute ``inner`` (of positive order) for this series' variable."""
        if self.denom != 1:
            raise ValidationError("outer series of a composition must have denom 1")
        if self.ring != inner.ring:
            raise ValidationError("series over different coefficient rings")
        if inner.is_zero or inner.low < inner.denom:
            raise ValidationError("inner series must have order >= 1")
        m = inner.prec - inner.low
        out_prec = min(self.low * inner.low + m, self.prec * inner.low)
        if self.is_zero:
            return TruncSeries.zero(self.ring, out_prec, inner.denom)
        acc = None

        def accumulate(term):
            nonlocal acc
            acc = term if acc is None else acc + term

        c0 = self.coeff(0) if self.low <= 0 < self.prec else self.ring.zero
        if not self.ring.is_zero(c0) and out_prec > 0:
            accumulate(TruncSeries.constant(self.ring, c0, out_prec, inner.denom))
        start = max(self.low, 1)
        if self.prec > start:
            gp = inner.pow(start)
            for e in range(start, self.prec):
                if e > start:
                    gp = gp * inner
                if e * inner.low >= out_prec:
                    break
                c = self.coeff(e)
                if not self.ring.is_zero(c):
                    accumulate(gp.scale(c))
        top_neg = min(-1, self.prec - 1)
        if self.low <= top_neg:
            ginv = inner.invert_unit()
            gp = ginv.pow(-top_neg)
            for e in range(top_neg, self.low - 1, -1):
                if e < top_neg:
                    gp = gp * ginv
                c = self.coeff(e)
                if not self.ring.is_zero(c):
                    accumulate(gp.scale(c))
        if acc is None:
            return TruncSeries.zero(self.ring, out_prec, inner.denom)
        if acc.prec < out_prec:  # pragma: no cover - windows are computed to fit
            raise PrecisionError("composition lost precision unexpectedly")
        return acc.truncate(out_prec)


def solve_branch(u: TruncSeries, n: int, w0) -> TruncSeries:
    """Solve w(Y)**n = u(Y*w(Y)) degree by degree for the unit series w.

    ``u`` must be a unit series of order 0 with denom 1 and ``w0`` a chosen
    n-th root of u(0); the solution with w(0) = w0 is unique and its i-th
    coefficient depends only on the coefficients u_0..u_i.  Each degree costs
    a single division by n*w0**(n-1).
    """
    ring = u.ring
    if n < 1:
        raise ValidationError("root index must be a positive integer")
    if u.denom != 1 or u.is_zero or u.low != 0:
        raise ValidationError("u must be a unit series of order 0 with denom 1")
    w0 = ring.coerce(w0) if isinstance(w0, (int, Q, str)) else w0
    if ring_pow(ring, w0, n) != u.coeff(0):
        raise BranchError("w0**n does not equal u(0); invalid branch")
    lead_inv = ring.inv(n * ring_pow(ring, w0, n - 1))
    coeffs = [w0]
    for j in range(1, u.prec):
        partial = TruncSeries(ring, 1, 0, coeffs + [ring.zero], j + 1)
        resid = partial.pow(n) - u.truncate(j + 1).compose(partial.shift(1))
        coeffs.append(-(resid.coeff(j) * lead_inv))
    w = TruncSeries(ring, 1, 0, coeffs, u.prec)
    check = w.pow(n) - u.compose(w.shift(1))
    if not check.is_zero:  # pragma: no cover - defining property
        raise BranchError("branch solution failed its residual check")
    return w
