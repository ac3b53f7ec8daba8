"""Exact scalar arithmetic: rationals, Laurent polynomials in q, and
truncated power series used for fake-bubble inversion.

Everything is built on arbitrary-precision integers; no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

# The ground field is Q; python's Fraction already satisfies the reduced-form
# and positive-denominator invariants, so it serves as the Rational type.
Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class LaurentQ:
    """Laurent polynomial in q with rational coefficients.

    Stored as a map exponent -> nonzero Fraction.  Immutable by convention.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[int(e)] = v
        self.c = c

    @staticmethod
    def from_int(k) -> "LaurentQ":
        return LaurentQ({0: Fraction(k)})

    @staticmethod
    def q_power(e: int, coeff=1) -> "LaurentQ":
        return LaurentQ({e: Fraction(coeff)})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentQ.from_int(other)
        return isinstance(other, LaurentQ) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentQ.from_int(other)
        c = dict(self.c)
        for e, v in other.c.items():
            w = c.get(e, ZERO) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        out = LaurentQ()
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentQ()
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentQ.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return LaurentQ.from_int(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            v = Fraction(other)
            out = LaurentQ()
            if v:
                out.c = {e: w * v for e, w in self.c.items()}
            return out
        c = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                w = c.get(e, ZERO) + v1 * v2
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
        out = LaurentQ()
        out.c = c
        return out

    __rmul__ = __mul__

    def coeff(self, e: int) -> Fraction:
        return self.c.get(e, ZERO)

    def bar(self) -> "LaurentQ":
        """The involution q -> q^{-1}."""
        out = LaurentQ()
        out.c = {-e: v for e, v in self.c.items()}
        return out

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                parts.append(f"{v}")
            elif e == 1:
                parts.append(f"{v}*q" if v != 1 else "q")
            else:
                parts.append(f"{v}*q^{e}" if v != 1 else f"q^{e}")
        return " + ".join(parts)


def quantum_integer(m: int) -> LaurentQ:
    """[m] = (q^m - q^{-m})/(q - q^{-1}) as a Laurent polynomial."""
    if m == 0:
        return LaurentQ()
    if m < 0:
        return -quantum_integer(-m)
    return LaurentQ({m - 1 - 2 * k: 1 for k in range(m)})


class SeriesQ:
    """Power series truncated at a fixed degree; coefficient list of
    Fractions indexed by degree 0..D."""

    __slots__ = ("a",)

    def __init__(self, coeffs, degree=None):
        a = [Fraction(x) for x in coeffs]
        if degree is not None:
            if len(a) < degree + 1:
                a += [ZERO] * (degree + 1 - len(a))
            else:
                a = a[: degree + 1]
        self.a = a

    @property
    def degree(self):
        return len(self.a) - 1

    def __eq__(self, other):
        return isinstance(other, SeriesQ) and self.a == other.a

    def __repr__(self):
        return "SeriesQ(%s)" % (self.a,)

    def mul(self, other: "SeriesQ", degree=None) -> "SeriesQ":
        if degree is None:
            degree = min(self.degree, other.degree)
        out = [ZERO] * (degree + 1)
        for i, x in enumerate(self.a):
            if i > degree or not x:
                continue
            for j, y in enumerate(other.a):
                if i + j > degree:
                    break
                out[i + j] += x * y
        return SeriesQ(out)


def series_invert_negated(s: SeriesQ) -> SeriesQ:
    """The unique series u with s*u = -1 up to the truncation degree.

    Raises ZeroDivisionError when the constant term of s vanishes.
    """
    if not s.a or s.a[0] == 0:
        raise ZeroDivisionError("series has no invertible constant term")
    d = s.degree
    u = [ZERO] * (d + 1)
    u[0] = Fraction(-1) / s.a[0]
    for k in range(1, d + 1):
        acc = ZERO
        for j in range(1, k + 1):
            if j <= d:
                acc += s.a[j] * u[k - j]
        u[k] = -acc / s.a[0]
    return SeriesQ(u)
