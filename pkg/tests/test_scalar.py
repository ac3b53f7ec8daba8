from fractions import Fraction

from hypothesis import given, strategies as st

from kmeval.scalar import LaurentQ, SeriesQ, quantum_integer, series_invert_negated


def test_quantum_integer_small():
    assert quantum_integer(0) == LaurentQ()
    assert quantum_integer(1) == LaurentQ({0: 1})
    assert quantum_integer(2) == LaurentQ({1: 1, -1: 1})
    # expand (q^{-3} - q^{3})/(q - q^{-1}) by polynomial division
    assert quantum_integer(-3) == LaurentQ({2: -1, 0: -1, -2: -1})


def test_quantum_integer_antisymmetry():
    for m in range(-6, 7):
        assert quantum_integer(m) == -quantum_integer(-m)


def test_quantum_integer_defining_fraction():
    # [m] * (q - q^{-1}) == q^m - q^{-m}
    d = LaurentQ({1: 1, -1: -1})
    for m in range(-5, 6):
        lhs = quantum_integer(m) * d
        rhs = LaurentQ({m: 1}) - LaurentQ({-m: 1})
        assert lhs == rhs


def test_laurent_ring_ops():
    a = LaurentQ({2: Fraction(1, 2), 0: 3})
    b = LaurentQ({-1: 2})
    assert a * b == LaurentQ({1: 1, -1: 6})
    assert a + (-a) == LaurentQ()
    assert (a - b) + b == a
    assert a.bar().bar() == a


def test_series_invert_constants():
    s = SeriesQ([-1], degree=5)
    assert series_invert_negated(s) == SeriesQ([1], degree=5)


def test_series_invert_linear():
    # s = 1 + c t inverts (negated) to -1 + c t - c^2 t^2 + ...
    c = Fraction(3, 2)
    s = SeriesQ([1, c], degree=4)
    u = series_invert_negated(s)
    assert u.a == [Fraction(-1), c, -c * c, c ** 3, -c ** 4]


def test_series_invert_defining_property():
    s = SeriesQ([2, 1, Fraction(-1, 3), 0, 5], degree=6)
    u = series_invert_negated(s)
    prod = s.mul(u)
    assert prod.a[0] == -1
    assert all(x == 0 for x in prod.a[1:])


@given(st.lists(st.fractions(max_denominator=20), min_size=1, max_size=6))
def test_series_invert_involution(coeffs):
    if coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    s = SeriesQ(coeffs, degree=6)
    assert series_invert_negated(series_invert_negated(s)) == s


@given(st.lists(st.tuples(st.integers(-4, 4), st.fractions(max_denominator=9)),
                max_size=5),
       st.lists(st.tuples(st.integers(-4, 4), st.fractions(max_denominator=9)),
                max_size=5))
def test_laurent_commutativity(xs, ys):
    a = LaurentQ(dict(xs))
    b = LaurentQ(dict(ys))
    assert a * b == b * a
    assert a + b == b + a
