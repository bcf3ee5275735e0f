from fractions import Fraction

import pytest

from flagxi.polyalg import (
    LaurentPoly,
    Poly,
    VariableSpaceError,
    complete_symmetric,
    elementary_symmetric,
    parse_poly,
    substitute,
)

XY = ("x1", "x2")


def test_product_of_variables():
    x1, x2 = Poly.gens(XY)
    assert x1 * x2 == Poly(XY, {(1, 1): 1})


def test_difference_of_squares_laurent():
    t = LaurentPoly.var(("t1",), 0)
    ti = LaurentPoly(("t1",), {(-1,): 1})
    assert (t - ti) * (t + ti) == t * t - ti * ti
    assert ((t - ti) * (t + ti)).to_text() == "t1^2 - t1^-2"


def test_newton_identity():
    a, b = Poly.gens(("a", "b"))
    e1 = elementary_symmetric(1, [a, b])
    e2 = elementary_symmetric(2, [a, b])
    assert e1 * e1 - 2 * e2 == a ** 2 + b ** 2


def test_elementary_symmetric_values():
    a, b, c = Poly.gens(("a", "b", "c"))
    assert elementary_symmetric(0, [a, b, c]) == 1
    assert elementary_symmetric(2, [a, b, c]) == a * b + a * c + b * c
    with pytest.raises(ValueError):
        elementary_symmetric(4, [a, b, c])


def test_top_elementary_of_squares_is_square_of_product():
    hs = Poly.gens(("h1", "h2", "h3"))
    assert elementary_symmetric(3, [h * h for h in hs]) == (hs[0] * hs[1] * hs[2]) ** 2


def test_complete_symmetric_small():
    a, b = Poly.gens(("a", "b"))
    assert complete_symmetric(2, [a, b]) == a * a + a * b + b * b
    assert complete_symmetric(0, [a, b]) == 1


def test_linear_substitution():
    x1, x2 = Poly.gens(XY)
    om = ("w1", "w2")
    w1, w2 = Poly.gens(om)
    out = substitute(x2 - Fraction(1, 2) * x1, {"x1": w1, "x2": w2 - w1})
    assert out == w2 - Fraction(3, 2) * w1


def test_identity_substitution():
    x1, x2 = Poly.gens(XY)
    p = x1 ** 3 - 2 * x1 * x2 + 7
    assert substitute(p, {"x1": x1, "x2": x2}) == p


def test_cayley_substitution_into_laurent():
    tb = Poly.var(("tb1",), 0)
    t = LaurentPoly.var(("t1",), 0)
    ti = LaurentPoly(("t1",), {(-1,): 1})
    out = substitute(elementary_symmetric(1, [tb]), {"tb1": (t - ti) * Fraction(1, 2)})
    assert out.to_text() == "1/2*t1 - 1/2*t1^-1"


def test_mixed_spaces_rejected():
    with pytest.raises(VariableSpaceError):
        Poly.var(("a",), 0) + Poly.var(("b",), 0)


def test_negative_exponent_needs_laurent():
    with pytest.raises(ValueError):
        Poly(("t",), {(-1,): 1})


def test_text_round_trip():
    vars_ = ("t1", "t2")
    p = LaurentPoly(vars_, {(1, 0): Fraction(1, 3), (-1, 1): Fraction(-1, 6), (0, -1): 2})
    assert parse_poly(p.to_text(), vars_, laurent=True) == p
    assert parse_poly("0", vars_) == Poly.zero(vars_)
