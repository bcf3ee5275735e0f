from fractions import Fraction

import pytest

from flagxi.polyalg import LaurentPoly
from flagxi.rootsys import build_root_datum
from flagxi.springer import (
    DegenerateFormError,
    group_theta,
    theta_torus,
    trace_form,
    weight_system,
    weyl_dimension,
)


def test_a1_defining_rep():
    A1 = build_root_datum("A", 1)
    ws = weight_system(A1, (1,))
    assert sorted(ws.entries) == [((-1,), 1), ((1,), 1)]
    assert trace_form(ws) == [[Fraction(2)]]
    assert theta_torus(ws).to_text() == ["1/2*t1 - 1/2*t1^-1"]


def test_g2_seven_dim():
    ws = weight_system(build_root_datum("G", 2), (1, 0))
    assert ws.dimension == 7 and len(ws.entries) == 7
    assert ws.multiplicity((0, 0)) == 1


def test_g2_trace_form_even():
    B = trace_form(weight_system(build_root_datum("G", 2), (1, 0)))
    assert all(x.denominator == 1 and x % 2 == 0 for row in B for x in row)


def test_e7_minuscule():
    E7 = build_root_datum("E", 7)
    ws = weight_system(E7, (0, 0, 0, 0, 0, 0, 1))
    assert len(ws.entries) == 56 == weyl_dimension(E7, (0, 0, 0, 0, 0, 0, 1))
    assert all(m == 1 for _, m in ws.entries)


def test_trivial_rep_rejected():
    ws = weight_system(build_root_datum("A", 2), (0, 0))
    with pytest.raises(DegenerateFormError):
        theta_torus(ws)


def test_g2_second_coordinate():
    tm = group_theta("G2")
    v = ("t1", "t2")
    t1, t2 = LaurentPoly.gens(v)
    t1i, t2i = LaurentPoly(v, {(-1, 0): 1}), LaurentPoly(v, {(0, -1): 1})
    assert tm.coordinates[1] == (t1 - t1i - t2i + t2) * Fraction(1, 2)


@pytest.mark.parametrize("group", ["G2", "F4", "E6", "E7"])
def test_theta_vanishes_at_identity(group):
    tm = group_theta(group)
    for c in tm.coordinates:
        assert sum(c.terms.values()) == 0


@pytest.mark.parametrize("t,n,lam", [("B", 3, (0, 0, 1)), ("F", 4, (0, 0, 0, 1)), ("E", 6, (1, 0, 0, 0, 0, 0))])
def test_freudenthal_matches_weyl_dimension(t, n, lam):
    d = build_root_datum(t, n)
    assert weight_system(d, lam).dimension == weyl_dimension(d, lam)
