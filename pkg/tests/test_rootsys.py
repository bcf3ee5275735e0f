import pytest

from flagxi.rootsys import (
    build_root_datum,
    enumerate_weyl,
    invariant_degrees,
    minimal_coset_reps,
    poincare_polynomial,
    product_formula,
    reflect,
    weyl_group,
    weyl_order_formula,
)


def test_rank_one():
    A1 = build_root_datum("A", 1)
    assert A1.cartan == ((2,),)
    assert A1.positive_roots == ((1,),)


def test_g2_roots_and_bond():
    G2 = build_root_datum("G", 2)
    assert len(G2.positive_roots) == 6
    assert G2.cartan[0][1] * G2.cartan[1][0] == 3


def test_d4_sizes():
    D4 = build_root_datum("D", 4)
    assert len(D4.positive_roots) == 12
    assert weyl_group(D4).order() == 192 == weyl_order_formula("D", 4)


@pytest.mark.parametrize("t,n", [("A", 0), ("B", 1), ("D", 3), ("E", 9), ("Q", 2)])
def test_invalid_types_rejected(t, n):
    with pytest.raises(ValueError):
        build_root_datum(t, n)


def test_g2_reflections_on_x_basis():
    G2 = build_root_datum("G", 2)
    x1, x2 = (1, 0), (-1, 1)
    assert reflect(G2, 1, x1) == x2
    assert reflect(G2, 2, x2) == (x1[0] - x2[0], x1[1] - x2[1])


def test_reflection_fixes_other_fundamental_weights():
    E6 = build_root_datum("E", 6)
    for i in range(1, 7):
        for j in range(1, 7):
            w = tuple(int(k == j - 1) for k in range(6))
            if i != j:
                assert reflect(E6, i, w) == w
    with pytest.raises(IndexError):
        reflect(E6, 7, (0,) * 6)


def test_enumerate_small():
    assert [len(l) for l in enumerate_weyl(build_root_datum("A", 1), 1)] == [1, 1]
    assert sum(len(l) for l in enumerate_weyl(build_root_datum("G", 2), 6)) == 12


def test_e7_low_lengths_match_poincare_product():
    coeffs = product_formula(invariant_degrees("E", 7))
    levels = enumerate_weyl(build_root_datum("E", 7), 3)
    assert [len(l) for l in levels] == coeffs[:4] == [1, 7, 27, 77]


def test_coset_reps():
    G2 = build_root_datum("G", 2)
    reps = minimal_coset_reps(G2, 1)
    assert len(reps) == 6
    assert any(w.length == 0 for w in reps.reps)
    assert len(minimal_coset_reps(build_root_datum("E", 7), 7, max_length=27)) == 56


def test_poincare_polynomials():
    assert poincare_polynomial(build_root_datum("A", 1)) == [1, 1]
    assert poincare_polynomial(build_root_datum("A", 2)) == [1, 2, 2, 1]
    f4 = poincare_polynomial(build_root_datum("F", 4))
    assert f4 == f4[::-1] and sum(f4) == 1152


@pytest.mark.parametrize("t,n", [("B", 3), ("C", 3), ("D", 5), ("G", 2), ("E", 6)])
def test_enumeration_agrees_with_degrees(t, n):
    assert poincare_polynomial(build_root_datum(t, n)) == product_formula(invariant_degrees(t, n))
