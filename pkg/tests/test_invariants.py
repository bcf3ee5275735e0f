from fractions import Fraction

import pytest

from flagxi.invariants import (
    UnknownCaseError,
    case_generators,
    check_invariance,
    dn_levi_generators,
    e6_psi,
    library_dimension,
    load_cases,
    reynolds_dimension,
    signed_permutation_check,
)
from flagxi.polyalg import Poly, elementary_symmetric
from flagxi.rootsys import build_root_datum

G2 = build_root_datum("G", 2)
OM2 = ("w1", "w2")


def test_g2_families():
    fam1 = dict(case_generators("G2", 1).generators)
    w1, w2 = Poly.gens(OM2)
    assert fam1["Theta_1"] == w1
    assert fam1["(Theta_2-3/2*Theta_1)^2"] == (w2 - Fraction(3, 2) * w1) ** 2
    fam2 = case_generators("G2", 2)
    assert len(fam2.generators) == 2


def test_e7_family_shape():
    labels = [l for l, _ in case_generators("E7", 7).generators]
    assert len(labels) == 7 and labels[-1] == "omega_7"
    for m in (2, 5, 6, 8, 9, 12):
        assert any(f"psi_{m}" in l or f"psi_{{{m}}}" in l for l in labels)


def test_unknown_case():
    with pytest.raises(UnknownCaseError):
        case_generators("E8", 1)


def test_g2_invariance_pass_and_fail():
    w1, w2 = Poly.gens(OM2)
    x1, x2 = w1, w2 - w1
    assert check_invariance(G2, 1, (x2 - x1 * Fraction(1, 2)) ** 2).ok
    res = check_invariance(G2, 1, x2)
    assert not res.ok and res.witness == 2


def test_f4_family_invariant():
    fam = case_generators("F4", 1)
    for label, p in fam.generators:
        assert check_invariance(fam.datum, 1, p).ok, label


def test_psi_invariance():
    E7 = build_root_datum("E", 7)
    for m in (2, 5):
        assert check_invariance(E7, 7, e6_psi(m)).ok
    with pytest.raises(ValueError):
        e6_psi(3)


def test_dn_levi_generators():
    g = dn_levi_generators(4, 2)
    so = dict(g.so_generators)
    t3, t4 = g.tbar[2], g.tbar[3]
    assert set(so) == {"e_1(tbar^2_3..4)", "e_2(tbar^2_3..4)", "tbar_3..tbar_4"}
    assert so["e_2(tbar^2_3..4)"] == (t3 * t4) ** 2 == elementary_symmetric(2, [t3 * t3, t4 * t4])
    D4 = build_root_datum("D", 4)
    for label, p in g.all_generators():
        assert check_invariance(D4, g.parabolic_node, p).ok, label


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (5, 3)])
def test_signed_permutations_agree_with_reflections(n, k):
    g = dn_levi_generators(n, k)
    for label, p in g.all_generators():
        assert signed_permutation_check(n, k, p), label
    # a lone tbar_n is moved by the even sign changes
    assert not signed_permutation_check(n, k, g.tbar[-1])


@pytest.mark.parametrize("group,r,top", [("G2", 1, 4), ("G2", 2, 4), ("F4", 4, 4)])
def test_generators_span_invariants(group, r, top):
    fam = case_generators(group, r)
    for d in range(1, top + 1):
        assert library_dimension(fam, d) == reynolds_dimension(fam.datum, r, d)


def test_every_tabulated_generator_invariant():
    for key in load_cases():
        g, r = key.split("/")
        fam = case_generators(g, int(r))
        for label, p in fam.generators:
            assert check_invariance(fam.datum, fam.r, p).ok, (key, label)
