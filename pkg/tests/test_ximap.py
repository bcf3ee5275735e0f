import shutil
from fractions import Fraction
from pathlib import Path

import pytest

import flagxi
from flagxi.polyalg import Poly
from flagxi.rootsys import build_root_datum
from flagxi.schubert import class_from_words
from flagxi.ximap import (
    CorpusChecksumError,
    chern_quotient_D,
    functoriality_check,
    homomorphism_check,
    load_paper_tables,
    paper_tables_checksum_ok,
    report_parabolic,
    report_section,
    theta_report,
    verify_theorem_xi_D,
    xi_image,
)

DATA = Path(flagxi.__file__).parent / "data"


def cls(group, r, *terms):
    t, n = group[0], int(group[1:])
    return class_from_words(build_root_datum(t, n), terms, r)


def test_g2_p2_rows():
    assert xi_image("G2", 2, "Theta_1*Theta_2-Theta_1^2") == cls("G2", 2, ((1, 2), 1))
    rep = report_section("G2")
    assert len(rep.rows) == 4


def test_f4_and_e6_single_rows():
    assert xi_image("F4", 4, "y_4") == cls("F4", 4, ((4,), 1))
    assert xi_image("E6", 2, "e_1(y_1,y_2,y_3,y_4,y_5,y_6)") == cls("E6", 2, ((2,), 3))
    assert xi_image("F4", 1, "e_1(y_1^2,y_2^2,y_3^2)") == cls("F4", 1, ((2, 1), -1))


def test_f4_p1_second_row_matches_print():
    row = next(r for r in report_parabolic("F4", 1).rows if r.generator.startswith("e_2"))
    assert row.status == "match"
    assert row.image == cls("F4", 1, ((2, 3, 2, 1), -10), ((4, 3, 2, 1), 28))


def test_g2_p1_square_flagged_against_print():
    row = next(r for r in report_parabolic("G2", 1).rows if "^2" in r.generator)
    assert row.status == "mismatch(paper)"
    assert row.image == row.cross_image == cls("G2", 1, ((2, 1), Fraction(-3, 4)))
    assert row.paper == [{"coeff": "3/4", "word": [2, 1]}]


def test_f4_p2_cubic_flagged_against_print():
    row = next(r for r in report_parabolic("F4", 2).rows if r.generator == "e_3(y_3,y_4,y_5)")
    assert row.status == "mismatch(paper)"
    assert row.image == row.cross_image
    assert xi_image("F4", 2, row.generator, engine="bgg") == row.image


def test_ceiling_skips_rows():
    rows = report_parabolic("E7", 7, 6).rows
    skipped = [r.generator for r in rows if r.status == "skipped"]
    assert len(skipped) == 3 and all("psi" in g for g in skipped)


def test_row_json_shape():
    d = report_parabolic("G2", 2).rows[0].to_dict()
    assert {"parabolic", "generator", "status"} <= set(d)


def test_theta_tables_small_groups_match():
    for g in ("G2", "F4"):
        assert theta_report(g).ok


def test_checksum_ok_and_corruption(tmp_path):
    assert paper_tables_checksum_ok()
    bad = tmp_path / "data"
    shutil.copytree(DATA, bad)
    p = bad / "paper_tables.json"
    p.write_text(p.read_text().replace('"coeff": "28"', '"coeff": "29"', 1))
    assert not paper_tables_checksum_ok(str(bad))
    with pytest.raises(CorpusChecksumError):
        load_paper_tables(str(bad))


def test_chern_classes_og42():
    c = chern_quotient_D(4, 2)
    assert c[0] == cls("D4", 2, ((), 1))
    assert c[1] == cls("D4", 2, ((2,), 1))
    assert not c[-1].support


@pytest.mark.parametrize("n,k", [(4, 2), (5, 3)])
def test_type_d_identity(n, k):
    assert all(verify_theorem_xi_D(n, k, i) for i in range(k + 1))


def test_functoriality():
    assert functoriality_check("G2", [1], [1]).ok
    w = Poly.gens(("w1", "w2"))
    assert functoriality_check("G2", None, [1], [("x_1", w[0])]).ok
    assert functoriality_check("F4", None, [4]).ok


def test_ring_law_g2():
    res = homomorphism_check("G2", 10)
    assert res.ok and len(res.pairs) == 10


@pytest.mark.slow
def test_e7_p7_full_section_matches():
    rep = report_parabolic("E7", 7, None, workers=4)
    assert all(r.status == "match" for r in rep.rows)
