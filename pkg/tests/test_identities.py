import pytest

from heckegrid.basis import BasisError, TableCache, build_f_basis
from heckegrid.identities import (GridWindow, IdentityError, build_F, genfun_prec1, genfun_sides,
                                  verify_duality, verify_genfun, verify_genj_reduced, verify_theta)
from heckegrid.series import QSeries


def _tables(tables, G, M, prec):
    return tables.f_table(G, M, prec), tables.cusp_table(G, M, prec)


@pytest.mark.parametrize("G", ["1", "2", "2+", "11", "17", "19", "22", "22+2"])
def test_duality(tables, G):
    fb, ct = _tables(tables, G, 15, 16)
    chk = verify_duality(fb, ct, GridWindow(fb.group, 15, 15))
    assert chk.passed, chk.first_mismatch
    assert chk.verified > 0


def test_duality_spot_values(tables):
    fb, ct = _tables(tables, "11", 5, 6)
    assert fb.a(3, -1) == 1 and ct.b(-1, 3) == -1
    assert all(fb.a(m, 0) == 0 and ct.b(0, m) == 0 for m in range(2, 6))


def test_F_coefficients(tables):
    fb = tables.f_table("11", 5, 10)
    F = build_F(fb, 5, 10)
    assert F.coeff(0) == QSeries.constant(1, 10)
    assert F.coeff(1).is_zero()
    assert F.coeff(3) == fb.f(3)


@pytest.mark.parametrize("G,w", [("1", 10), ("2", 10), ("11", 20), ("17", 10), ("22", 10), ("22+2", 10)])
def test_genfun(tables, G, w):
    g = tables.entry(G).genus
    fb = tables.f_table(G, w + g + 1, genfun_prec1(g, w, w))
    ct = tables.cusp_table(G, g + 1, w + 1)
    rep = verify_genfun(fb, ct, w, w)
    assert rep.passed, [c.to_dict() for c in rep.failures()]
    names = {c.name for c in rep.checks}
    assert {"genfun/numerator", "genfun/theta-form"} <= names
    assert ("genfun/A-vanishes" in names) == (g == 0)


def test_genfun_window_invariance(tables):
    fb = tables.f_table("11", 30, 30)
    ct = tables.cusp_table("11", 2, 30)
    small = genfun_sides(fb, ct, 8, 8)
    big = genfun_sides(fb, ct, 14, 14)
    for s, b in zip(small, big):
        for e2 in range(9):
            for e1 in range(-10, 9):
                assert s.coeff(e2).coeff(e1) == b.coeff(e2).coeff(e1)


def test_genfun_needs_enough_q1_precision(tables):
    fb = build_f_basis(tables.entry("11"), 12, 12)
    ct = tables.cusp_table("11", 2, 11)
    with pytest.raises(BasisError):
        genfun_sides(fb, ct, 8, 8)


def test_genfun_window_too_small(tables):
    fb, ct = _tables(tables, "11", 10, 10)
    with pytest.raises(IdentityError):
        genfun_sides(fb, ct, 0, 3)


def test_genfun_detects_corruption(tables):
    fb = tables.f_table("11", 12, genfun_prec1(1, 8, 8))
    ct = tables.cusp_table("11", 2, 11)
    rows = dict(fb.rows)
    rows[5] = rows[5] + QSeries.monomial(3, 1, rows[5].prec)
    bad = type(fb)(fb.group, fb.genus, rows, fb.M, fb.prec)
    rep = verify_genfun(bad, ct, 8, 8)
    assert not rep.passed


@pytest.mark.parametrize("G", ["11", "17", "19", "22", "22+2", "2"])
def test_theta(tables, G):
    fb, ct = _tables(tables, G, 10, 40)
    for m in range(fb.genus + 1, 11):
        chk = verify_theta(fb, ct, m, 40)
        assert chk.passed, chk.first_mismatch


@pytest.mark.parametrize("G", ["11", "22", "17", "22+2"])
def test_genj(tables, G):
    fb = tables.f_table(G, 20, 1)
    ct = tables.cusp_table(G, 1, 21)
    assert verify_genj_reduced(fb, ct, 20).passed


def test_genj_genus_zero_vacuous(tables):
    fb, ct = _tables(tables, "1", 5, 6)
    chk = verify_genj_reduced(fb, ct, 5)
    assert chk.passed and chk.verified == 0


def test_duality_and_genj_fail_independently():
    # corrupt one cusp row: the reduced cusp identity sees it, duality sees it too
    t = TableCache()
    fb = t.f_table("11", 10, 11)
    ct = t.cusp_table("11", 10, 11)
    ct.neg[1] = ct.neg[1] + QSeries.monomial(4, 1, ct.neg[1].prec)
    assert not verify_genj_reduced(fb, ct, 10).passed
    d = verify_duality(fb, ct, GridWindow(fb.group, 10, 10))
    assert not d.passed and d.first_mismatch["n"] == -1 and d.first_mismatch["m"] == 4
