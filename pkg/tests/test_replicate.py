import pytest

from heckegrid.groups import Group
from heckegrid.replicate import (JCombo, MockReplicateError, NotInSpan, holomorphy_test, j_expand, plicate,
                                 plicate_series)
from heckegrid.series import QSeries


def test_j_expand_examples(tables):
    f = tables.f_table("22", 3, 40).f(3)
    c = j_expand(f, "22", tables)
    assert c.as_dict() == {3: 1, 1: 1}
    assert j_expand(QSeries.constant(1, 40), "11", tables).as_dict() == {0: 1}
    c = j_expand(tables.f_table("11", 11, 40).f(11), "11", tables)
    assert c.as_dict() == {11: 1, 1: -1}


def test_j_expand_rejects_non_members(tables):
    with pytest.raises(NotInSpan):
        j_expand(QSeries.monomial(-1, 1, 40), "11", tables)


def test_plicate_moves_group(tables):
    c = j_expand(tables.f_table("22", 3, 40).f(3), "22", tables)
    assert plicate(c, 2) == JCombo(Group.parse("11"), c.coeffs)
    assert plicate(c, 11) == JCombo(Group.parse("2"), c.coeffs)
    assert plicate(c, 1) == c


def test_plicates_commute(tables):
    c = j_expand(tables.f_table("22", 5, 40).f(5), "22", tables)
    assert plicate(plicate(c, 2), 11) == plicate(plicate(c, 11), 2)


def test_holomorphy_verdicts(tables):
    f22 = tables.f_table("22", 3, 40).f(3)
    res = holomorphy_test(plicate(j_expand(f22, "22", tables), 2), tables, 20)
    assert res.holomorphic and res.series == tables.f_table("11", 3, 20).f(3)
    f = tables.f_table("22+2", 2, 40).f(2)
    res = holomorphy_test(plicate(j_expand(f, "22+2", tables), 2), tables, 20)
    assert not res.holomorphic
    assert res.residuals == {1: -2}
    assert res.projection.coeff(-2) == 1


def test_genus_zero_always_holomorphic(tables):
    c = JCombo.make(Group.parse("2"), {1: 3, 4: -1, 0: 7})
    res = holomorphy_test(c, tables, 10)
    assert res.holomorphic
    fb = tables.f_table("2", 4, 10)
    assert res.series == fb.f(1).scale(3) - fb.f(4) + 7


def test_plicate_series_examples(tables):
    f22 = tables.f_table("22", 3, 40).f(3)
    two = plicate_series(f22, "22", 2, 10, tables)
    assert two.coefficients(-3, 7) == [1, 0, 1, 0, 2, 2, 16, 16, 18, -46]
    eleven = plicate_series(f22, "22", 11, 6, tables)
    assert eleven.coefficients(-3, 6) == [1, 0, 1, 0, 33882, -1845248, 43446018, -648265728, 7171488865]
    assert plicate_series(f22, "22", 1, 30, tables) == f22.truncate(30)


def test_principal_parts_preserved(tables):
    fb = tables.f_table("22", 12, 40)
    for m in range(3, 13):
        for k in (2, 11, 22):
            try:
                s = plicate_series(fb.f(m), "22", k, 5, tables)
            except MockReplicateError:
                continue
            assert s.coefficients(-m, 1) == fb.f(m).coefficients(-m, 1)


def test_mock_error_carries_residuals(tables):
    f = tables.f_table("22+2", 2, 40).f(2)
    with pytest.raises(MockReplicateError) as err:
        plicate_series(f, "22+2", 2, 10, tables)
    assert err.value.residuals == {1: -2}
    assert "d1 = -2" in str(err.value)


def test_fricke_plicate(tables):
    f = tables.f_table("22+2", 2, 40).f(2)
    s = plicate_series(f, "22+2", 11, 10, tables)
    J = tables.f_table("2+", 2, 10)
    assert s == J.f(2).truncate(10)


def test_round_trip(tables):
    f = tables.f_table("11", 7, 40).f(7)
    assert j_expand(plicate_series(f, "11", 1, 40, tables), "11", tables) == j_expand(f, "11", tables)
