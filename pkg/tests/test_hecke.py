import pytest

from heckegrid.basis import InsufficientPrecision, expand_in_f_basis
from heckegrid.hecke import (HeckeError, HeckeIndex, apply_T_m, apply_T_pr, closed_form_f, hecke_by_divisors,
                             hecke_by_replication, materialize_combination, required_input_prec,
                             verify_replication)
from heckegrid.replicate import MockReplicateError
from heckegrid.series import QSeries


def test_identity(tables):
    f = tables.f_table("11", 5, 30).f(5)
    assert apply_T_m(f, "11", 1, 30, tables) == f.truncate(30)
    assert apply_T_pr(f, "11", 3, 0, 30, tables) == f.truncate(30)


def test_index_validation():
    with pytest.raises(HeckeError):
        HeckeIndex(0)
    assert HeckeIndex(12).factors == [(2, 2), (3, 1)]
    with pytest.raises(HeckeError):
        apply_T_pr(QSeries.constant(1, 10), "11", 4, 1, 5)


def test_level_one_hecke_system(tables):
    fb = tables.f_table("1", 12, 12 * 20)
    for n in range(1, 13):
        assert apply_T_m(fb.f(1), "1", n, 20, tables) == fb.f(n).truncate(20)


def test_stage_order_is_irrelevant(tables):
    fb = tables.f_table("2", 6, 6 * 30)
    J = fb.f(1)
    a = apply_T_m(J, "2", 6, 30, tables, order=[2, 3])
    b = apply_T_m(J, "2", 6, 30, tables, order=[3, 2])
    assert a == b == fb.f(6).truncate(30)
    f = tables.f_table("22", 3, 3 * 12 * 10).f(3)
    assert apply_T_m(f, "22", 6, 12, tables, order=[2, 3]) == apply_T_m(f, "22", 6, 12, tables, order=[3, 2])


def test_bad_stage_order(tables):
    J = tables.f_table("2", 6, 200).f(1)
    with pytest.raises(HeckeError):
        apply_T_m(J, "2", 6, 30, tables, order=[2])


def test_precision_budget(tables):
    assert required_input_prec(3, 2, 10) == 90
    f = tables.f_table("11", 2, 50).f(2)
    with pytest.raises(InsufficientPrecision):
        apply_T_pr(f.truncate(50), "11", 3, 2, 10, tables)


def test_closed_form_examples(tables):
    fb = tables.f_table("11", 22, 20)
    assert fb.a(2, -1) == 2
    assert closed_form_f(fb, 2, 3, 1) == [(2, 3), (1, 6)]
    assert closed_form_f(fb, 2, 11, 1) == [(2, 11), (1, 22)]
    f = tables.f_table("11", 2, 20 * 11).f(2)
    assert apply_T_pr(f, "11", 11, 1, 20, tables) == materialize_combination(fb, [(2, 11), (1, 22)], 20)


def test_closed_form_genus_zero(tables):
    fb = tables.f_table("1", 36, 10)
    assert closed_form_f(fb, 4, 2, 2) == [(4, 1), (2, 4), (1, 16)]
    J = tables.f_table("1", 4, 40).f(4)
    assert apply_T_pr(J, "1", 2, 2, 10, tables) == materialize_combination(fb, closed_form_f(fb, 4, 2, 2), 10)


def test_no_closed_form_below_genus(tables):
    fb = tables.f_table("22", 10, 10)
    with pytest.raises(HeckeError):
        closed_form_f(fb, 3, 2, 1)


@pytest.mark.parametrize("G", ["11", "17", "19"])
def test_preserves_basis_for_p_coprime(tables, G):
    fb = tables.f_table(G, 3 * 9, 12)
    f = tables.f_table(G, 3, 12 * 9).f(3)
    out = apply_T_pr(f, G, 3, 2, 12, tables)
    exp = expand_in_f_basis(out, fb)
    assert exp.in_span
    assert out == materialize_combination(fb, closed_form_f(fb, 3, 3, 2), 12)


def test_composition_law(tables):
    # T(p^2) T(p) = T(p^3) + p * (p-plicate then T(p)) for p not dividing N
    fb = tables.f_table("11", 2, 27 * 8)
    f = fb.f(2)
    p = 3
    left = apply_T_pr(apply_T_pr(f, "11", p, 2, 8 * p, tables), "11", p, 1, 8, tables)
    right = apply_T_pr(f, "11", p, 3, 8, tables) + apply_T_pr(f, "11", p, 1, 8, tables).scale(p)
    assert left == right


def test_non_member_image_and_mock_image(tables):
    fb = tables.f_table("11", 121, 11 * 12)
    out = apply_T_m(fb.f(11), "11", 11, 12, tables)
    J = tables.f_table("1", 1, 12).f(1)
    assert out == fb.f(121).truncate(12) - fb.f(11).truncate(12) + J.scale(11)
    assert not expand_in_f_basis(out, fb).in_span
    f = tables.f_table("22+2", 2, 40).f(2)
    with pytest.raises(MockReplicateError) as err:
        apply_T_pr(f, "22+2", 2, 1, 10, tables)
    assert err.value.residuals == {1: -2} and err.value.stage == 2


def test_replication_displays(tables):
    f = tables.f_table("22", 3, 20 * 11).f(3)
    for m in (2, 11):
        a = hecke_by_divisors(f, "22", m, 20, tables)
        b = hecke_by_replication(f, "22", m, 20, tables)
        assert a == b
    assert verify_replication(f, "22", 2, 20, tables).passed


def test_level_two_replication(tables):
    fb = tables.f_table("2", 12, 12 * 20)
    for m in range(2, 13):
        rep = verify_replication(fb.f(1), "2", m, 20, tables)
        assert rep.passed
        assert rep.by_composition == fb.f(m).truncate(20)
