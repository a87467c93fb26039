from fractions import Fraction

import pytest

from heckegrid.basis import BasisError, build_f_basis
from heckegrid.congruence import (STATEMENTS, CongruenceError, NonIntegralCoefficient, check_cong00,
                                  check_family, check_plicate_cong, check_tcong, table_for)
from heckegrid.replicate import MockReplicateError
from heckegrid.series import QSeries


@pytest.fixture(scope="module")
def fb11(tables):
    return tables.f_table("11", 152, 101)


def test_headline_instances(fb11):
    r = check_tcong(fb11, 8, 19, 1, range(1, 21))
    assert r.passed and r.modulus == 19
    assert r.verified == 19  # n = 19 is skipped
    r = check_tcong(fb11, 19, 2, 3, range(1, 51))
    assert r.passed and r.modulus == 8 and r.verified == 25


def test_tcong_grid(fb11):
    assert check_tcong(fb11, 2, 3, 2, range(1, 51)).passed


def test_tcong_hypotheses_enforced(fb11):
    with pytest.raises(CongruenceError, match="p=3 divides m=6"):
        check_tcong(fb11, 6, 3, 1, range(1, 10))
    with pytest.raises(CongruenceError, match="m=1"):
        check_tcong(fb11, 1, 3, 1, range(1, 10))
    with pytest.raises(CongruenceError, match="not prime"):
        check_tcong(fb11, 2, 9, 1, range(1, 10))


def test_genus_guard(tables):
    fb = tables.f_table("2", 10, 10)
    with pytest.raises(CongruenceError, match="genus"):
        check_tcong(fb, 2, 3, 1, range(1, 5))


def test_table_coverage(tables):
    fb = build_f_basis(tables.entry("11"), 10, 20)
    with pytest.raises(BasisError):
        check_tcong(fb, 8, 19, 1, range(1, 10))


def test_tcong_agrees_with_prime_modulus_form(fb11):
    for m, p in ((3, 2), (2, 3), (4, 5), (2, 7)):
        t = check_tcong(fb11, m, p, 1, range(1, 41))
        c = check_family(fb11, "C8.5", {"m": m, "p": p, "r": 1, "nmax": 40})
        assert t.passed and c.passed
        assert t.verified == c.verified


@pytest.mark.parametrize("variant,params", [
    ("P8.1", dict(m=2, p=3, r=2, nmax=40)),
    ("P8.1", dict(m=3, p=5, r=1, nmax=40)),
    ("P8.2", dict(m=2, p=3, r=2, nmax=40)),
    ("P8.2", dict(m=4, p=3, r=1, nmax=40)),
    ("C8.3", dict(m=3, p=3, r=2, nmax=40)),
    ("C8.4", dict(m=2, p=3, r=2, nmax=40)),
    ("C8.5", dict(m=3, p=2, r=2, nmax=40)),
    ("C8.5", dict(m=2, p=11, r=1, nmax=40)),
])
def test_family_grids(fb11, variant, params):
    rep = check_family(fb11, variant, params)
    assert rep.passed and rep.verified > 0, rep.failures[:2]


def test_family_on_level_twentytwo(tables):
    fb = table_for("22", 3, 3, 2, 40, tables)
    for variant in ("P8.1", "C8.3", "C8.4", "C8.5"):
        assert check_family(fb, variant, {"m": 3, "p": 3, "r": 2, "nmax": 40}).passed


@pytest.mark.parametrize("variant", ["P8.1", "P8.2", "C8.3", "C8.4", "C8.5", "tcong"])
def test_probes_find_witnesses(fb11, variant):
    params = {"m": 2, "p": 3, "r": 2, "nmax": 40} if variant != "C8.5" else {"m": 3, "p": 2, "r": 2, "nmax": 40}
    rep = check_family(fb11, variant, params, probe=True)
    assert rep.probe and not rep.passed
    w = rep.failures[0]
    assert w["value"] % rep.modulus == w["residue"] != 0


def test_probe_breaking_a_side_condition(fb11):
    rep = check_family(fb11, "P8.1", {"m": 2, "p": 11, "r": 1, "nmax": 40}, probe=True)
    assert "divides N" in rep.hypotheses
    with pytest.raises(CongruenceError, match="divides N"):
        check_family(fb11, "P8.1", {"m": 2, "p": 11, "r": 1, "nmax": 40})


def test_unknown_variant(fb11):
    with pytest.raises(CongruenceError, match="unknown variant"):
        check_family(fb11, "P9", {"m": 2, "p": 3, "nmax": 10})


def test_cong00(tables):
    fb = table_for("22", 3, 2, 1, 60, tables)
    rep = check_cong00(fb, 3, 2, 1, 60, tables)
    assert rep.passed and rep.verified > 60
    assert check_cong00(table_for("22", 3, 11, 1, 60, tables), 3, 11, 1, 60, tables).passed
    probe = check_cong00(table_for("22", 3, 11, 1, 60, tables), 3, 11, 1, 60, tables, probe=True)
    assert probe.modulus == 121 and probe.failures
    with pytest.raises(CongruenceError, match="does not divide"):
        check_cong00(table_for("22", 3, 3, 1, 60, tables), 3, 3, 1, 60, tables)


def test_plicate_congruences(tables):
    f = tables.f_table("22", 3, 101).f(3)
    for p in (2, 11):
        rep = check_plicate_cong(f, "22", p, 101, tables)
        assert rep.passed
    f = tables.f_table("22+2", 2, 40).f(2)
    with pytest.raises(MockReplicateError):
        check_plicate_cong(f, "22+2", 2, 30, tables)


def test_non_integral_is_a_hard_error(tables):
    fb = tables.f_table("11", 20, 20)
    rows = dict(fb.rows)
    rows[6] = rows[6] + QSeries.monomial(5, Fraction(1, 2), rows[6].prec)
    bad = type(fb)(fb.group, fb.genus, rows, fb.M, fb.prec)
    with pytest.raises(NonIntegralCoefficient):
        check_tcong(bad, 2, 3, 1, range(1, 10))


def test_deterministic(fb11):
    a = check_family(fb11, "P8.1", {"m": 2, "p": 3, "r": 2, "nmax": 40}, probe=True)
    b = check_family(fb11, "P8.1", {"m": 2, "p": 3, "r": 2, "nmax": 40}, probe=True)
    assert a.to_dict() == b.to_dict()


def test_statement_table():
    assert set(STATEMENTS) == {"tcong", "P8.1", "P8.2", "C8.3", "C8.4", "C8.5"}
