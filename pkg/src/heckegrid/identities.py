"""Coefficient identities between the weight-0 and weight-2 tables.

* duality: ``a(m, n) = -b(n, m)`` for m > g, n >= -g;
* generating function: with ``F(q1, q2) = sum_m f_m(q1) q2^m``,
  ``(f_{g+1}(q2) - f_{g+1}(q1)) F = h_{g+1}(q2) + sum_{l=-g}^{g} a(g+1,-l) h_l(q2)
  + sum_{l=1}^{g} f_{l+g+1}(q1) h_{-l}(q2)
  + sum_{j=g+1}^{2g} sum_{l=j-g}^{g} a(g+1, l-j) f_j(q1) h_{-l}(q2)``,
  checked both in this form and as ``-theta f_{g+1}(q2) + A``;
* theta expansion: ``-theta f_m = sum_{l=-g}^{m} l a(m,-l) h_l``;
* reduced cusp identity: ``h_{-l}(q2) - q2^l = -sum_{m>g} a(m,-l) q2^m``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basis import BasisError, BasisTable, CuspTable
from .groups import Group
from .report import Check, Report
from .series import INF, BiSeries, QSeries


class IdentityError(ValueError):
    pass


@dataclass(frozen=True)
class GridWindow:
    """m in [m_min, m_max], n in [n_min, n_max]; the lower ends default to g+1 and -g."""

    group: Group
    m_max: int
    n_max: int
    m_min: int | None = None
    n_min: int | None = None

    def ms(self, g: int) -> range:
        return range(g + 1 if self.m_min is None else self.m_min, self.m_max + 1)

    def ns(self, g: int) -> range:
        return range(-g if self.n_min is None else self.n_min, self.n_max + 1)


def _covers(fb: BasisTable, ct: CuspTable, m_max: int, n_max: int):
    if m_max > fb.M or n_max >= fb.prec:
        raise BasisError(f"f-table (M={fb.M}, prec={fb.prec}) does not cover m <= {m_max}, n <= {n_max}")
    if n_max > ct.K or m_max >= ct.prec:
        raise BasisError(f"cusp table (K={ct.K}, prec={ct.prec}) does not cover n <= {n_max}, m <= {m_max}")


def verify_duality(fb: BasisTable, ct: CuspTable, w: GridWindow) -> Check:
    g = fb.genus
    _covers(fb, ct, w.m_max, w.n_max)
    count = 0
    params = {"group": str(fb.group), "m": [w.ms(g).start, w.m_max], "n": [w.ns(g).start, w.n_max]}
    for m in w.ms(g):
        for n in w.ns(g):
            a, b = fb.a(m, n), ct.b(n, m)
            if a != -b:
                return Check("duality", False, f"a({m},{n}) = {a} but b({n},{m}) = {b}", params,
                             {"m": m, "n": n, "a": a, "b": b}, count)
            count += 1
    return Check("duality", True, "", params, None, count)


def build_F(fb: BasisTable, M: int, prec1: int) -> BiSeries:
    """``sum_{m<=M} f_m(q1) q2^m`` with each coefficient cut at O(q1^prec1)."""
    if M > fb.M:
        raise BasisError(f"F needs rows to {M}, table has {fb.M}")
    return BiSeries({m: fb.f(m).truncate(prec1) for m in range(M + 1)}, M + 1)


def _genfun_pieces(fb: BasisTable, ct: CuspTable, prec1: int):
    """The parts shared by both right-hand sides: the two sums with q1-dependence."""
    g = fb.genus
    s = BiSeries({}, INF)
    for l in range(1, g + 1):
        s = s + BiSeries.from_q1(fb.f(l + g + 1).truncate(prec1)) * BiSeries.from_q2(ct.h(-l))
    for j in range(g + 1, 2 * g + 1):
        for l in range(j - g, g + 1):
            c = fb.a(g + 1, l - j)
            if c:
                s = s + (BiSeries.from_q1(fb.f(j).truncate(prec1)) * BiSeries.from_q2(ct.h(-l))).scale(c)
    return s


def genfun_sides(fb: BasisTable, ct: CuspTable, n1: int, n2: int):
    """(left, numerator form, theta form, A) on q1 exponents <= n1 and q2 exponents <= n2."""
    g = fb.genus
    if n1 < 1 or n2 < 1:
        raise IdentityError("window too small: need at least one positive exponent in q1 and q2")
    M = n2 + g + 1
    # f_{g+1}(q1) f_k(q1) at q2^k loses max(g+1, k) terms of q1-precision
    prec1 = genfun_prec1(g, n1, n2)
    if M > fb.M or prec1 > fb.prec:
        raise BasisError(f"window {n1}x{n2} needs f rows to {M} at precision {prec1}; "
                         f"table has M={fb.M}, prec={fb.prec}")
    if ct.K < g + 1 or ct.prec <= n2:
        raise BasisError(f"window {n1}x{n2} needs h_{g + 1} to O(q^{n2 + 1})")
    F = build_F(fb, M, prec1)
    fg = fb.f(g + 1)
    left = (BiSeries.from_q2(fg) - BiSeries.from_q1(fg.truncate(prec1))) * F
    shared = _genfun_pieces(fb, ct, prec1)
    num = BiSeries.from_q2(ct.h(g + 1))
    for l in range(-g, g + 1):
        c = fb.a(g + 1, -l)
        if c:
            num = num + BiSeries.from_q2(ct.h(l)).scale(c)
    num = num + shared
    A = shared
    for l in range(-g, g + 2):
        c = (1 - l) * fb.a(g + 1, -l)
        if c:
            A = A + BiSeries.from_q2(ct.h(l)).scale(c)
    tform = BiSeries.from_q2(-fg.theta()) + A
    for k in range(n2 + 1):
        if left.coeff(k).prec <= n1:
            raise BasisError(f"left side at q2^{k} only known to O(q1^{left.coeff(k).prec})")
    return left, num, tform, A


def genfun_prec1(g: int, n1: int, n2: int) -> int:
    """q1-precision of the f rows needed for a window of q1 exponents <= n1, q2 exponents <= n2."""
    return n1 + 1 + max(g + 1, n2)


def verify_genfun(fb: BasisTable, ct: CuspTable, n1: int, n2: int) -> Report:
    g = fb.genus
    left, num, tform, A = genfun_sides(fb, ct, n1, n2)
    params = {"group": str(fb.group), "q1_max": n1, "q2_max": n2}
    rep = Report()
    for name, right in (("genfun/numerator", num), ("genfun/theta-form", tform)):
        bad = left.mismatch(right, n1, n2)
        if bad is None:
            count = 0
            for k in range(n2 + 1):
                lo = min(left.coeff(k).valuation, right.coeff(k).valuation, 0)
                count += n1 + 1 - lo
            rep.add(Check(name, True, "", params, None, count))
        else:
            e1, e2 = bad
            rep.add(Check(name, False, "cleared identity differs", params,
                          {"q1": e1, "q2": e2, "left": left.coeff(e2).coeff(e1), "right": right.coeff(e2).coeff(e1)}))
    if g == 0:
        zero = BiSeries({}, A.prec2)
        bad = A.mismatch(zero, n1, n2)
        rep.add(Check("genfun/A-vanishes", bad is None, "" if bad is None else "A is not zero at genus 0",
                      params, None if bad is None else {"q1": bad[0], "q2": bad[1]}))
    return rep


def verify_theta(fb: BasisTable, ct: CuspTable, m: int | None = None, prec: int | None = None) -> Check:
    """``-theta f_m`` against ``sum_l l a(m,-l) h_l`` below exponent ``prec``."""
    g = fb.genus
    m = g + 1 if m is None else m
    prec = min(fb.prec, ct.prec) if prec is None else prec
    if m > ct.K:
        raise BasisError(f"theta expansion of f_{m} needs h rows to {m}, table has {ct.K}")
    if prec > min(fb.prec, ct.prec):
        raise BasisError(f"theta check to O(q^{prec}) exceeds table precision {min(fb.prec, ct.prec)}")
    left = -fb.f(m).theta().truncate(prec)
    right = QSeries.zero(prec)
    for l in range(-g, m + 1):
        c = l * fb.a(m, -l)
        if c:
            right = right + ct.h(l).truncate(prec).scale(c)
    params = {"group": str(fb.group), "m": m, "prec": prec}
    n = left.mismatch(right)
    if n is None:
        return Check("theta", True, "", params, None, prec + m)
    return Check("theta", False, f"-theta f_{m} differs at q^{n}", params,
                 {"exponent": n, "left": left.coeff(n), "right": right.coeff(n)})


def verify_genj_reduced(fb: BasisTable, ct: CuspTable, M: int) -> Check:
    """``b(-l, m) = -a(m, -l)`` for l = 1..g and g < m <= M, plus the gap exponents of h_{-l}."""
    g = fb.genus
    params = {"group": str(fb.group), "M": M}
    if g == 0:
        return Check("genj", True, "genus 0: no cusp forms, nothing to check", params, None, 0)
    if M > fb.M or M >= ct.prec:
        raise BasisError(f"reduced cusp identity to q2^{M} needs f rows to {M} and h_-l to O(q^{M + 1})")
    count = 0
    for l in range(1, g + 1):
        h = ct.h(-l)
        target = QSeries.monomial(l, 1, M + 1)
        for m in range(g + 1, M + 1):
            c = fb.a(m, -l)
            if c:
                target = target - QSeries.monomial(m, c, M + 1)
        n = h.truncate(M + 1).mismatch(target)
        if n is not None:
            return Check("genj", False, f"h_-{l} differs at q^{n}", params,
                         {"l": l, "exponent": n, "h": h.coeff(n), "expected": target.coeff(n)}, count)
        count += M
    return Check("genj", True, "", params, None, count)
