"""Reduced row echelon bases of weight 0 and weight 2 and their coefficient grids.

For a group of genus g (i infinity not a Weierstrass point) the weight-0 rows
are ``f_m = q^-m + sum_{l<=g} a(m,-l) q^-l + O(q)`` for m = 0 and m > g.  The
weight-2 rows are ``h_{-l} = q^l + O(q^(g+1))`` (l = 1..g, the cusp forms) and
``h_n = q^-n + O(q^(g+1))`` for n >= 1; ``h_0`` is taken to be 0 since no
weight-2 form with leading term 1 and no other terms up to q^g exists (its
residue at infinity would be nonzero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalog.entry import CatalogEntry
from .groups import Group
from .series import INF, QSeries, SeriesError


class BasisError(SeriesError):
    pass


class InsufficientPrecision(BasisError):
    def __init__(self, what: str, need, have):
        super().__init__(f"{what}: need precision {need}, data supports {have}")
        self.need = need
        self.have = have


class NonIntegralPivot(BasisError):
    pass


def _is_int(c) -> bool:
    return isinstance(c, int) or Fraction(c).denominator == 1


@dataclass
class BasisTable:
    """Rows f_m for m = 0 and g < m <= M, all known to O(q^prec)."""

    group: Group
    genus: int
    rows: dict[int, QSeries]
    M: int
    prec: int

    def f(self, m: int) -> QSeries:
        if m == 0:
            return QSeries.constant(1, self.prec)
        if 1 <= m <= self.genus:
            return QSeries.zero(self.prec)
        if m < 0 or m > self.M:
            raise BasisError(f"row f_{m} outside the table (0..{self.M})")
        return self.rows[m]

    def a(self, m: int, n: int):
        if n < -m and m > 0:
            return 0
        return self.f(m).coeff(n)

    def grid(self, ms, ns):
        return [[self.a(m, n) for n in ns] for m in ms]


@dataclass
class FaberTable(BasisTable):
    """Genus-0 table: the rows are the Faber functions J_n = q^-n + O(q)."""

    def J(self, n: int) -> QSeries:
        return self.f(n)

    def c(self, n: int, l: int):
        return self.f(n).coeff(l)


@dataclass
class CuspTable:
    group: Group
    genus: int
    neg: dict[int, QSeries]          # l -> h_{-l}
    pos: dict[int, QSeries]          # n -> h_n, n >= 1
    K: int
    prec: int
    theta_derived: bool = False

    def h(self, n: int) -> QSeries:
        if n == 0:
            return QSeries.zero(self.prec)
        if n < 0:
            if -n > self.genus:
                raise BasisError(f"h_{n} undefined: only h_-1..h_-{self.genus} exist")
            return self.neg[-n]
        if n > self.K:
            raise BasisError(f"row h_{n} outside the table (1..{self.K})")
        return self.pos[n]

    def b(self, n: int, m: int):
        if n == 0:
            return 0
        return self.h(n).coeff(m)


@dataclass
class Expansion:
    coeffs: dict[int, object]
    residual: QSeries

    @property
    def in_span(self) -> bool:
        return self.residual.is_zero()


# -- construction -------------------------------------------------------------

def _window(s: QSeries, lo: int, hi: int) -> np.ndarray:
    return np.array(s.coefficients(lo, hi), dtype=object)


class _Reducer:
    """Keeps the rows built so far as dense arrays starting at exponent ``lo``."""

    def __init__(self, lo: int, genus: int, integral: bool):
        self.lo = lo
        self.genus = genus
        self.integral = integral
        self.rows: dict[int, QSeries] = {}
        self.dense: dict[int, np.ndarray] = {}

    def reduce(self, cand: QSeries, m: int, hi: int) -> QSeries:
        if cand.valuation != -m:
            raise BasisError(f"candidate for pole order {m} has valuation {cand.valuation}")
        if cand.prec < hi:
            raise InsufficientPrecision(f"row of pole order {m}", hi, cand.prec)
        lead = cand.coeff(-m)
        if lead != 1:
            if self.integral and lead not in (1, -1):
                raise NonIntegralPivot(f"pole order {m}: leading coefficient {lead} is not a unit")
            cand = cand.scale(Fraction(1) / Fraction(lead))
        width = hi - self.lo
        v = _window(cand, self.lo, hi)
        for k in range(m - 1, self.genus, -1):
            c = v[-k - self.lo]
            if c:
                if self.integral and not _is_int(c):
                    raise NonIntegralPivot(f"pole order {m}: non-integral multiple {c} of f_{k}")
                v = v - c * self.dense[k][:width]
        v[-self.lo] = 0
        row = QSeries(list(v), self.lo, hi)
        self.rows[m] = row
        self.dense[m] = v
        return row


def generator_pool(entry: CatalogEntry, prec: int) -> list[QSeries]:
    """Generators of pole orders g+1..2g+1 (genus 0: the Hauptmodul)."""
    g = entry.genus
    if g == 0:
        return [entry.hauptmodul_series(prec)]
    gens = entry.generators
    poles = [-s.valuation for s in gens]
    need = list(range(g + 1, 2 * g + 2))
    missing = [k for k in need if k not in poles]
    if missing:
        raise BasisError(f"{entry.group}: no generator with pole order {missing}; "
                         "the monomial pool cannot reach every order above the genus")
    return [gens[poles.index(k)] for k in need]


def build_f_basis(entry: CatalogEntry, M: int, prec: int, strategy: str = "recursive",
                  integral: bool = True) -> BasisTable:
    """Echelon rows f_m for m <= M to O(q^prec).

    ``strategy`` is ``"recursive"`` (f_m from X * f_{m-g-1}) or ``"monomials"``
    (f_m from X^a times a pool generator); both give the same table.
    """
    g = entry.genus
    work = prec + M + 2 * g + 4
    if g > 0 and work > entry.prec:
        # the shipped window bounds what is reachable
        reach = entry.prec - M - 2 * g - 2
        if reach < prec:
            raise InsufficientPrecision(f"{entry.group} basis to pole order {M}", prec, reach)
        work = entry.prec
    pool = [s.truncate(work) for s in generator_pool(entry, work)]
    X = pool[0]
    red = _Reducer(-M, g, integral)
    powers = {1: X}
    for m in range(g + 1, M + 1):
        # later rows are built from this one, each step costing up to g+1 terms
        hi = prec + (M - m) + g + 1
        if m <= 2 * g + 1:
            cand = pool[m - g - 1]
        elif strategy == "recursive":
            cand = X * red.rows[m - g - 1]
        elif strategy == "monomials":
            a = (m - g - 1) // (g + 1)
            r = m - a * (g + 1)
            for i in range(2, a + 1):
                if i not in powers:
                    powers[i] = powers[i - 1] * X
            cand = powers[a] * pool[r - g - 1]
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        red.reduce(cand, m, hi)
    rows = {m: r.truncate(prec) for m, r in red.rows.items()}
    cls = FaberTable if g == 0 else BasisTable
    return cls(entry.group, g, rows, M, prec)


def faber_genus0(entry: CatalogEntry, Nmax: int, prec: int) -> FaberTable:
    if entry.genus != 0:
        raise BasisError(f"{entry.group} has genus {entry.genus}; Faber rows need genus 0")
    return build_f_basis(entry, Nmax, prec)


def build_cusp_tables(entry: CatalogEntry, K: int, prec: int, fb: BasisTable,
                      strict: bool = True) -> CuspTable:
    """Rows h_-l (l <= g) and h_n (1 <= n <= K) to O(q^prec).

    With ``strict`` a nonzero constant term left in some h_n raises; otherwise
    it stays in the row so a caller can report it.
    """
    g = entry.genus
    if g == 0:
        raise BasisError("cusp tables undefined for genus 0; use theta-derivatives of Faber rows")
    if K > 0 and fb.M < K + g:
        raise BasisError(f"f-table reaches pole order {fb.M}, cusp rows to {K} need {K + g}")
    seed_prec = prec + K + g + 2
    seeds = entry.cusp_seeds(seed_prec)
    if len(seeds) != g:
        raise BasisError(f"{entry.group}: {len(seeds)} cusp seeds for genus {g}")
    have = min(s.prec for s in seeds)
    if have < seed_prec:
        raise InsufficientPrecision(f"{entry.group} cusp rows to n={K}", prec, have - K - g - 2)
    # echelonize seeds at exponents 1..g
    rows: list[QSeries] = []
    for s in seeds:
        for r in rows:
            c = s.coeff(r.valuation)
            if c:
                s = s - r.scale(c)
        if s.is_zero() or s.valuation > g:
            raise BasisError(f"{entry.group}: cusp seeds are not independent modulo q^{g + 1}")
        s = s.scale(Fraction(1) / Fraction(s.coeff(s.valuation)))
        rows = [r - s.scale(r.coeff(s.valuation)) for r in rows] + [s]
    neg = {r.valuation: r for r in rows}
    lo = -K
    hi = prec
    dense = {-l: _window(neg[l], lo, hi) for l in neg}
    pos: dict[int, QSeries] = {}
    for n in range(1, K + 1):
        cand = fb.f(n + g) * neg[g].truncate(seed_prec)
        if cand.prec < hi:
            raise InsufficientPrecision(f"row h_{n}", hi, cand.prec)
        v = _window(cand, lo, hi)
        for k in list(range(n - 1, 0, -1)) + [-l for l in range(1, g + 1)]:
            # exponent -k is cleared by the row with leading term q^(-k)
            c = v[-k - lo]
            if c:
                v = v - c * dense[k]
        if v[-lo] != 0 and strict:
            raise BasisError(f"{entry.group}: h_{n} has constant term {v[-lo]}; "
                             "a weight-2 form with poles only at infinity has zero constant term, "
                             "so the data is inconsistent")
        pos[n] = QSeries(list(v), lo, hi)
        dense[n] = v
    neg = {l: r.truncate(prec) for l, r in neg.items()}
    return CuspTable(entry.group, g, neg, pos, K, prec)


def theta_cusp_table(fb: FaberTable, K: int | None = None) -> CuspTable:
    """Genus-0 weight-2 rows h_n = -theta(J_n)/n, known to O(q^prec)."""
    K = fb.M if K is None else K
    pos = {n: fb.J(n).theta().scale(Fraction(-1, n)) for n in range(1, K + 1)}
    return CuspTable(fb.group, 0, {}, pos, K, fb.prec, theta_derived=True)


def expand_in_f_basis(f: QSeries, fb: BasisTable) -> Expansion:
    """Write f as c_0 + sum_{m>g} c_m f_m on principal parts; report what is left."""
    if f.prec <= 0:
        raise InsufficientPrecision("expansion", 1, f.prec)
    top = -f.valuation
    if top > fb.M:
        raise BasisError(f"pole order {top} exceeds table range {fb.M}")
    coeffs: dict[int, object] = {}
    res = f
    for k in range(top, fb.genus, -1):
        c = res.coeff(-k)
        if c:
            coeffs[k] = c
            res = res - fb.f(k).scale(c)
    c0 = res.coeff(0)
    coeffs[0] = c0
    if c0:
        res = res - c0
    return Expansion(dict(sorted(coeffs.items())), res)


class TableCache:
    """Builds and keeps tables per group; lookups reuse any table that covers the request."""

    def __init__(self, loader=None):
        if loader is None:
            from . import catalog
            loader = catalog.load
        self._load = loader
        self._f: dict[Group, list[BasisTable]] = {}
        self._h: dict[Group, list[CuspTable]] = {}

    def entry(self, group) -> CatalogEntry:
        return self._load(group)

    def f_table(self, group, M: int, prec: int) -> BasisTable:
        e = self.entry(group)
        G = e.group
        M = max(M, e.genus + 1)
        for t in self._f.get(G, []):
            if t.M >= M and t.prec >= prec:
                return t
        # round up a little so nearby requests hit the cache
        M2, p2 = M + (-M) % 8, max(prec + (-prec) % 8, 8)
        try:
            t = build_f_basis(e, M2, p2)
        except InsufficientPrecision:
            t = build_f_basis(e, M, prec)
        self._f.setdefault(G, []).append(t)
        return t

    def cusp_table(self, group, K: int, prec: int) -> CuspTable:
        e = self.entry(group)
        G = e.group
        for t in self._h.get(G, []):
            if t.K >= K and t.prec >= prec:
                return t
        if e.genus == 0:
            t = theta_cusp_table(self.f_table(G, K, prec + 1), K)
        else:
            fb = self.f_table(G, K + e.genus, prec)
            t = build_cusp_tables(e, K, prec, fb)
        self._h.setdefault(G, []).append(t)
        return t


_default: TableCache | None = None


def default_tables() -> TableCache:
    global _default
    if _default is None:
        _default = TableCache()
    return _default
