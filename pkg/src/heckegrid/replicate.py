"""m-plicates through J-expansions, with a holomorphy decision.

An element f of M_0^{!,inf}(G) is written as a_0 + sum_{n>=1} a_n J_{G,n} where
a_n is the coefficient of q^-n and a_0 the constant term.  Its m-plicate keeps
the coefficients and moves them to the reduced group G^(m).  On G' of genus g'
the candidate ``a_0 + sum_{n>g'} a_n f_{G',n}`` differs from the plicate by
``sum_{l<=g'} d_l J_{G',l}`` with ``d_l = a_l - [q^-l] candidate``; the plicate is
weakly holomorphic exactly when every d_l vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .basis import BasisError, Expansion, TableCache, default_tables, expand_in_f_basis
from .groups import Group, factorize, reduce_m
from .series import QSeries, SeriesError


class ReplicateError(SeriesError):
    pass


class NotInSpan(ReplicateError):
    def __init__(self, group, residual: QSeries):
        super().__init__(f"not in M_0^(!,inf)({group}) span: residual {residual.format(4)}")
        self.residual = residual


class MockReplicateError(ReplicateError):
    """A plicate is harmonic but not weakly holomorphic; its mock part is not computable."""

    def __init__(self, group: Group, residuals: dict[int, object], stage: int | None = None,
                 projection: QSeries | None = None):
        where = f" (stage {stage})" if stage is not None else ""
        shown = ", ".join(f"d{l} = {d}" for l, d in sorted(residuals.items()))
        super().__init__(f"plicate on {group} is not weakly holomorphic{where}: {shown}; "
                         "mock coefficients unavailable")
        self.group = group
        self.residuals = residuals
        self.stage = stage
        self.projection = projection


@dataclass(frozen=True)
class JCombo:
    """a_0 + sum a_n J_{G,n}, with ``coeffs`` a sorted tuple of nonzero (n, a_n)."""

    group: Group
    coeffs: tuple = ()

    @classmethod
    def make(cls, group: Group, a: dict) -> "JCombo":
        return cls(group, tuple(sorted((int(n), v) for n, v in a.items() if v)))

    def coeff(self, n: int):
        return dict(self.coeffs).get(n, 0)

    @property
    def support(self) -> list[int]:
        return [n for n, _ in self.coeffs]

    @property
    def max_pole(self) -> int:
        return max([n for n, _ in self.coeffs] + [0])

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "JCombo") -> "JCombo":
        if other.group != self.group:
            raise ReplicateError(f"cannot add combinations on {self.group} and {other.group}")
        a = self.as_dict()
        for n, v in other.coeffs:
            a[n] = a.get(n, 0) + v
        return JCombo.make(self.group, a)

    def scale(self, c) -> "JCombo":
        return JCombo.make(self.group, {n: v * c for n, v in self.coeffs})

    def __str__(self) -> str:
        parts = []
        for n, v in self.coeffs:
            parts.append(f"{v}" if n == 0 else f"{v}*J_{n}")
        return f"[{self.group}] " + (" + ".join(parts) if parts else "0")


@dataclass
class Holomorphic:
    series: QSeries
    group: Group

    holomorphic = True


@dataclass
class Mock:
    residuals: dict[int, object]
    projection: QSeries
    group: Group

    holomorphic = False


def j_expand(f: QSeries, group, tables: TableCache | None = None, check: bool = True,
             check_prec: int = 100) -> JCombo:
    """J-expansion of an element of M_0^{!,inf}(group).

    Membership is confirmed by a zero residual against the f-basis on
    exponents below ``min(f.prec, check_prec)`` (less if the data runs out).
    """
    tables = tables or default_tables()
    entry = tables.entry(group)
    G = entry.group
    top = max(-f.valuation, 0)
    if check:
        window = int(min(f.prec, check_prec))
        if entry.genus:
            window = min(window, entry.prec - top - 2 * entry.genus - 4)
        window = max(window, 1)
        fb = tables.f_table(G, top, window)
        exp: Expansion = expand_in_f_basis(f.truncate(window), fb)
        if not exp.in_span:
            raise NotInSpan(G, exp.residual)
    a = {n: f.coeff(-n) for n in range(1, top + 1)}
    a[0] = f.coeff(0)
    return JCombo.make(G, a)


def plicate(c: JCombo, m: int) -> JCombo:
    if m < 1:
        raise ValueError("m must be positive")
    return JCombo(reduce_m(c.group, m), c.coeffs)


def holomorphy_test(c: JCombo, tables: TableCache | None = None, prec: int = 1):
    """Holomorphic(g*) when the combination is weakly holomorphic, else Mock(d, g*)."""
    tables = tables or default_tables()
    entry = tables.entry(c.group)
    g = entry.genus
    fb = tables.f_table(c.group, max(c.max_pole, g + 1), prec)
    proj = QSeries.constant(c.coeff(0), prec)
    for n, v in c.coeffs:
        if n > g:
            proj = proj + fb.f(n).scale(v)
    residuals = {}
    for l in range(1, g + 1):
        d = c.coeff(l) - proj.coeff(-l)
        if d:
            residuals[l] = d
    if residuals:
        return Mock({l: residuals.get(l, 0) for l in range(1, g + 1)}, proj, c.group)
    return Holomorphic(proj, c.group)


def materialize(c: JCombo, prec: int, tables: TableCache | None = None, stage=None) -> QSeries:
    res = holomorphy_test(c, tables, prec)
    if not res.holomorphic:
        raise MockReplicateError(c.group, res.residuals, stage, res.projection)
    return res.series


def plicate_series(f: QSeries, group, m: int, prec: int, tables: TableCache | None = None) -> QSeries:
    """q-expansion of the m-plicate of f to O(q^prec)."""
    tables = tables or default_tables()
    c = j_expand(f, group, tables)
    if m == 1:
        return f.truncate(prec)
    done = 1
    for p, k in factorize(m):
        for _ in range(k):
            done *= p
            step = plicate(c, done)
            if done != m:
                res = holomorphy_test(step, tables, 1)
                if not res.holomorphic:
                    raise MockReplicateError(step.group, res.residuals, done, res.projection)
    return materialize(plicate(c, m), prec, tables, m)
