"""Generalized Hecke operators on q-series of M_0^{!,inf}(G).

``T(p^r) f = sum_{i=0}^r V_{p^i}( U*_{p^(r-i)}( f^(p^i) ) )`` where f^(p^i) is the
p^i-plicate; ``T(m)`` composes these over the prime-power factors of m.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .basis import BasisTable, InsufficientPrecision, TableCache, default_tables
from .groups import Group, factorize, is_prime, reduce_m
from .replicate import (Holomorphic, JCombo, MockReplicateError, holomorphy_test, j_expand, materialize,
                        plicate)
from .series import QSeries


class HeckeError(ValueError):
    pass


@dataclass(frozen=True)
class HeckeIndex:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise HeckeError("Hecke index must be positive")

    @property
    def factors(self) -> list[tuple[int, int]]:
        return factorize(self.m) if self.m > 1 else []

    def __str__(self) -> str:
        return f"T({self.m})"


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def required_input_prec(p: int, r: int, prec: int) -> int:
    """U*_{p^r} divides the window by p^r, so the input must reach prec * p^r."""
    return prec * p ** r


def _check_window(f: QSeries, need: int, what: str):
    if f.prec < need:
        raise InsufficientPrecision(what, need, f.prec)


def apply_T_pr(f: QSeries, group, p: int, r: int, prec: int, tables: TableCache | None = None) -> QSeries:
    """f | T(p^r) to O(q^prec)."""
    if not is_prime(p):
        raise HeckeError(f"{p} is not prime")
    if r < 0:
        raise HeckeError("exponent r must be >= 0")
    tables = tables or default_tables()
    G = tables.entry(group).group
    if r == 0:
        return f.truncate(prec)
    _check_window(f, required_input_prec(p, r, prec), f"input to T({p}^{r})")
    stages = []
    if G.N % p:
        # G^(p) = G and every p^i-plicate is f itself; no J-expansion needed
        return _assemble(f, p, r, prec, [(i, None) for i in range(1, r + 1)], tables)
    c = j_expand(f, G, tables)
    # decide every replicate before doing any series arithmetic
    for i in range(1, r + 1):
        ci = plicate(c, p ** i)
        if ci.group == G:
            stages.append((i, None))
            continue
        res = holomorphy_test(ci, tables, 1)
        if not res.holomorphic:
            raise MockReplicateError(ci.group, res.residuals, p ** i, res.projection)
        stages.append((i, ci))
    return _assemble(f, p, r, prec, stages, tables)


def _assemble(f, p, r, prec, stages, tables):
    total = f.ustar(p ** r).truncate(prec)
    for i, ci in stages:
        pi = p ** i
        inner = -(-prec // pi) * p ** (r - i)
        fi = f if ci is None else materialize(ci, inner, tables, pi)
        total = total + fi.ustar(p ** (r - i)).vee(pi).truncate(prec)
    return total.truncate(prec)


def apply_T_m(f: QSeries, group, m, prec: int, tables: TableCache | None = None,
              order: list[int] | None = None) -> QSeries:
    """f | T(m) as the composition of its prime-power stages (``order`` lists the primes)."""
    idx = m if isinstance(m, HeckeIndex) else HeckeIndex(int(m))
    tables = tables or default_tables()
    stages = dict(idx.factors)
    primes = order if order is not None else sorted(stages)
    if sorted(primes) != sorted(stages):
        raise HeckeError(f"stage order {primes} does not match the primes of {idx.m}")
    _check_window(f, prec * idx.m, f"input to {idx}")
    # output window of each stage, last stage first
    windows = []
    w = prec
    for p in reversed(primes):
        windows.append(w)
        w *= p ** stages[p]
    windows.reverse()
    out = f
    for p, w in zip(primes, windows):
        out = apply_T_pr(out, group, p, stages[p], w, tables)
    return out.truncate(prec)


def closed_form_f(fb: BasisTable, m: int, p: int, r: int) -> list[tuple[object, int]]:
    """Right-hand side of the closed formula for f_m | T(p^r) as (coefficient, row index) pairs.

    For p not dividing N:
      sum_{p^j | (m, p^r)} p^j f_{p^r m / p^2j} + sum_l sum_{p^j | (l, p^r)} p^j a(m,-l) f_{l p^r / p^2j};
    for p | N with p > g and p not dividing m: f_{p^r m} + sum_l a(m,-l) f_{l p^r}.
    """
    N = fb.group.N
    g = fb.genus
    pr = p ** r
    if m <= g and m != 0:
        return []
    if N % p == 0:
        if p <= g or m % p == 0:
            raise HeckeError(f"no closed form for p={p} | N with p <= g or p | m (p={p}, g={g}, m={m})")
        terms = [(1, pr * m)] + [(fb.a(m, -l), l * pr) for l in range(1, g + 1)]
    else:
        terms = []
        for part, coef in [(m, 1)] + [(l, fb.a(m, -l)) for l in range(1, g + 1)]:
            j = 0
            while j <= r and part % p ** j == 0:
                terms.append((coef * p ** j, part * pr // p ** (2 * j)))
                j += 1
    merged: dict[int, object] = {}
    for c, k in terms:
        if c and not (1 <= k <= g):
            merged[k] = merged.get(k, 0) + c
    return sorted(((c, k) for k, c in merged.items() if c), key=lambda t: t[1])


def materialize_combination(fb: BasisTable, combo: list[tuple[object, int]], prec: int) -> QSeries:
    out = QSeries.zero(prec)
    for c, k in combo:
        out = out + fb.f(k).truncate(prec).scale(c)
    return out


def replication_terms(c: JCombo, m: int) -> list[tuple[int, JCombo]]:
    """The combination ``sum_n a_n sum_{d|(n,m)} d J^(d)_{mn/d^2}`` grouped by d.

    The constant a_0 counts as a_0 J_0 with (0, m) = m.
    """
    out = []
    for d in divisors(m):
        a = {}
        for n, v in c.coeffs:
            if gcd(n, m) % d == 0:
                k = m * n // (d * d)
                a[k] = a.get(k, 0) + d * v
        if a:
            out.append((d, JCombo.make(reduce_m(c.group, d), a)))
    return out


def hecke_by_divisors(f: QSeries, group, m: int, prec: int, tables: TableCache | None = None) -> QSeries:
    """``sum_{d|m} f^(d) | U*_{m/d} (d tau)`` in one step."""
    tables = tables or default_tables()
    c = j_expand(f, group, tables)
    _check_window(f, prec * m, f"input to T({m})")
    total = QSeries.zero(prec)
    for d in divisors(m):
        inner = -(-prec // d) * (m // d)
        fd = f if d == 1 else materialize(plicate(c, d), inner, tables, d)
        total = total + fd.ustar(m // d).vee(d).truncate(prec)
    return total


def hecke_by_replication(f: QSeries, group, m: int, prec: int, tables: TableCache | None = None) -> QSeries:
    """``sum_n a_n sum_{d|(n,m)} d J^(d)_{mn/d^2}`` with each d-part materialized."""
    tables = tables or default_tables()
    c = j_expand(f, group, tables)
    total = QSeries.zero(prec)
    for d, combo in replication_terms(c, m):
        total = total + materialize(combo, prec, tables, d)
    return total


@dataclass
class ReplicationReport:
    group: str
    element: str
    m: int
    prec: int
    by_divisors: QSeries
    by_replication: QSeries
    by_composition: QSeries
    mismatch: dict | None

    @property
    def passed(self) -> bool:
        return self.mismatch is None


def verify_replication(f: QSeries, group, m: int, prec: int, tables: TableCache | None = None,
                       label: str = "f") -> ReplicationReport:
    tables = tables or default_tables()
    a = hecke_by_divisors(f, group, m, prec, tables)
    b = hecke_by_replication(f, group, m, prec, tables)
    c = apply_T_m(f, group, m, prec, tables)
    mism = None
    for name, x, y in (("divisors/replication", a, b), ("divisors/composition", a, c)):
        n = x.mismatch(y)
        if n is not None:
            mism = {"pair": name, "exponent": n}
            break
    return ReplicationReport(str(group), label, m, prec, a, b, c, mism)
