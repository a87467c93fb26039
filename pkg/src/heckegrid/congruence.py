"""Congruences between coefficients of the weight-0 basis rows.

Each statement is a sum of products of a(m, n) values that must vanish modulo
p or p^r under side conditions on p, m and n.  The side conditions are
enforced before checking; a probe run deliberately breaks one of them and is
expected to find a failure witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .basis import BasisError, BasisTable, TableCache, default_tables
from .groups import is_prime
from .replicate import plicate_series
from .series import QSeries


class CongruenceError(ValueError):
    pass


class NonIntegralCoefficient(CongruenceError):
    pass


@dataclass
class CongruenceReport:
    statement: str
    params: dict
    modulus: int
    hypotheses: str
    verified: int = 0
    failures: list = field(default_factory=list)
    probe: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        from .report import plain
        return {"statement": self.statement, "params": plain(self.params), "modulus": self.modulus,
                "hypotheses": self.hypotheses, "probe": self.probe, "verified": self.verified,
                "passed": self.passed, "failures": plain(self.failures)}

    def to_check(self):
        from .report import Check
        first = self.failures[0] if self.failures else None
        return Check(self.statement, self.passed, self.hypotheses, dict(self.params, modulus=self.modulus),
                     first, self.verified)


def _int(c, where: str) -> int:
    c = Fraction(c)
    if c.denominator != 1:
        raise NonIntegralCoefficient(f"non-integral coefficient {c} at {where}: table data is inconsistent")
    return int(c)


def _a(fb: BasisTable, m: int, n: int) -> int:
    if m > fb.M:
        raise BasisError(f"congruence needs row f_{m}; table reaches {fb.M}")
    if n >= fb.prec:
        raise BasisError(f"congruence needs q^{n}; table rows known to O(q^{fb.prec})")
    return _int(fb.a(m, n), f"a({m},{n})")


# -- the statements -------------------------------------------------------------
# each returns (value that must vanish, modulus)

def _tcong_value(fb, m, p, r, n):
    g = fb.genus
    pr = p ** r
    v = _a(fb, m * pr, n) + sum(_a(fb, m, -l) * _a(fb, l * pr, n) for l in range(1, g + 1))
    return v


def _p81_value(fb, m, p, r, n):
    g = fb.genus
    return _a(fb, m * p ** r, n) + sum(_a(fb, m * p ** (r - 1), -l) * _a(fb, l * p, n) for l in range(1, g + 1))


def _p82_value(fb, m, p, r, n):
    g = fb.genus
    v = _a(fb, m * p ** r, n)
    for l in range(1, g + 1):
        j = 0
        while j <= r and l % p ** j == 0:
            v += p ** j * _a(fb, m, -l) * _a(fb, l * p ** r // p ** (2 * j), n)
            j += 1
    return v


def _c84_value(fb, m, p, r, n):
    g = fb.genus
    left = sum(_a(fb, m * p ** (r - 1), -l) * _a(fb, l * p, n) for l in range(1, g + 1))
    right = sum(_a(fb, m, -l) * _a(fb, l * p ** r, n) for l in range(1, g + 1))
    return left - right


@dataclass(frozen=True)
class Statement:
    name: str
    value: object
    exponent_mod: bool          # modulus p^r when True, p otherwise
    hypotheses: str

    def modulus(self, p: int, r: int) -> int:
        return p ** r if self.exponent_mod else p

    def violations(self, N: int, g: int, m: int, p: int) -> list[str]:
        """Unmet side conditions on (N, g, m, p); the condition p not dividing n is applied per n."""
        out = []
        h = self.hypotheses
        if "m>g" in h and m <= g:
            out.append(f"m={m} <= g={g}")
        if "p>g" in h and p <= g:
            out.append(f"p={p} <= g={g}")
        if "p!|N" in h and N % p == 0:
            out.append(f"p={p} divides N={N}")
        if "p!|m" in h and m % p == 0:
            out.append(f"p={p} divides m={m}")
        return out


STATEMENTS = {
    "tcong": Statement("tcong", _tcong_value, True, "p>g, p!|m, m>g, p!|n"),
    "P8.1": Statement("P8.1", _p81_value, False, "p!|N, p>g, m>g, p!|n"),
    "P8.2": Statement("P8.2", _p82_value, True, "p!|N, p!|m, m>g, p!|n"),
    "C8.3": Statement("C8.3", _tcong_value, False, "p!|N, m>g, p!|n"),
    "C8.4": Statement("C8.4", _c84_value, False, "p!|N, p>g, m>g, p!|n"),
    "C8.5": Statement("C8.5", _tcong_value, False, "p>g, m>g, p!|n"),
}
VARIANTS = ("P8.1", "P8.2", "C8.3", "C8.4", "C8.5", "Eq-cong00")


def _scan(fb: BasisTable, st: Statement, m: int, p: int, r: int, n_range, probe: bool) -> CongruenceReport:
    if fb.genus < 1:
        raise CongruenceError("the congruence statements need genus >= 1")
    if not is_prime(p):
        raise CongruenceError(f"{p} is not prime")
    if r < 1:
        raise CongruenceError("r must be >= 1")
    bad = st.violations(fb.group.N, fb.genus, m, p)
    if bad and not probe:
        raise CongruenceError(f"{st.name} hypotheses not met: {'; '.join(bad)} (requires {st.hypotheses})")
    mod = st.modulus(p, r)
    ns = list(n_range)
    # probe runs take the excluded n (p | n) unless another condition is already broken
    if probe and not bad:
        ns = [n for n in ns if n % p == 0]
        how = f"probe: p | n (requires {st.hypotheses})"
    elif probe:
        how = f"probe: {'; '.join(bad)} (requires {st.hypotheses})"
    else:
        ns = [n for n in ns if n % p]
        how = f"requires {st.hypotheses}; n with p | n skipped"
    rep = CongruenceReport(st.name, {"group": str(fb.group), "m": m, "p": p, "r": r,
                                     "n": [min(ns), max(ns)] if ns else []}, mod, how, probe=probe)
    for n in ns:
        v = st.value(fb, m, p, r, n)
        rep.verified += 1
        if v % mod:
            rep.failures.append({"n": n, "value": v, "residue": v % mod})
    return rep


def check_tcong(fb: BasisTable, m: int, p: int, r: int, n_range, probe: bool = False) -> CongruenceReport:
    """``a(m p^r, n) + sum_l a(m,-l) a(l p^r, n) = 0 mod p^r`` for p > g, p not dividing m n, m > g."""
    return _scan(fb, STATEMENTS["tcong"], m, p, r, n_range, probe)


def check_plicate_cong(f: QSeries, group, p: int, prec: int, tables: TableCache | None = None) -> CongruenceReport:
    """``f = f^(p) mod p`` coefficientwise below q^prec."""
    if not is_prime(p):
        raise CongruenceError(f"{p} is not prime")
    tables = tables or default_tables()
    fp = plicate_series(f, group, p, prec, tables)
    a, b = f.truncate(prec), fp.truncate(prec)
    G = tables.entry(group).group
    rep = CongruenceReport("plicate", {"group": str(G), "p": p, "prec": prec}, p,
                           "f and its p-plicate weakly holomorphic with integer coefficients")
    lo = min(a.valuation, b.valuation)
    for n in range(lo, prec):
        x, y = _int(a.coeff(n), f"f q^{n}"), _int(b.coeff(n), f"f^({p}) q^{n}")
        rep.verified += 1
        if (x - y) % p:
            rep.failures.append({"n": n, "f": x, "plicate": y})
    return rep


def check_cong00(fb: BasisTable, m: int, p: int, r: int, prec: int, tables: TableCache | None = None,
                 probe: bool = False) -> CongruenceReport:
    """``f_{p^r m} + sum_l a(m,-l) f_{l p^r} = f_m^(p^r)(p^r tau) mod p`` for p | N, below q^prec.

    The probe asks for the same congruence modulo p^2, which the statement does not claim.
    """
    tables = tables or default_tables()
    g = fb.genus
    N = fb.group.N
    if not is_prime(p):
        raise CongruenceError(f"{p} is not prime")
    if N % p and not probe:
        raise CongruenceError(f"Eq-cong00 hypotheses not met: p={p} does not divide N={N}")
    if m <= g:
        raise CongruenceError(f"m={m} must exceed the genus {g}")
    pr = p ** r
    if max(m, g) * pr > fb.M or prec > fb.prec:
        raise BasisError(f"Eq-cong00 needs rows to {max(m, g) * pr} at precision {prec}")
    left = fb.f(pr * m).truncate(prec)
    for l in range(1, g + 1):
        c = fb.a(m, -l)
        if c:
            left = left + fb.f(l * pr).truncate(prec).scale(c)
    inner = -(-prec // pr)
    right = plicate_series(fb.f(m), fb.group, pr, inner, tables).vee(pr).truncate(prec)
    mod = p * p if probe else p
    rep = CongruenceReport("Eq-cong00", {"group": str(fb.group), "m": m, "p": p, "r": r, "prec": prec}, mod,
                           "probe: modulus p^2" if probe else "requires p | N", probe=probe)
    lo = min(left.valuation, right.valuation)
    for n in range(lo, prec):
        x = _int(left.coeff(n), f"combination q^{n}")
        y = _int(right.coeff(n), f"plicate q^{n}")
        rep.verified += 1
        if (x - y) % mod:
            rep.failures.append({"n": n, "combination": x, "plicate": y})
    return rep


def check_family(fb: BasisTable, variant: str, params: dict, probe: bool = False,
                 tables: TableCache | None = None) -> CongruenceReport:
    """Run one named statement; ``params`` holds m, p, r and nmax (or prec for Eq-cong00)."""
    m, p, r = params["m"], params["p"], params.get("r", 1)
    if variant == "Eq-cong00":
        return check_cong00(fb, m, p, r, params.get("prec", params.get("nmax", 20) + 1), tables, probe)
    if variant not in STATEMENTS:
        raise CongruenceError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS + ('tcong',))}")
    n_range = range(params.get("nmin", 1), params["nmax"] + 1)
    return _scan(fb, STATEMENTS[variant], m, p, r, n_range, probe)


def table_for(group, m: int, p: int, r: int, nmax: int, tables: TableCache | None = None) -> BasisTable:
    """A table large enough for any statement at these parameters."""
    tables = tables or default_tables()
    g = tables.entry(group).genus
    return tables.f_table(group, max(m, g) * p ** r, nmax + 1)
