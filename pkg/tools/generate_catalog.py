"""One-off generator for the shipped genus >= 1 catalog files.

Independent of the runtime basis code: for each level we span a space of
holomorphic weight-k forms on Gamma0(N) by products of Eisenstein series and
cusp forms, check its rank against the dimension formula, and divide by an
eta quotient D of weight k whose only zero is at infinity (order v).  The
quotients are exactly the functions with poles of order <= v at infinity, so
a reduced echelon form on the exponents -v..0 yields the functions with a
single prescribed pole order.  For 22+2 the forms are symmetrized under W_2
and divided by a W_2-invariant eta quotient vanishing at the two cusps
swapped by W_2.

Usage:  python3 tools/generate_catalog.py [outdir]
"""

from __future__ import annotations

import itertools
import sys
from fractions import Fraction
from math import gcd
from pathlib import Path

from heckegrid.catalog.entry import CatalogEntry, SeriesRecord, write_entry
from heckegrid.catalog.validation import REFERENCE
from heckegrid.classics import eta_quotient, eisenstein
from heckegrid.groups import Group, factorize
from heckegrid.series import QSeries

MOD = (1 << 61) - 1


def e2(prec):
    s = [0] * prec
    for d in range(1, prec):
        for n in range(d, prec, d):
            s[n] += d
    return QSeries([1] + [-24 * s[n] for n in range(1, prec)], 0, prec)


def scaled(f: QSeries, d: int, prec: int) -> QSeries:
    return f.truncate(-(-prec // d)).vee(d).truncate(prec)


# -- elliptic curve newforms ------------------------------------------------

def curve_ap(ainv, p):
    a1, a2, a3, a4, a6 = ainv
    count = 1  # point at infinity
    for x in range(p):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        lin = (a1 * x + a3) % p
        for y in range(p):
            if (y * y + lin * y - rhs) % p == 0:
                count += 1
    return p + 1 - count


def newform_from_curve(ainv, level, prec):
    """q-expansion of the weight-2 newform attached to a curve of conductor ``level``."""
    a = [0] * prec
    a[1] = 1
    ap = {}
    for p in range(2, prec):
        if factorize(p) == [(p, 1)]:
            ap[p] = curve_ap(ainv, p)
    for n in range(2, prec):
        fs = factorize(n)
        if len(fs) == 1:
            p, k = fs[0]
            if k == 1:
                a[n] = ap[p]
            elif level % p == 0:
                a[n] = ap[p] * a[n // p]
            else:
                a[n] = ap[p] * a[n // p] - p * a[n // (p * p)]
        else:
            p, k = fs[0]
            pk = p ** k
            a[n] = a[pk] * a[n // pk]
    return QSeries(a, 0, prec)


# -- dimension formula for M_k(Gamma0(N)) ----------------------------------------

def _kron(d, p):
    """Kronecker symbol (d/p) for a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = pow(d % p, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


def gamma0_invariants(N):
    fs = factorize(N)
    index = N
    for p, _ in fs:
        index = index * (p + 1) // p
    e2_ = 1
    e3_ = 1
    for p, k in fs:
        e2_ *= 0 if (p == 2 and k >= 2) else 1 + _kron(-1, p) if p != 2 else (1 if k == 1 else 0)
        e3_ *= 0 if (p == 3 and k >= 2) else 1 + _kron(-3, p) if p != 3 else (1 if k == 1 else 0)
    cusps = 0
    for d in range(1, N + 1):
        if N % d == 0:
            t = gcd(d, N // d)
            cusps += sum(1 for x in range(1, t + 1) if gcd(x, t) == 1)
    genus = 1 + Fraction(index, 12) - Fraction(e2_, 4) - Fraction(e3_, 3) - Fraction(cusps, 2)
    return index, e2_, e3_, cusps, int(genus)


def dim_mk(N, k):
    _, e2_, e3_, cusps, g = gamma0_invariants(N)
    return (k - 1) * (g - 1) + (k // 4) * e2_ + (k // 3) * e3_ + (k // 2) * cusps


# -- linear algebra -------------------------------------------------------------

class ModRank:
    """Incremental row space mod a large prime on a fixed column window."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = {}

    def add(self, vec) -> bool:
        den = 1
        for x in vec[: self.ncols]:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        v = [int(x * den) % MOD for x in vec[: self.ncols]]
        for piv in sorted(self.rows):
            c = v[piv]
            if c:
                r = self.rows[piv]
                v = [(x - c * y) % MOD for x, y in zip(v, r)]
        for i, x in enumerate(v):
            if x:
                inv = pow(x, MOD - 2, MOD)
                self.rows[i] = [(y * inv) % MOD for y in v]
                return True
        return False


def reduced_echelon(rows, pivot_window):
    """Exact reduced echelon form; pivots are searched in columns < pivot_window."""
    rows = [[Fraction(x) for x in r] for r in rows]
    out = []
    for r in rows:
        for piv, b in out:
            c = r[piv]
            if c:
                r = [x - c * y for x, y in zip(r, b)]
        piv = next((i for i in range(pivot_window) if r[i]), None)
        if piv is None:
            if any(r):
                raise RuntimeError("row has no pivot in the echelon window")
            continue
        c = r[piv]
        r = [x / c for x in r]
        new = []
        for p2, b in out:
            d = b[piv]
            if d:
                b = [x - d * y for x, y in zip(b, r)]
            new.append((p2, b))
        out = new + [(piv, r)]
    return sorted(out)


# -- per-level generation ---------------------------------------------------------

def monomials(gens, weight, limit):
    """Products of generators (with repetition) of total weight ``weight``."""
    out = []
    names = list(range(len(gens)))
    for size in range(1, weight // 2 + 1):
        for combo in itertools.combinations_with_replacement(names, size):
            if sum(gens[i][0] for i in combo) == weight:
                out.append(combo)
                if len(out) >= limit:
                    return out
    return out


def functions_with_poles(N, weight, denom_spec, gens, P, expected_rank, symmetrize=None):
    """Return {pole order: series} for the reduced functions spanned by forms/denominator.

    ``gens`` is a list of (weight, series, w-image or None).
    """
    denom = eta_quotient(denom_spec, P)
    v = denom.valuation
    inv = eta_quotient(denom_spec, P + v).invert()
    combos = monomials(gens, weight, 5000)
    tracker = ModRank(v + 1)
    chosen = []
    extra = 0
    for combo in combos:
        if len(chosen) >= expected_rank:
            # keep probing a while: a rank above the expected one means bad input
            extra += 1
            if extra > 60:
                break
        f = QSeries.constant(1, P)
        for i in combo:
            f = f * gens[i][1]
        if symmetrize:
            img = QSeries.constant(1, P)
            for i in combo:
                img = img * gens[i][2]
            f = f + img
        vec = f.coefficients(0, P)
        if tracker.add(vec):
            chosen.append((f * inv).coefficients(-v, P - v))
    if len(chosen) != expected_rank:
        raise RuntimeError(f"level {N}: spanned rank {len(chosen)}, expected {expected_rank}")
    # echelonize the quotients themselves on the exponents -v..0
    ech = reduced_echelon(chosen, v + 1)
    funcs = {}
    for piv, row in ech:
        funcs[v - piv] = QSeries(row, -v, P - v)
    return funcs, P - v


def check_prefix(name, series, ref):
    val, cs = ref
    got = series.coefficients(val, val + len(cs))
    if series.valuation != val or got != cs:
        raise RuntimeError(f"{name}: prefix {got} differs from reference {cs}")


def normalize_to_prefix(f_lead, lower, ref):
    """Add the multiple of ``lower`` and the constant that match the reference prefix."""
    val, cs = ref
    out = f_lead
    if lower is not None:
        # match the coefficient just below the leading one
        need = cs[1] - out.coeff(val + 1)
        lead_lower = lower.coeff(val + 1)
        out = out + lower.scale(Fraction(need, lead_lower))
    const = cs[-val] - out.coeff(0)
    return out + const


def level_11(P):
    N, k = 11, 10
    h = eta_quotient("1^2*11^2", P)
    E2N = scaled(e2(P), 11, P).scale(11) - e2(P)
    gens = []
    for d in (1, 11):
        gens.append((4, scaled(eisenstein(4, P), d, P), None))
        gens.append((6, scaled(eisenstein(6, P), d, P), None))
    gens += [(2, E2N, None), (2, h, None)]
    funcs, prec = functions_with_poles(N, k, "1^-2*11^22", gens, P, dim_mk(N, k))
    f2, f3 = funcs[2], funcs[3]
    X = normalize_to_prefix(f2, None, REFERENCE["11"]["X"])
    Y = normalize_to_prefix(f3, X, REFERENCE["11"]["Y"])
    return {"X": X, "Y": Y}, prec, gens


def level_prime_curve(N, ainv, P):
    k = {17: 16, 19: 18}[N]
    num = 2 * N
    h = newform_from_curve(ainv, N, P)
    E2N = scaled(e2(P), N, P).scale(N) - e2(P)
    gens = []
    for d in (1, N):
        gens.append((4, scaled(eisenstein(4, P), d, P), None))
        gens.append((6, scaled(eisenstein(6, P), d, P), None))
    gens += [(2, E2N, None), (2, h, None)]
    funcs, prec = functions_with_poles(N, k, f"1^-2*{N}^{num}", gens, P, dim_mk(N, k))
    return {"X": funcs[2], "Y": funcs[3]}, prec, h


def level_22(P):
    N, k = 22, 10
    e = e2(P)
    gens = []
    for d in (1, 2, 11, 22):
        gens.append((4, scaled(eisenstein(4, P), d, P), None))
        gens.append((6, scaled(eisenstein(6, P), d, P), None))
    for d in (2, 11, 22):
        gens.append((2, scaled(e, d, P).scale(d) - e, None))
    for d in (1, 2):
        gens.append((2, eta_quotient(f"{d}^2*{11 * d}^2", P), None))
    funcs, prec = functions_with_poles(N, k, "1^2*2^-4*11^-22*22^44", gens, P, dim_mk(N, k))
    X = normalize_to_prefix(funcs[3], None, REFERENCE["22"]["X"])
    Y = normalize_to_prefix(funcs[4], X, REFERENCE["22"]["Y"])
    Z = funcs[5]
    return {"X": X, "Y": Y, "Z": Z}, prec


def level_22_plus_2(P):
    k = 20
    e = e2(P)
    E2_11 = scaled(e, 11, P).scale(11) - e

    def pair(f, wt):
        # f(t) on a level prime to 2:  f(t)|W_2 = 2^(wt/2) f(2t),  f(2t)|W_2 = 2^(-wt/2) f(t)
        f1 = f
        f2 = scaled(f, 2, P)
        s = Fraction(2) ** (wt // 2)
        return [(wt, f1, f2.scale(s)), (wt, f2, f1.scale(1 / s))]

    gens = []
    for wt, base in ((4, eisenstein(4, P)), (6, eisenstein(6, P))):
        gens += pair(base, wt)
        gens += pair(scaled(base, 11, P), wt)
    gens += pair(E2_11, 2)
    gens += pair(eta_quotient("1^2*11^2", P), 2)
    funcs, prec = functions_with_poles(22, k, "1^-2*2^-2*11^22*22^22", gens, P, 30, symmetrize=True)
    X = funcs[2]
    check_prefix("22+2 X", X, REFERENCE["22+2"]["X"])
    return {"X": X, "Y": funcs[3]}, prec


def main(outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    gens, prec, _ = level_11(640)
    X, Y = gens["X"].truncate(600), gens["Y"].truncate(599)
    for n in ("X", "Y"):
        check_prefix("11 " + n, gens[n], REFERENCE["11"][n])
    write_entry(outdir / "11.cat", CatalogEntry(
        group=Group.parse("11"), genus=1,
        series={"X": SeriesRecord(X, "reference prefix 8 terms; weight-10 forms on Gamma0(11) over eta quotient 1^-2*11^22"),
                "Y": SeriesRecord(Y, "reference prefix 9 terms; weight-10 forms on Gamma0(11) over eta quotient 1^-2*11^22")},
        seeds=["eta(1^2*11^2)"]))

    for N, ainv in ((17, (1, -1, 1, -1, -14)), (19, (0, 1, 1, -9, -15))):
        gens, prec, h = level_prime_curve(N, ainv, 300)
        k = {17: 16, 19: 18}[N]
        src = f"weight-{k} forms on Gamma0({N}) over eta quotient 1^-2*{N}^{2 * N}"
        write_entry(outdir / f"{N}.cat", CatalogEntry(
            group=Group.parse(str(N)), genus=1,
            series={"X": SeriesRecord(gens["X"].truncate(250), src),
                    "Y": SeriesRecord(gens["Y"].truncate(249), src)},
            seeds=[SeriesRecord(h.truncate(252), f"newform of the curve {list(ainv)} from point counts")]))

    gens, prec = level_22(440)
    for n in ("X", "Y"):
        check_prefix("22 " + n, gens[n], REFERENCE["22"][n])
    src = "weight-10 forms on Gamma0(22) over eta quotient 1^2*2^-4*11^-22*22^44"
    write_entry(outdir / "22.cat", CatalogEntry(
        group=Group.parse("22"), genus=2,
        series={"X": SeriesRecord(gens["X"].truncate(400), "reference prefix 9 terms; " + src),
                "Y": SeriesRecord(gens["Y"].truncate(399), "reference prefix 7 terms; " + src),
                "Z": SeriesRecord(gens["Z"].truncate(398), src)},
        seeds=["eta(1^2*11^2)", "eta(2^2*22^2)"]))

    gens, prec = level_22_plus_2(260)
    src = "W2-symmetrized weight-20 forms on Gamma0(22) over eta quotient 1^-2*2^-2*11^22*22^22"
    write_entry(outdir / "22+2.cat", CatalogEntry(
        group=Group.parse("22+2"), genus=1,
        series={"X": SeriesRecord(gens["X"].truncate(220), "reference prefix 8 terms; " + src),
                "Y": SeriesRecord(gens["Y"].truncate(219), src)},
        seeds=["eta(1^2*11^2) + 2*eta(2^2*22^2)"], extended=True))

    write_entry(outdir / "1.cat", CatalogEntry(group=Group.parse("1"), genus=0, hauptmodul="klein_j"))
    write_entry(outdir / "2.cat", CatalogEntry(group=Group.parse("2"), genus=0,
                                               hauptmodul="eta(1^24*2^-24) + 24"))
    # the 11-plicate of 22+2 lives on the Fricke group of level 2
    write_entry(outdir / "2+.cat", CatalogEntry(group=Group.parse("2+"), genus=0,
                                                hauptmodul="eta(1^24*2^-24) + 4096*eta(1^-24*2^24) + 24"))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/heckegrid/catalog/data")
