"""Internal consistency checks for a catalog entry.

Low coefficients are guarded by the duality grid and the reference prefixes;
every shipped coefficient, up to the top of its window, is guarded by the
relation checks (products of generators must reduce to zero against the
monomial pool, and at genus 1 ``theta X / h_-1`` must lie in that span).
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..basis import BasisError, build_cusp_tables, build_f_basis, generator_pool, theta_cusp_table
from ..report import Check, Report
from ..series import QSeries, SeriesError
from .entry import CatalogEntry, SeriesRecord

# printed prefixes (valuation, coefficients from q^valuation on)
REFERENCE = {
    "11": {"X": (-2, [1, 2, 4, 5, 8, 1, 7, -11]),
           "Y": (-3, [1, 3, 7, 12, 17, 26, 19, 37, -15])},
    "22": {"X": (-3, [1, 0, 1, 4, 2, 2, 0, 0, 2]),
           "Y": (-4, [1, -1, 2, 1, 3, -2, 1])},
    "22+2": {"X": (-2, [1, 0, 0, 1, 2, 1, 3, -3])},
}

# printed prefixes of basis rows (group, m) -> coefficients of q^-m .. q^9
REFERENCE_ROWS = {
    ("1", 1): (-1, [1, 0, 196884, 21493760]),
    ("2", 1): (-1, [1, 0, 276, -2048]),
    ("11", 3): (-3, [1, 0, 1, 0, 2, 2, 16, 16, 18, -46, -31, 48, -78]),
    ("22", 3): (-3, [1, 0, 1, 0, 2, 2, 0, 0, 2, 2, 1, 0, 2]),
}


def _prefix_check(name: str, s: QSeries, ref) -> dict | None:
    val, cs = ref
    if s.valuation != val:
        return {"series": name, "exponent": min(val, s.valuation), "expected": 1 if s.valuation > val else 0,
                "found": s.coeff(min(val, s.valuation))}
    for i, c in enumerate(cs):
        if s.coeff(val + i) != c:
            return {"series": name, "exponent": val + i, "expected": c, "found": s.coeff(val + i)}
    return None


def _monomial_span(entry: CatalogEntry, top: int, prec: int) -> dict[int, QSeries]:
    """One monomial in the generators for each pole order g+1..top, plus the constant 1."""
    g = entry.genus
    pool = generator_pool(entry, prec)
    X = pool[0]
    span = {0: QSeries.constant(1, prec)}
    for k in range(g + 1, top + 1):
        if k <= 2 * g + 1:
            span[k] = pool[k - g - 1]
        else:
            span[k] = X * span[k - g - 1]
    return span


def _reduce(f: QSeries, span: dict[int, QSeries], g: int) -> QSeries:
    """Subtract span elements by principal part (leading pole order first); the result is O(q^1) if f is in the span."""
    res = f
    for k in range(-f.valuation, g, -1):
        c = res.coeff(-k)
        if c:
            lead = span[k].coeff(-k)
            res = res - span[k].scale(Fraction(c) / Fraction(lead))
    c = res.coeff(0)
    if c:
        res = res - c
    return res


def _relation_checks(entry: CatalogEntry) -> list[Check]:
    g = entry.genus
    out = []
    if g == 0:
        return out
    pool = generator_pool(entry, entry.prec)
    gens = [r.series for r in entry.series.values()]
    names = list(entry.series)
    products = []
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            # products with X are pool monomials themselves
            if i == 0:
                continue
            products.append((f"{names[i]}*{names[j]}", gens[i] * gens[j]))
    for label, p in products:
        span = _monomial_span(entry, -p.valuation, int(p.prec) + 1)
        res = _reduce(p, span, g)
        bad = None if res.is_zero() else res.valuation
        out.append(Check("relations", bad is None, "" if bad is None else f"{label} is not in the monomial span",
                         {"product": label, "prec": int(p.prec)},
                         None if bad is None else {"exponent": bad, "residual": res.coeff(bad)},
                         int(p.prec) - p.valuation))
    if g == 1 and entry.seeds:
        X = entry.X
        (h,) = entry.cusp_seeds(int(X.prec) + 4)
        h = h.scale(Fraction(1) / Fraction(h.coeff(1)))
        t = X.theta() / h
        span = _monomial_span(entry, -t.valuation, int(t.prec) + 1)
        res = _reduce(t, span, g)
        bad = None if res.is_zero() else res.valuation
        out.append(Check("relations", bad is None, "" if bad is None else "theta X / h_-1 is not in the monomial span",
                         {"product": "theta(X)/h_-1", "prec": int(t.prec)},
                         None if bad is None else {"exponent": bad, "residual": res.coeff(bad)},
                         int(t.prec) - t.valuation))
    return out


def validate(entry: CatalogEntry, M: int = 20, prec: int | None = None) -> Report:
    """Run every consistency check on ``entry``; failures are report entries, never exceptions."""
    rep = Report()
    g = entry.genus
    G = str(entry.group)

    # structure
    problems = []
    if g < 0:
        problems.append(f"genus {g} < 0")
    if entry.infinity_weierstrass:
        problems.append("infinity is flagged as a Weierstrass point")
    if g == 0:
        if entry.hauptmodul is None:
            problems.append("genus 0 entry without a Hauptmodul recipe")
    else:
        if "X" not in entry.series or "Y" not in entry.series:
            problems.append("missing X or Y")
        else:
            for name, pole in (("X", g + 1), ("Y", g + 2)):
                v = entry.series[name].series.valuation
                if v != -pole:
                    problems.append(f"{name} has valuation {v}, expected {-pole}")
        if len(entry.seeds) != g:
            problems.append(f"{len(entry.seeds)} cusp seeds for genus {g}")
        try:
            generator_pool(entry, 1)
        except BasisError as exc:
            problems.append(str(exc))
    rep.add(Check("structure", not problems, "; ".join(problems), {"group": G, "genus": g}))
    if problems:
        return rep

    # shipped coefficients are integers
    bad = None
    shipped = list(entry.series.items()) + [(f"seed{i}", s) for i, s in enumerate(entry.seeds, 1)
                                            if isinstance(s, SeriesRecord)]
    for name, rec in shipped:
        for n, c in rec.series.items():
            if Fraction(c).denominator != 1:
                bad = {"series": name, "exponent": n, "value": c}
                break
        if bad:
            break
    rep.add(Check("shipped-integrality", bad is None, "", {"group": G}, bad))

    # tables at the largest window the data supports
    if prec is None:
        prec = max(M + 2, 40) if g == 0 else entry.prec - (M + g + 1) - 2 * g - 2
    try:
        fb = build_f_basis(entry, M + g + 1, prec, integral=False)
        if g == 0:
            ct = theta_cusp_table(fb, M)
        else:
            ct = build_cusp_tables(entry, M, prec, fb, strict=False)
    except (BasisError, SeriesError) as exc:
        rep.add(Check("tables", False, str(exc), {"group": G, "M": M, "prec": prec}))
        return rep
    rep.add(Check("tables", True, "", {"group": G, "M": fb.M, "prec": fb.prec, "K": ct.K}))

    # echelon shape of both tables
    bad = None
    for m in range(g + 1, fb.M + 1):
        f = fb.f(m)
        if f.valuation != -m or f.coeff(-m) != 1:
            bad = {"row": f"f_{m}", "exponent": f.valuation, "value": f.coeff(f.valuation)}
        for k in list(range(g + 1, m)) + [0]:
            if bad is None and f.coeff(-k) != 0:
                bad = {"row": f"f_{m}", "exponent": -k, "value": f.coeff(-k)}
        if bad:
            break
    if bad is None and g > 0:
        for n in list(range(-g, 0)) + list(range(1, ct.K + 1)):
            h = ct.h(n)
            lead = -n
            if h.valuation != lead:
                bad = {"row": f"h_{n}", "exponent": h.valuation, "value": h.coeff(h.valuation)}
                break
            for e in range(min(lead, 1), g + 1):
                if e == 0:
                    continue  # reported by the residue check
                want = 1 if e == lead else 0
                if h.coeff(e) != want:
                    bad = {"row": f"h_{n}", "exponent": e, "value": h.coeff(e)}
                    break
            if bad:
                break
    rep.add(Check("echelon", bad is None, "", {"group": G}, bad))

    # a weight-2 form with poles only at infinity has no constant term
    bad = None
    for n in range(1, ct.K + 1):
        c = ct.h(n).coeff(0)
        if c:
            bad = {"row": f"h_{n}", "exponent": 0, "value": c}
            break
    rep.add(Check("residue", bad is None, "", {"group": G, "K": ct.K}, bad))

    # integrality of both grids
    bad = None
    for m in range(g + 1, fb.M + 1):
        for n, c in fb.f(m).items():
            if Fraction(c).denominator != 1:
                bad = {"grid": "a", "m": m, "n": n, "value": c}
                break
        if bad:
            break
    if bad is None:
        for n in list(range(-g, 0)) + list(range(1, ct.K + 1)):
            for e, c in ct.h(n).items():
                if Fraction(c).denominator != 1:
                    bad = {"grid": "b", "n": n, "m": e, "value": c}
                    break
            if bad:
                break
    rep.add(Check("integrality", bad is None, "", {"group": G, "M": fb.M, "prec": fb.prec}, bad))

    # duality grid
    from ..identities import GridWindow, verify_duality
    rep.add(verify_duality(fb, ct, GridWindow(entry.group, min(fb.M, M), min(ct.K, M))))

    # reference prefixes
    bad = None
    checked = []
    for name, ref in REFERENCE.get(G, {}).items():
        rec = entry.series.get(name)
        if rec is None:
            bad = {"series": name, "detail": "missing"}
            break
        checked.append(name)
        bad = _prefix_check(name, rec.series, ref)
        if bad:
            break
        m = re.search(r"reference prefix (\d+) terms", rec.source)
        if m and int(m.group(1)) != len(ref[1]):
            bad = {"series": name, "detail": f"source claims {m.group(1)} reference terms, {len(ref[1])} embedded"}
            break
    if bad is None:
        for (grp, m), ref in REFERENCE_ROWS.items():
            if grp == G:
                checked.append(f"f_{m}")
                bad = _prefix_check(f"f_{m}", fb.f(m), ref)
                if bad:
                    break
    rep.add(Check("reference-prefix", bad is None, "", {"group": G, "series": checked}, bad))

    # generators without a printed prefix are pinned to their echelon row
    bad = None
    pinned = [n for n in entry.series if n not in REFERENCE.get(G, {})]
    for name in pinned:
        s = entry.series[name].series
        k = -s.valuation
        for e in list(range(-k + 1, -g)) + [0]:
            if s.coeff(e):
                bad = {"series": name, "exponent": e, "value": s.coeff(e)}
                break
        if bad:
            break
    rep.add(Check("normalization", bad is None, "", {"group": G, "series": pinned}, bad))

    rep.checks.extend(_relation_checks(entry))
    return rep
