"""Command-line entry point: thin adapters over the library.

Exit codes: 0 on success or all checks passing, 1 when a verification fails,
2 on usage or data errors (unsupported group, short precision, mock plicate).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field

from . import catalog
from .basis import BasisError, TableCache, expand_in_f_basis
from .catalog import CatalogError
from .groups import Group, is_prime, reduce_m
from .report import Check, Report, plain
from .replicate import MockReplicateError, ReplicateError, holomorphy_test, j_expand, plicate, plicate_series
from .series import QSeries, SeriesError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- outputs ----------------------------------------------------------------------

@dataclass
class SeriesOut:
    name: str
    group: str
    series: QSeries
    notes: list[tuple[str, object]] = field(default_factory=list)

    def to_dict(self) -> dict:
        s = self.series
        out = {"name": self.name, "group": self.group, "valuation": s.valuation, "prec": int(s.prec),
               "coefficients": plain(s.coefficients(s.valuation, int(s.prec)))}
        for k, v in self.notes:
            out[k] = plain(v)
        return out


@dataclass
class GridOut:
    name: str
    group: str
    rows: list[int]
    cols: list[int]
    values: list[list]
    row_label: str = "m"
    col_label: str = "n"

    def to_dict(self) -> dict:
        return {"name": self.name, "group": self.group, self.row_label: self.rows, self.col_label: self.cols,
                "values": plain(self.values)}


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([plain(x) for x in r])
    return buf.getvalue()


def emit(obj, fmt: str = "table") -> str:
    """Render a series, grid or report as ``table``, ``csv`` or ``json`` text."""
    if fmt == "json":
        return json.dumps(obj.to_dict(), separators=(",", ":")) + "\n"
    if isinstance(obj, SeriesOut):
        s = obj.series
        if fmt == "csv":
            return _csv([["exponent", "coefficient"]] + [[n, s.coeff(n)] for n in range(s.valuation, int(s.prec))])
        lines = [f"{obj.name} on {obj.group} = {s.format(terms=10 ** 6)}"]
        lines += [f"{k}: {v}" for k, v in obj.notes]
        return "\n".join(lines) + "\n"
    if isinstance(obj, GridOut):
        head = [f"{obj.row_label}\\{obj.col_label}"] + obj.cols
        body = [[r] + vals for r, vals in zip(obj.rows, obj.values)]
        if fmt == "csv":
            return _csv([head] + body)
        table = [[str(plain(x)) for x in row] for row in [head] + body]
        width = max(len(x) for row in table for x in row)
        return "\n".join(" ".join(x.rjust(width) for x in row) for row in table) + "\n"
    if isinstance(obj, Report):
        if fmt == "csv":
            return _csv([["name", "passed", "verified", "first_mismatch", "detail"]] +
                        [[c.name, c.passed, "" if c.verified is None else c.verified,
                          "" if c.first_mismatch is None else json.dumps(plain(c.first_mismatch), separators=(",", ":")),
                          c.detail] for c in obj.checks])
        lines = []
        for c in obj.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = f" params={json.dumps(plain(c.params), separators=(',', ':'))}" if c.params else ""
            lines.append(f"{mark} {c.name}{extra}")
            if c.first_mismatch is not None:
                lines.append(f"     first mismatch: {json.dumps(plain(c.first_mismatch), separators=(',', ':'))}")
            if c.detail and not c.passed:
                lines.append(f"     {c.detail}")
        lines.append(f"{sum(c.passed for c in obj.checks)}/{len(obj.checks)} checks passed")
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot emit {type(obj).__name__}")


# -- flag types (validated before any computation) ---------------------------------

def group_arg(text: str) -> Group:
    try:
        G = Group.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad group {text!r}: {exc}")
    if str(G) not in catalog.SUPPORTED:
        raise argparse.ArgumentTypeError(f"group {G} is not in the catalog; supported: {', '.join(catalog.SUPPORTED)}")
    return G


def element_arg(text: str) -> tuple[str, int]:
    m = re.fullmatch(r"([fJ]):(\d+)", text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"element must be f:<m> or J:<n>, got {text!r}")
    return m.group(1), int(m.group(2))


def op_arg(text: str) -> tuple[int, int | None, int]:
    """``T(p^r)`` -> (p, r, p^r); ``T(m)`` -> (m, None, m)."""
    t = text.strip().replace(" ", "")
    m = re.fullmatch(r"T\((\d+)\^(\d+)\)", t)
    if m:
        p, r = int(m.group(1)), int(m.group(2))
        if not is_prime(p) or r < 0:
            raise argparse.ArgumentTypeError(f"T(p^r) needs a prime p and r >= 0, got {text!r}")
        return p, r, p ** r
    m = re.fullmatch(r"T\((\d+)\)|(\d+)", t)
    if m:
        n = int(m.group(1) or m.group(2))
        if n < 1:
            raise argparse.ArgumentTypeError("Hecke index must be positive")
        return n, None, n
    raise argparse.ArgumentTypeError(f"operator must look like T(p^r) or T(m), got {text!r}")


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


# -- commands -------------------------------------------------------------------

def _element(tables: TableCache, G: Group, el: tuple[str, int], prec: int) -> tuple[str, QSeries]:
    kind, k = el
    e = tables.entry(G)
    if kind == "J":
        if e.genus:
            raise UsageError(f"J_{G},{k} is mock on a genus {e.genus} group; use f:{k}")
        return f"J_{k}", tables.f_table(G, k, prec).f(k)
    if 1 <= k <= e.genus:
        raise UsageError(f"f_{k} = 0 on {G}: pole order {k} is a gap (genus {e.genus})")
    return f"f_{k}", tables.f_table(G, k, prec).f(k)


def cmd_basis(a, tables):
    fb = tables.f_table(a.group, a.m, a.prec)
    name = f"J_{a.m}" if fb.genus == 0 else f"f_{a.m}"
    return SeriesOut(name, str(a.group), fb.f(a.m).truncate(a.prec)), EXIT_OK


def cmd_faber(a, tables):
    e = tables.entry(a.group)
    if e.genus:
        raise UsageError(f"Faber rows need a genus 0 group; {a.group} has genus {e.genus}")
    fb = tables.f_table(a.group, a.n, a.prec)
    return SeriesOut(f"J_{a.n}", str(a.group), fb.f(a.n).truncate(a.prec)), EXIT_OK


def cmd_cusp(a, tables):
    e = tables.entry(a.group)
    if a.n < -e.genus:
        raise UsageError(f"h_{a.n} undefined: weight-2 rows start at h_-{e.genus}")
    ct = tables.cusp_table(a.group, max(a.n, 1), a.prec)
    return SeriesOut(f"h_{a.n}", str(a.group), ct.h(a.n).truncate(a.prec)), EXIT_OK


def cmd_grid(a, tables):
    e = tables.entry(a.group)
    g = e.genus
    if a.kind == "a":
        fb = tables.f_table(a.group, a.mmax, a.nmax + 1)
        rows = list(range(1, a.mmax + 1))
        cols = list(range(-g, a.nmax + 1))
        vals = [[fb.a(m, n) for n in cols] for m in rows]
        return GridOut("a", str(a.group), rows, cols, vals), EXIT_OK
    ct = tables.cusp_table(a.group, a.nmax, a.mmax + 1)
    rows = list(range(-g, a.nmax + 1))
    cols = list(range(1, a.mmax + 1))
    vals = [[ct.b(n, m) for m in cols] for n in rows]
    return GridOut("b", str(a.group), rows, cols, vals, "n", "m"), EXIT_OK


def cmd_replicate(a, tables):
    name, f = _element(tables, a.group, a.element, a.prec)
    c = j_expand(f, a.group, tables)
    target = plicate(c, a.m)
    res = holomorphy_test(target, tables, a.prec)
    if not res.holomorphic:
        raise MockReplicateError(target.group, res.residuals, a.m, res.projection)
    s = plicate_series(f, a.group, a.m, a.prec, tables)
    notes = [("j_expansion", str(c)), ("plicate", str(target)), ("verdict", "holomorphic")]
    return SeriesOut(f"{name}^({a.m})", str(reduce_m(tables.entry(a.group).group, a.m)), s, notes), EXIT_OK


def cmd_hecke(a, tables):
    from .hecke import apply_T_m, apply_T_pr
    p, r, idx = a.op
    name, _ = _element(tables, a.group, a.element, 1)
    _, f = _element(tables, a.group, a.element, a.prec * idx)
    if r is None:
        out = apply_T_m(f, a.group, idx, a.prec, tables)
        label = f"T({idx})"
    else:
        out = apply_T_pr(f, a.group, p, r, a.prec, tables)
        label = f"T({p}^{r})"
    fb = tables.f_table(a.group, max(-out.valuation, 1), a.prec)
    exp = expand_in_f_basis(out, fb)
    parts = [f"{v}" if k == 0 else f"{v}*f_{k}" for k, v in exp.coeffs.items() if v]
    notes = [("f_basis_part", " + ".join(parts).replace("+ -", "- ") or "0"),
             ("remainder", "0" if exp.in_span else exp.residual.format(6))]
    return SeriesOut(f"{name}|{label}", str(a.group), out, notes), EXIT_OK


def cmd_congruence(a, tables):
    from .congruence import check_family, check_tcong, table_for
    fb = table_for(a.group, a.m, a.p, a.r, a.nmax, tables)
    if a.variant == "tcong":
        rep = check_tcong(fb, a.m, a.p, a.r, range(1, a.nmax + 1), probe=a.probe)
    else:
        params = {"m": a.m, "p": a.p, "r": a.r, "nmax": a.nmax, "prec": a.nmax + 1}
        rep = check_family(fb, a.variant, params, probe=a.probe, tables=tables)
    out = Report([rep.to_check()])
    return out, EXIT_OK if out.passed else EXIT_FAIL


def cmd_verify(a, tables):
    from .identities import (GridWindow, genfun_prec1, verify_duality, verify_genfun, verify_genj_reduced,
                             verify_theta)
    e = tables.entry(a.group)
    g = e.genus
    rep = Report()
    if a.identity == "duality":
        fb = tables.f_table(a.group, a.mmax, a.nmax + 1)
        ct = tables.cusp_table(a.group, a.nmax, a.mmax + 1)
        rep.add(verify_duality(fb, ct, GridWindow(e.group, a.mmax, a.nmax)))
    elif a.identity == "genfun":
        fb = tables.f_table(a.group, a.nmax + g + 1, genfun_prec1(g, a.mmax, a.nmax))
        ct = tables.cusp_table(a.group, g + 1, a.nmax + 1)
        rep.extend(verify_genfun(fb, ct, a.mmax, a.nmax))
    elif a.identity == "genj":
        fb = tables.f_table(a.group, a.mmax, 1)
        ct = tables.cusp_table(a.group, 1, a.mmax + 1)
        rep.add(verify_genj_reduced(fb, ct, a.mmax))
    elif a.identity == "theta":
        m = a.m if a.m is not None else g + 1
        fb = tables.f_table(a.group, m, a.nmax)
        ct = tables.cusp_table(a.group, m, a.nmax)
        rep.add(verify_theta(fb, ct, m, a.nmax))
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_catalog(a, tables):
    if a.action == "list":
        rep = Report()
        for G in catalog.SUPPORTED:
            e = tables.entry(G)
            rep.add(Check("entry", True, "", {"group": G, "genus": e.genus, "prec": e.prec if e.genus else None,
                                            "extended": e.extended}))
        return rep, EXIT_OK
    groups = catalog.SUPPORTED if a.group is None else [str(a.group)]
    rep = Report()
    for G in groups:
        sub = catalog.validate(tables.entry(G))
        for c in sub.checks:
            c.params = dict(c.params, group=G)
        rep.extend(sub)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"basis": cmd_basis, "cusp": cmd_cusp, "grid": cmd_grid, "faber": cmd_faber,
            "replicate": cmd_replicate, "hecke": cmd_hecke, "congruence": cmd_congruence,
            "verify": cmd_verify, "catalog": cmd_catalog}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heckegrid", description="Weakly holomorphic bases, Hecke operators and "
                                                               "coefficient identities for small levels.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text, group=True):
        p = sub.add_parser(name, help=help_text)
        if group:
            p.add_argument("--group", type=group_arg, required=True, help="e.g. 11, 22, 22+2")
        p.add_argument("--emit", choices=("table", "csv", "json"), default="table")
        return p

    p = add("basis", "print the basis row f_m (J_m at genus 0)")
    p.add_argument("--m", type=nonneg, required=True)
    p.add_argument("--prec", type=positive, default=20, help="output known to O(q^prec)")
    p = add("cusp", "print the weight-2 row h_n (n >= -g)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prec", type=positive, default=20)
    p = add("grid", "export the a(m,n) or b(n,m) grid")
    p.add_argument("--kind", choices=("a", "b"), default="a")
    p.add_argument("--mmax", type=positive, required=True)
    p.add_argument("--nmax", type=nonneg, required=True)
    p = add("faber", "print the Faber row J_n of a genus 0 group")
    p.add_argument("--n", type=positive, required=True)
    p.add_argument("--prec", type=positive, default=20)
    p = add("replicate", "m-plicate of a basis element with its holomorphy verdict")
    p.add_argument("--element", type=element_arg, required=True, help="f:<m> or J:<n>")
    p.add_argument("--m", type=positive, required=True)
    p.add_argument("--prec", type=positive, default=20)
    p = add("hecke", "apply T(p^r) or T(m) to a basis element")
    p.add_argument("--element", type=element_arg, required=True)
    p.add_argument("--op", type=op_arg, required=True, help="T(p^r) or T(m)")
    p.add_argument("--prec", type=positive, default=10, help="output known to O(q^prec)")
    p = add("congruence", "check one congruence statement over n <= nmax")
    p.add_argument("--variant", choices=("tcong", "P8.1", "P8.2", "C8.3", "C8.4", "C8.5", "Eq-cong00"),
                   required=True)
    p.add_argument("--m", type=positive, required=True)
    p.add_argument("--p", type=positive, required=True)
    p.add_argument("--r", type=positive, default=1)
    p.add_argument("--nmax", type=positive, default=40)
    p.add_argument("--probe", action="store_true", help="break a hypothesis on purpose; failures are expected")
    p = add("verify", "check a coefficient identity on a window")
    p.add_argument("--identity", choices=("duality", "genfun", "genj", "theta"), required=True)
    p.add_argument("--mmax", type=positive, default=20, help="m range (q1 range for genfun)")
    p.add_argument("--nmax", type=positive, default=20, help="n range (q2 range for genfun, precision for theta)")
    p.add_argument("--m", type=positive, default=None, help="row for the theta identity")
    p = add("catalog", "list or validate shipped entries", group=False)
    p.add_argument("action", choices=("list", "validate"))
    p.add_argument("--group", type=group_arg, default=None)
    return ap


def run(argv: list[str] | None = None, out=None, err=None, tables: TableCache | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    tables = tables or TableCache()
    try:
        obj, code = COMMANDS[a.command](a, tables)
    except MockReplicateError as exc:
        shown = ", ".join(f"d{l} = {d}" for l, d in sorted(exc.residuals.items()))
        err.write(f"mock: {exc}\n")
        if a.emit == "json":
            out.write(json.dumps({"verdict": "mock", "group": str(exc.group), "stage": exc.stage,
                                  "residuals": plain({f"d{l}": d for l, d in sorted(exc.residuals.items())})},
                                 separators=(",", ":")) + "\n")
        else:
            out.write(f"verdict: mock on {exc.group}; residuals {shown}\n")
        return EXIT_USAGE
    except (UsageError, CatalogError, BasisError, ReplicateError, SeriesError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    out.write(emit(obj, a.emit))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
