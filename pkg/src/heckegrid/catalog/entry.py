"""Catalog entries and their on-disk text format."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..classics import eta_quotient, klein_j
from ..groups import Group
from ..series import QSeries

FORMAT_HEADER = "heckegrid-catalog 1"


class CatalogError(ValueError):
    pass


class ChecksumError(CatalogError):
    pass


@dataclass
class SeriesRecord:
    series: QSeries
    source: str = ""


@dataclass
class CatalogEntry:
    """Shipped data for one group.

    ``series`` holds the function-field generators by name, in increasing pole
    order (X, Y and, when the pole orders g+1, g+2 do not generate every order
    above g, further ones).  ``seeds`` are recipe strings or shipped series
    spanning the weight-2 cusp forms.
    """

    group: Group
    genus: int
    series: dict[str, SeriesRecord] = field(default_factory=dict)
    seeds: list = field(default_factory=list)
    hauptmodul: str | None = None
    infinity_weierstrass: bool = False
    extended: bool = False

    @property
    def generators(self) -> list[QSeries]:
        return sorted((r.series for r in self.series.values()), key=lambda s: -s.valuation)

    @property
    def X(self) -> QSeries:
        return self.series["X"].series

    @property
    def Y(self) -> QSeries:
        return self.series["Y"].series

    @property
    def prec(self) -> int:
        if self.genus == 0:
            return 10 ** 9
        return min(int(r.series.prec) for r in self.series.values())

    def hauptmodul_series(self, prec: int) -> QSeries:
        if self.genus != 0 or self.hauptmodul is None:
            raise CatalogError(f"{self.group} has no Hauptmodul recipe")
        return evaluate_recipe(self.hauptmodul, prec)

    def cusp_seeds(self, prec: int | None = None) -> list[QSeries]:
        out = []
        for s in self.seeds:
            if isinstance(s, SeriesRecord):
                out.append(s.series if prec is None else s.series.truncate(prec))
            else:
                out.append(evaluate_recipe(s, prec if prec is not None else self.prec))
        return out


_TERM = re.compile(r"^(?:(-?\d+(?:/\d+)?)\*)?(eta\(([^)]*)\)|klein_j)$|^(-?\d+(?:/\d+)?)$")


def evaluate_recipe(text: str, prec: int) -> QSeries:
    """Evaluate ``c*eta(spec) + ... + klein_j + const`` to ``O(q^prec)``."""
    total = QSeries.zero(prec)
    s = text.replace(" - ", " + -").strip()
    for raw in s.split(" + "):
        term = raw.strip()
        m = _TERM.match(term)
        if not m:
            raise CatalogError(f"bad recipe term {term!r}")
        if m.group(4) is not None:
            total = total + QSeries.constant(Fraction(m.group(4)), prec)
            continue
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2) == "klein_j":
            piece = klein_j(prec)
        else:
            piece = eta_quotient(m.group(3), prec)
        total = total + piece.scale(coef)
    return total


# -- text format --------------------------------------------------------------

def _body_lines(entry: CatalogEntry) -> list[str]:
    lines = [FORMAT_HEADER,
             f"group: {entry.group}",
             f"genus: {entry.genus}",
             f"infinity_weierstrass: {'true' if entry.infinity_weierstrass else 'false'}"]
    if entry.extended:
        lines.append("extended: true")
    if entry.hauptmodul is not None:
        lines.append(f"hauptmodul: {entry.hauptmodul}")
    for i, s in enumerate(entry.seeds, 1):
        if isinstance(s, SeriesRecord):
            lines.append(f"source seed{i}: {s.source}")
            lines.append(f"seed{i}: series {s.series.serialize()}")
        else:
            lines.append(f"seed{i}: recipe {s}")
    for name, rec in entry.series.items():
        lines.append(f"source {name}: {rec.source}")
        lines.append(f"series {name}: {rec.series.serialize()}")
    return lines


def _digest(lines: list[str]) -> str:
    return hashlib.sha256(("\n".join(lines) + "\n").encode()).hexdigest()


def dumps(entry: CatalogEntry) -> str:
    lines = _body_lines(entry)
    return "\n".join(lines + [f"sha256: {_digest(lines)}"]) + "\n"


def write_entry(path, entry: CatalogEntry) -> None:
    Path(path).write_text(dumps(entry))


def loads(text: str, origin: str = "<string>") -> CatalogEntry:
    lines = text.rstrip("\n").split("\n")
    if not lines or lines[0] != FORMAT_HEADER:
        raise CatalogError(f"{origin}: not a catalog file (expected header {FORMAT_HEADER!r})")
    if not lines[-1].startswith("sha256: "):
        raise ChecksumError(f"{origin}: missing checksum line")
    body = lines[:-1]
    if _digest(body) != lines[-1][len("sha256: "):].strip():
        raise ChecksumError(f"{origin}: checksum mismatch, data file is corrupted")
    fields: dict[str, str] = {}
    series: dict[str, SeriesRecord] = {}
    seeds: dict[int, object] = {}
    sources: dict[str, str] = {}
    for line in body[1:]:
        key, _, value = line.partition(": ")
        if key.startswith("source "):
            sources[key[7:]] = value
        elif key.startswith("series "):
            name = key[7:]
            series[name] = SeriesRecord(QSeries.parse(value), sources.get(name, ""))
        elif re.fullmatch(r"seed\d+", key):
            i = int(key[4:])
            kind, _, payload = value.partition(" ")
            if kind == "recipe":
                seeds[i] = payload
            elif kind == "series":
                seeds[i] = SeriesRecord(QSeries.parse(payload), sources.get(key, ""))
            else:
                raise CatalogError(f"{origin}: bad seed line {line[:40]!r}")
        else:
            fields[key] = value
    try:
        entry = CatalogEntry(
            group=Group.parse(fields["group"]),
            genus=int(fields["genus"]),
            series=series,
            seeds=[seeds[i] for i in sorted(seeds)],
            hauptmodul=fields.get("hauptmodul"),
            infinity_weierstrass=fields.get("infinity_weierstrass", "false") == "true",
            extended=fields.get("extended", "false") == "true",
        )
    except KeyError as exc:
        raise CatalogError(f"{origin}: missing field {exc.args[0]!r}") from exc
    return entry


def read_entry(path) -> CatalogEntry:
    path = Path(path)
    return loads(path.read_text(), str(path))
