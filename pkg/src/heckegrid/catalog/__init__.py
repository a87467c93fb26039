"""Registry of supported groups and their shipped generator data."""

from __future__ import annotations

import os
import threading
from pathlib import Path

from ..groups import Group
from .entry import (CatalogEntry, CatalogError, ChecksumError, SeriesRecord, dumps, evaluate_recipe,
                    loads, read_entry, write_entry)

SUPPORTED = ("1", "2", "2+", "11", "17", "19", "22", "22+2")
ENV_VAR = "HECKE_GRID_CATALOG"

_cache: dict[tuple[str, str], CatalogEntry] = {}
_lock = threading.Lock()


class UnsupportedGroup(CatalogError):
    pass


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def supported_groups() -> list[Group]:
    return [Group.parse(s) for s in SUPPORTED]


def _as_group(group) -> Group:
    return group if isinstance(group, Group) else Group.parse(str(group))


def load(group) -> CatalogEntry:
    """The shipped entry for ``group`` (cached per data directory)."""
    G = _as_group(group)
    name = str(G)
    if name not in SUPPORTED:
        raise UnsupportedGroup(f"group {name} is not in the catalog; supported: {', '.join(SUPPORTED)}")
    d = data_dir()
    key = (str(d), name)
    with _lock:
        if key not in _cache:
            path = d / f"{name}.cat"
            if not path.exists():
                raise CatalogError(f"catalog file {path} is missing")
            _cache[key] = read_entry(path)
        return _cache[key]


def clear_cache() -> None:
    with _lock:
        _cache.clear()


def validate(entry: CatalogEntry, **kwargs):
    from .validation import validate as _validate
    return _validate(entry, **kwargs)


__all__ = ["CatalogEntry", "CatalogError", "ChecksumError", "SeriesRecord", "SUPPORTED", "ENV_VAR",
           "UnsupportedGroup", "load", "validate", "clear_cache", "data_dir", "supported_groups",
           "dumps", "loads", "read_entry", "write_entry", "evaluate_recipe"]
