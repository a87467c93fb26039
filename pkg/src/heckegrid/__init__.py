"""Exact q-series engine for canonical bases, Hecke operators and replicates on N+S groups."""

from .series import QSeries, BiSeries, q
from .groups import Group

__version__ = "0.1.0"

__all__ = ["QSeries", "BiSeries", "q", "Group", "__version__"]
