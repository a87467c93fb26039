"""Dedekind eta quotients and level-one Eisenstein series as q-expansions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .series import QSeries


class EtaIntegralityError(ValueError):
    pass


@lru_cache(maxsize=None)
def _euler_power(r: int, length: int) -> tuple[int, ...]:
    """Coefficients of prod(1 - q^n)^r up to q^(length-1).

    Uses the pentagonal-number expansion of the Euler product and the
    power recurrence n f_n = sum_k ((r+1)k - n) e_k f_{n-k}, which only
    touches the O(sqrt n) nonzero e_k.
    """
    pent: list[tuple[int, int]] = []
    k = 1
    while True:
        a = k * (3 * k - 1) // 2
        if a >= length:
            break
        s = -1 if k % 2 else 1
        pent.append((a, s))
        b = k * (3 * k + 1) // 2
        if b < length:
            pent.append((b, s))
        k += 1
    pent.sort()
    f = [0] * length
    if length:
        f[0] = 1
    for n in range(1, length):
        acc = 0
        for e_k, s in pent:
            if e_k > n:
                break
            acc += ((r + 1) * e_k - n) * s * f[n - e_k]
        f[n] = acc // n
    return tuple(f)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """``prod eta(d tau)^r_d`` given as ``((d, r), ...)``."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for d, r in self.factors:
            if d < 1:
                raise ValueError(f"eta scale must be positive, got {d}")
            merged[d] = merged.get(d, 0) + r
        object.__setattr__(self, "factors", tuple(sorted((d, r) for d, r in merged.items() if r)))

    @classmethod
    def parse(cls, text: str) -> "EtaQuotientSpec":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        factors = []
        for part in text.split("*"):
            m = re.fullmatch(r"\s*(\d+)\s*\^\s*(-?\d+)\s*", part)
            if not m:
                raise ValueError(f"bad eta factor {part!r}; expected d^r")
            factors.append((int(m.group(1)), int(m.group(2))))
        return cls(tuple(factors))

    def __str__(self) -> str:
        return "*".join(f"{d}^{r}" for d, r in self.factors) or "1"

    def __mul__(self, other: "EtaQuotientSpec") -> "EtaQuotientSpec":
        return EtaQuotientSpec(self.factors + other.factors)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def order_numerator(self) -> int:
        return sum(d * r for d, r in self.factors)

    @property
    def valuation(self) -> int:
        s = self.order_numerator
        if s % 24:
            raise EtaIntegralityError(
                f"sum of d*r_d is {s}, which is {s % 24} mod 24: q-expansion has fractional exponents")
        return s // 24


def eta_quotient(spec: EtaQuotientSpec | str, prec: int) -> QSeries:
    """Exact expansion of an eta quotient, known to ``O(q^prec)``."""
    if isinstance(spec, str):
        spec = EtaQuotientSpec.parse(spec)
    v = spec.valuation
    rel = prec - v
    if rel <= 0:
        return QSeries.zero(prec)
    result = QSeries.constant(1, rel)
    for d, r in spec.factors:
        base = QSeries(_euler_power(r, -(-rel // d)), 0)
        result = result * base.vee(d).truncate(rel)
    return QSeries(result.coefficients(0, rel), v, prec)


def _sigma(k: int, length: int) -> list[int]:
    s = [0] * length
    for d in range(1, length):
        dk = d ** k
        for n in range(d, length, d):
            s[n] += dk
    return s


def eisenstein(k: int, prec: int) -> QSeries:
    """Normalized Eisenstein series E_4 or E_6 to ``O(q^prec)``."""
    factors = {4: 240, 6: -504}
    if k not in factors:
        raise ValueError("only E_4 and E_6 are provided")
    if prec <= 0:
        return QSeries.zero(prec)
    s = _sigma(k - 1, prec)
    coeffs = [1] + [factors[k] * s[n] for n in range(1, prec)]
    return QSeries(coeffs, 0, prec)


def delta(prec: int) -> QSeries:
    """The discriminant ``eta(tau)^24``."""
    return eta_quotient(EtaQuotientSpec(((1, 24),)), prec)


def klein_j(prec: int) -> QSeries:
    """``E_4^3 / Delta - 744 = q^-1 + 196884 q + ...`` to ``O(q^prec)``."""
    n = prec + 1
    e4 = eisenstein(4, n)
    return (e4 ** 3 / delta(n + 1)) - 744
