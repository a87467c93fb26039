"""Exact truncated Laurent series in q.

A :class:`QSeries` stores integer numerators over one common denominator,
which keeps the dominant integer case fast while still representing
arbitrary rational coefficients exactly.  Every series carries a precision
``prec``: coefficients are known for all exponents ``< prec`` (those below the
valuation are known to vanish).  Operations never report coefficients beyond
what their inputs justify.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Mapping

import numpy as np

INF = math.inf


class SeriesError(ValueError):
    """Base class for q-series faults."""


class PrecisionError(SeriesError):
    """A coefficient was requested outside the known window."""


class NonIntegralError(SeriesError):
    """A coefficient expected to be an integer is not."""

    def __init__(self, exponent: int, value: Fraction):
        super().__init__(f"non-integral coefficient {value} at q^{exponent}")
        self.exponent = exponent
        self.value = value


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Integral):
        return Fraction(int(c))
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not an exact rational")


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _truncated_convolve(a: np.ndarray, b: np.ndarray, length: int) -> list[int]:
    la, lb = len(a), len(b)
    out = [0] * length
    if la == 0 or lb == 0:
        return out
    rb = b[::-1]
    for k in range(min(length, la + lb - 1)):
        lo = max(0, k - lb + 1)
        hi = min(k, la - 1)
        if lo > hi:
            continue
        # rb[lb-1-j] == b[j]; we need b[k-i] for i in lo..hi
        out[k] = int(a[lo:hi + 1].dot(rb[lb - 1 - k + lo:lb - k + hi]))
    return out


class QSeries:
    """Truncated Laurent series ``sum c_n q^n + O(q^prec)`` with exact coefficients.

    ``prec`` may be ``INF`` for an exactly known Laurent polynomial.
    """

    __slots__ = ("_val", "_prec", "_num", "_den")

    def __init__(self, coeffs: Iterable = (), valuation: int = 0, prec: float | int | None = None):
        coeffs = [_as_fraction(c) for c in coeffs]
        if prec is None:
            prec = valuation + len(coeffs)
        if prec != INF:
            prec = int(prec)
            coeffs = coeffs[: max(0, prec - valuation)]
            if valuation + len(coeffs) < prec:
                coeffs += [Fraction(0)] * (prec - valuation - len(coeffs))
        den = 1
        for c in coeffs:
            if c.denominator != 1:
                den = _lcm(den, c.denominator)
        num = [int(c * den) for c in coeffs]
        self._set(valuation, prec, num, den)

    def _set(self, val: int, prec, num: list[int], den: int) -> None:
        start = 0
        while start < len(num) and num[start] == 0:
            start += 1
        num = num[start:]
        val += start
        if prec == INF:
            while num and num[-1] == 0:
                num.pop()
            if not num:
                val = 0
        elif not num:
            val = prec
        if den != 1:
            g = den
            for x in num:
                g = math.gcd(g, x)
                if g == 1:
                    break
            if g != 1:
                num = [x // g for x in num]
                den //= g
        if not num:
            den = 1
        self._val = val
        self._prec = prec
        self._num = tuple(num)
        self._den = den

    @classmethod
    def _raw(cls, val: int, prec, num: list[int], den: int = 1) -> "QSeries":
        obj = cls.__new__(cls)
        obj._set(val, prec, list(num), den)
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_dict(cls, terms: Mapping[int, object], prec=INF) -> "QSeries":
        terms = {int(k): _as_fraction(v) for k, v in terms.items()}
        if prec != INF:
            terms = {k: v for k, v in terms.items() if k < prec}
        if not terms:
            return cls.zero(prec)
        lo = min(terms)
        hi = max(terms) + 1 if prec == INF else prec
        return cls([terms.get(n, 0) for n in range(lo, hi)], lo, prec)

    @classmethod
    def zero(cls, prec=INF) -> "QSeries":
        return cls._raw(0 if prec == INF else int(prec), prec, [], 1)

    @classmethod
    def constant(cls, c, prec=INF) -> "QSeries":
        return cls.from_dict({0: c}, prec)

    @classmethod
    def monomial(cls, n: int, c=1, prec=INF) -> "QSeries":
        return cls.from_dict({n: c}, prec)

    # -- basic accessors --------------------------------------------------
    @property
    def valuation(self) -> int:
        return self._val

    @property
    def prec(self):
        return self._prec

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not self._num

    def is_exact(self) -> bool:
        return self._prec == INF

    def is_integral(self) -> bool:
        return self._den == 1

    @property
    def top(self) -> int:
        """One past the last stored exponent."""
        return self._val + len(self._num)

    def __getitem__(self, n: int):
        return self.coeff(n)

    def coeff(self, n: int):
        if n >= self._prec:
            raise PrecisionError(f"coefficient of q^{n} unknown (series is O(q^{self._prec}))")
        i = n - self._val
        if i < 0 or i >= len(self._num):
            return 0
        c = self._num[i]
        if self._den == 1:
            return c
        return Fraction(c, self._den)

    def coefficients(self, start: int | None = None, stop: int | None = None) -> list:
        start = self._val if start is None else start
        if stop is None:
            stop = self.top if self._prec == INF else self._prec
        return [self.coeff(n) for n in range(start, stop)]

    def items(self):
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for i, c in enumerate(self._num):
            if c:
                yield self._val + i, (c if self._den == 1 else Fraction(c, self._den))

    def truncate(self, prec) -> "QSeries":
        if prec >= self._prec:
            return self
        prec = int(prec)
        if prec <= self._val:
            return QSeries.zero(prec)
        return QSeries._raw(self._val, prec, list(self._num[: prec - self._val]), self._den)

    # -- ring structure ---------------------------------------------------
    def _dense(self, start: int, stop: int, den: int) -> list[int]:
        scale = den // self._den
        out = [0] * (stop - start)
        lo = max(start, self._val)
        hi = min(stop, self.top)
        for n in range(lo, hi):
            out[n - start] = self._num[n - self._val] * scale
        return out

    @staticmethod
    def _coerce(other) -> "QSeries | None":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (Integral, Rational)):
            return QSeries.constant(other)
        return None

    def _check_overlap(self, other: "QSeries") -> None:
        for a, b in ((self, other), (other, self)):
            if a._num and a._val >= b._prec:
                raise PrecisionError(
                    f"operand starting at q^{a._val} lies entirely beyond the other's O(q^{b._prec})")

    def _add(self, other: "QSeries", sign: int) -> "QSeries":
        self._check_overlap(other)
        prec = min(self._prec, other._prec)
        if other.is_zero():
            return self.truncate(prec)
        if self.is_zero() and sign == 1:
            return other.truncate(prec)
        lo = min(self._val, other._val)
        hi = max(self.top, other.top) if prec == INF else int(prec)
        den = _lcm(self._den, other._den)
        a = self._dense(lo, hi, den)
        b = other._dense(lo, hi, den)
        if sign == 1:
            num = [x + y for x, y in zip(a, b)]
        else:
            num = [x - y for x, y in zip(a, b)]
        return QSeries._raw(lo, prec, num, den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._add(self, -1)

    def __neg__(self) -> "QSeries":
        return QSeries._raw(self._val, self._prec, [-x for x in self._num], self._den)

    def scale(self, c) -> "QSeries":
        c = _as_fraction(c)
        if c == 0:
            return QSeries.zero(self._prec)
        return QSeries._raw(self._val, self._prec,
                            [x * c.numerator for x in self._num], self._den * c.denominator)

    def __mul__(self, other):
        if isinstance(other, (Integral, Rational)) and not isinstance(other, QSeries):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        val = self._val + other._val
        prec = min(self._val + other._prec, other._val + self._prec)
        if self.is_zero() or other.is_zero():
            return QSeries.zero(prec)
        if prec == INF:
            length = len(self._num) + len(other._num) - 1
        else:
            length = int(prec) - val
            if length <= 0:
                return QSeries.zero(prec)
        a = np.array(self._num[:length], dtype=object)
        b = np.array(other._num[:length], dtype=object)
        num = _truncated_convolve(a, b, length)
        return QSeries._raw(val, prec, num, self._den * other._den)

    def __rmul__(self, other):
        if isinstance(other, (Integral, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "QSeries":
        if not isinstance(n, Integral):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.invert() ** (-n)
        result = QSeries.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse; relative precision is preserved."""
        if self.is_zero():
            raise SeriesError("cannot invert a series with no known nonzero coefficient")
        v = self._val
        rel = INF if self._prec == INF else int(self._prec) - v
        if rel == INF:
            if len(self._num) != 1:
                raise PrecisionError("inverse of an exact non-monomial is an infinite series; truncate first")
            c = Fraction(self._num[0], self._den)
            return QSeries.monomial(-v, 1 / c)
        c = self._num
        d = self._den
        c0 = c[0]
        # (sum c_k t^k / d) * (sum b_k t^k) = 1  with b_k = e_k / (c0^(k+1)) * d
        # Using integer arithmetic: e_0 = 1, e_k = -sum_{j=1..k} c_j c0^(j-1) e_{k-j}
        e = [1]
        c0pow = [1]
        for _ in range(rel):
            c0pow.append(c0pow[-1] * c0)
        for k in range(1, rel):
            s = 0
            for j in range(1, min(k, len(c) - 1) + 1):
                if c[j]:
                    s += c[j] * c0pow[j - 1] * e[k - j]
            e.append(-s)
        # b_k = d * e_k / c0^(k+1)
        top = c0pow[rel] if rel > 0 else 1
        num = [d * e[k] * (top // c0pow[k + 1]) for k in range(rel)]
        den = top
        if den < 0:
            num = [-x for x in num]
            den = -den
        return QSeries._raw(-v, -v + rel, num, den)

    def __truediv__(self, other):
        if isinstance(other, (Integral, Rational)) and not isinstance(other, QSeries):
            return self.scale(1 / _as_fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    # -- comparison -------------------------------------------------------
    def mismatch(self, other: "QSeries") -> int | None:
        """First exponent where the two series disagree, on their common window."""
        prec = min(self._prec, other._prec)
        lo = min(self._val, other._val)
        hi = max(self.top, other.top) if prec == INF else int(prec)
        for n in range(lo, hi):
            if self.coeff(n) != other.coeff(n):
                return n
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.mismatch(other) is None

    __hash__ = None  # equality is window-relative, not a total identity

    # -- q-series operators ------------------------------------------------
    def ustar(self, m: int) -> "QSeries":
        """``f | U*_m``: coefficient of q^n becomes ``m * c_{mn}``."""
        if m < 1:
            raise ValueError("U* index must be positive")
        if m == 1:
            return self
        prec = INF if self._prec == INF else -((-int(self._prec)) // m)
        if self.is_zero():
            return QSeries.zero(prec)
        lo = -((-self._val) // m)
        hi = -((-self.top) // m) if prec == INF else prec
        num = []
        for n in range(lo, hi):
            i = m * n - self._val
            num.append(m * self._num[i] if 0 <= i < len(self._num) else 0)
        return QSeries._raw(lo, prec, num, self._den)

    def vee(self, m: int) -> "QSeries":
        """``f | V_m``: substitute q -> q^m."""
        if m < 1:
            raise ValueError("V index must be positive")
        if m == 1:
            return self
        prec = INF if self._prec == INF else m * int(self._prec)
        if self.is_zero():
            return QSeries.zero(prec)
        length = (len(self._num) - 1) * m + 1 if prec == INF else prec - m * self._val
        num = [0] * length
        for i, c in enumerate(self._num):
            num[i * m] = c
        return QSeries._raw(m * self._val, prec, num, self._den)

    def theta(self) -> "QSeries":
        """``q d/dq``."""
        return QSeries._raw(self._val, self._prec,
                            [(self._val + i) * c for i, c in enumerate(self._num)], self._den)

    # -- structural views -------------------------------------------------
    def principal_part(self) -> "QSeries":
        if self._prec < 0 and self._prec != INF:
            raise PrecisionError("principal part not fully known")
        return QSeries.from_dict({n: c for n, c in self.items() if n < 0})

    def constant_term(self):
        return self.coeff(0)

    def without_principal_part(self) -> "QSeries":
        return QSeries.from_dict({n: c for n, c in self.items() if n >= 0}, self._prec)

    def mod_reduce(self, modulus: int) -> "QSeries":
        """Reduce coefficients into ``[0, modulus)``; raises on non-integers."""
        if self._den != 1:
            for n, c in self.items():
                if Fraction(c).denominator != 1:
                    raise NonIntegralError(n, Fraction(c))
        return QSeries._raw(self._val, self._prec, [x % modulus for x in self._num], 1)

    def integer_coefficients(self) -> list[int]:
        if self._den != 1:
            for n, c in self.items():
                if Fraction(c).denominator != 1:
                    raise NonIntegralError(n, Fraction(c))
        return list(self._num)

    # -- text forms ---------------------------------------------------------
    def serialize(self) -> str:
        """``valuation;prec;c_val,...,c_{prec-1}`` with rationals as ``p/q``."""
        if self._prec == INF:
            raise SeriesError("exact series have no finite serialization window; truncate first")
        cs = []
        for n in range(self._val, int(self._prec)):
            c = self.coeff(n)
            c = Fraction(c)
            cs.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        return f"{self._val};{self._prec};{','.join(cs)}"

    @classmethod
    def parse(cls, text: str) -> "QSeries":
        try:
            val_s, prec_s, body = text.strip().split(";")
            val, prec = int(val_s), int(prec_s)
        except ValueError as exc:
            raise SeriesError(f"malformed series text: {text[:40]!r}") from exc
        coeffs = [Fraction(c) for c in body.split(",")] if body else []
        if val + len(coeffs) != prec:
            raise SeriesError(f"series text claims window [{val},{prec}) but holds {len(coeffs)} coefficients")
        return cls(coeffs, val, prec)

    def __repr__(self) -> str:
        return f"QSeries({self.format(8)})"

    def format(self, terms: int = 12, var: str = "q") -> str:
        parts = []
        shown = 0
        for n, c in self.items():
            if shown >= terms:
                parts.append("...")
                break
            shown += 1
            if n == 0:
                mono = str(c)
            else:
                mono = var if n == 1 else f"{var}^{n}"
                if c == 1:
                    pass
                elif c == -1:
                    mono = "-" + mono
                else:
                    mono = f"{c}*{mono}"
            parts.append(mono)
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        if self._prec != INF:
            body += f" + O({var}^{self._prec})"
        return body


def q(n: int = 1) -> QSeries:
    """The exact monomial q^n."""
    return QSeries.monomial(n)


class BiSeries:
    """Series in q2 whose coefficients are :class:`QSeries` in q1.

    Coefficients of q2^k are known for k < ``prec2``; each carries its own q1
    window.
    """

    __slots__ = ("_terms", "_prec2")

    def __init__(self, terms: Mapping[int, QSeries], prec2=INF):
        self._terms = {int(k): v for k, v in terms.items() if k < prec2}
        self._prec2 = prec2

    @classmethod
    def from_q1(cls, f: QSeries) -> "BiSeries":
        return cls({0: f})

    @classmethod
    def from_q2(cls, f: QSeries) -> "BiSeries":
        return cls({n: QSeries.constant(c) for n, c in f.items()}, f.prec)

    @property
    def prec2(self):
        return self._prec2

    def coeff(self, k: int) -> QSeries:
        if k >= self._prec2:
            raise PrecisionError(f"q2^{k} coefficient unknown (O(q2^{self._prec2}))")
        return self._terms.get(k, QSeries.zero())

    def exponents2(self) -> list[int]:
        return sorted(self._terms)

    def truncate2(self, prec2) -> "BiSeries":
        return BiSeries(self._terms, min(prec2, self._prec2))

    def __add__(self, other: "BiSeries") -> "BiSeries":
        prec2 = min(self._prec2, other._prec2)
        keys = set(self._terms) | set(other._terms)
        return BiSeries({k: self.coeff(k) + other.coeff(k) for k in keys if k < prec2}, prec2)

    def __neg__(self) -> "BiSeries":
        return BiSeries({k: -v for k, v in self._terms.items()}, self._prec2)

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def scale(self, c) -> "BiSeries":
        return BiSeries({k: v.scale(c) for k, v in self._terms.items()}, self._prec2)

    def _val2(self):
        return min(self._terms) if self._terms else self._prec2

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        if not isinstance(other, BiSeries):
            return self.scale(other)
        va, vb = self._val2(), other._val2()
        prec2 = min(va + other._prec2, vb + self._prec2)
        out: dict[int, QSeries] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                k = i + j
                if k >= prec2:
                    continue
                term = a * b
                out[k] = out[k] + term if k in out else term
        return BiSeries(out, prec2)

    def mismatch(self, other: "BiSeries", max1: int | None = None, max2: int | None = None):
        """First ``(q1-exponent, q2-exponent)`` where the two disagree, if any."""
        prec2 = min(self._prec2, other._prec2)
        keys = sorted(set(self._terms) | set(other._terms))
        for k in keys:
            if k >= prec2 or (max2 is not None and k > max2):
                continue
            a, b = self.coeff(k), other.coeff(k)
            if max1 is not None:
                top = max1 + 1
                a = a.truncate(top)
                b = b.truncate(top)
            n = a.mismatch(b)
            if n is not None:
                return n, k
        return None
