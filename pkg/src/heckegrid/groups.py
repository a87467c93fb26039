"""The groups N+S generated by Gamma_0(N) and Atkin-Lehner involutions."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as increasing ``(p, k)`` pairs."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


def is_exact_divisor(q: int, n: int) -> bool:
    return q >= 1 and n % q == 0 and gcd(q, n // q) == 1


def exact_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if is_exact_divisor(d, n)]


def hall_product(a: int, b: int) -> int:
    return a * b // gcd(a, b) ** 2


def hall_closure(gens: Iterable[int]) -> frozenset[int]:
    closed = {1}
    frontier = set(gens) - {1}
    while frontier:
        new = set()
        for g in frontier:
            for h in list(closed) + [g]:
                x = hall_product(g, h)
                if x not in closed and x not in frontier:
                    new.add(x)
            closed.add(g)
        frontier = new - closed
    return frozenset(closed - {1})


@dataclass(frozen=True)
class Group:
    """Gamma = N+S with S the (maximal) Hall-closed set of exact divisors, 1 excluded."""

    N: int
    S: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("level must be positive")
        for q in self.S:
            if not is_exact_divisor(q, self.N):
                raise ValueError(f"{q} is not an exact divisor of {self.N}")
        object.__setattr__(self, "S", hall_closure(self.S))

    @classmethod
    def parse(cls, text: str) -> "Group":
        text = text.strip().replace(" ", "")
        if "+" not in text:
            return normalize(int(text))
        head, _, tail = text.partition("+")
        n = int(head)
        if not tail:
            return normalize(n, exact_divisors(n))
        return normalize(n, [int(x) for x in tail.split(",")])

    @property
    def is_full(self) -> bool:
        return len(self.S) > 0 and self.S == frozenset(exact_divisors(self.N)) - {1}

    def __str__(self) -> str:
        if not self.S:
            return str(self.N)
        if self.is_full:
            return f"{self.N}+"
        return f"{self.N}+" + ",".join(str(x) for x in sorted(self.S))


def normalize(N: int, S_raw: Iterable[int] = ()) -> Group:
    S_raw = list(S_raw)
    for q in S_raw:
        if not is_exact_divisor(q, N):
            raise ValueError(f"{q} is not an exact divisor of {N}")
    return Group(N, frozenset(S_raw))


def reduce_p(G: Group, p: int) -> Group:
    """Gamma^(p) = N/(p,N) + {Q in S : Q | N/(p,N)}."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = G.N // gcd(p, G.N)
    return Group(n, frozenset(q for q in G.S if n % q == 0))


def reduce_m(G: Group, m: int) -> Group:
    if m < 1:
        raise ValueError("m must be positive")
    for p, k in factorize(m):
        for _ in range(k):
            G = reduce_p(G, p)
    return G
