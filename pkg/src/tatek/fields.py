"""Finite fields GF(q) used as residue fields.

Elements are plain ints in ``range(q)``.  For ``q = p**k`` with ``k > 1`` the int
encodes the coefficient vector of a polynomial over GF(p) in base ``p``
(coefficient of ``x**i`` is digit ``i``), reduced modulo a fixed irreducible
polynomial of degree ``k``.
"""
from __future__ import annotations

import functools
import random


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    # a, b, mod little-endian; mod monic of degree k
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return (prod + [0] * k)[:k]


def _is_irreducible(mod: list[int], p: int) -> bool:
    """Irreducibility test by exhaustive trial division (small fields only)."""
    k = len(mod) - 1
    for deg in range(1, k // 2 + 1):
        for code in range(p ** deg):
            cand = [(code // p ** i) % p for i in range(deg)] + [1]
            if _poly_rem(mod, cand, p) == [0] * deg:
                return False
    return True


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    for d in range(len(a) - 1, dm - 1, -1):
        c = a[d]
        if c:
            for i in range(dm + 1):
                a[d - dm + i] = (a[d - dm + i] - c * m[i]) % p
    return (a + [0] * dm)[:dm]


@functools.lru_cache(maxsize=None)
def _irreducible(p: int, k: int) -> tuple[int, ...]:
    for code in range(p ** k):
        mod = [(code // p ** i) % p for i in range(k)] + [1]
        if mod[0] and _is_irreducible(mod, p):
            return tuple(mod)
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class FiniteField:
    """Arithmetic in GF(q); instances are cached per ``q`` via :func:`gf`."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.degree = prime_power(q)
        if self.degree > 1:
            self.modulus = _irreducible(self.p, self.degree)
            self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def _to_vec(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.degree)]

    def _from_vec(self, v: list[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(v))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        mod = list(self.modulus)
        order = q - 1
        factors = prime_factors(order)
        for g in range(2, q):
            gv = self._to_vec(g)
            powers = [1]
            cur = [1] + [0] * (self.degree - 1)
            for _ in range(order - 1):
                cur = _poly_mulmod(cur, gv, mod, p)
                powers.append(self._from_vec(cur))
            if len(set(powers)) == order and all(powers[order // r] != 1 for r in factors):
                self._exp = powers + powers
                self._log = {v: i for i, v in enumerate(powers)}
                return
        raise AssertionError("GF(q)^x is cyclic; a generator must exist")

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        return self._from_vec([(-c) % self.p for c in self._to_vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.degree == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.degree == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    def random(self, rng: random.Random, nonzero: bool = False) -> int:
        return rng.randrange(1, self.q) if nonzero else rng.randrange(self.q)

    def rank(self, rows: list[list[int]]) -> int:
        """Rank of a matrix over GF(q) by Gaussian elimination."""
        m = [list(r) for r in rows]
        rank = 0
        ncols = len(m[0]) if m else 0
        for c in range(ncols):
            piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = self.inv(m[rank][c])
            m[rank] = [self.mul(inv, x) for x in m[rank]]
            for r in range(len(m)):
                if r != rank and m[r][c]:
                    f = m[r][c]
                    m[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(m[r], m[rank])]
            rank += 1
        return rank


@functools.lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    return FiniteField(q)
