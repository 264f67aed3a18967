"""Independent plain-integer oracles; nothing here imports tatek."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def valuation(x: int, p: int) -> float:
    """p-adic valuation of an integer by repeated division."""
    if x == 0:
        return math.inf
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def valuation_mod(x: int, p: int, k: int) -> float:
    """Valuation of a residue mod p^k (inf for 0)."""
    x %= p ** k
    return math.inf if x == 0 else valuation(x, p)


def powerseries_mul(a: list[int], b: list[int], p: int, n: int) -> list[int]:
    """Product in F_p[[x]]/x^n of digit lists (constant term first)."""
    out = [0] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[:n - i]):
            out[i + j] = (out[i + j] + x * y) % p
    return out


# Laurent polynomials as {exponent: int}


def laurent_mul(f: dict, g: dict, mod: int) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            out[e1 + e2] = (out.get(e1 + e2, 0) + c1 * c2) % mod
    return {e: c for e, c in out.items() if c % mod}


def laurent_sub(f: dict, g: dict, mod: int) -> dict:
    out = dict(f)
    for e, c in g.items():
        out[e] = (out.get(e, 0) - c) % mod
    return {e: c for e, c in out.items() if c % mod}


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_int(m: list[list[int]], mod: int) -> int:
    """Leibniz determinant modulo ``mod``."""
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = _perm_sign(perm)
        for i in range(n):
            term *= m[i][perm[i]]
        total += term
    return total % mod


def det_laurent(m: list[list[dict]], mod: int) -> dict:
    """Leibniz determinant of a matrix of Laurent polynomials modulo ``mod``."""
    n = len(m)
    total: dict = {}
    for perm in itertools.permutations(range(n)):
        term = {0: _perm_sign(perm) % mod}
        for i in range(n):
            term = laurent_mul(term, m[i][perm[i]], mod)
        for e, c in term.items():
            total[e] = (total.get(e, 0) + c) % mod
    return {e: c for e, c in total.items() if c}


def residue_t_order(m: list[list[dict]], p: int) -> int:
    """``k`` with ``det M = c t^k mod p``; raises if det mod p is not a monomial."""
    d = det_laurent([[{e: c % p for e, c in x.items()} for x in row] for row in m], p)
    if len(d) != 1:
        raise ValueError(f"det mod p is not a monomial: {d}")
    return next(iter(d))


# unit groups


def unit_power_counts(p: int, n: int) -> dict[int, int]:
    """For every d dividing #(Z/p^n)^x, the number of units u with u^d = 1."""
    mod = p ** n
    units = [u for u in range(mod) if u % p]
    order = len(units)
    return {d: sum(1 for u in units if pow(u, d, mod) == 1)
            for d in range(1, order + 1) if order % d == 0}


def cyclic_power_counts(orders, order: int) -> dict[int, int]:
    """Same count for a product of cyclic groups of the given orders."""
    return {d: math.prod(math.gcd(d, m) for m in orders)
            for d in range(1, order + 1) if order % d == 0}


# tame symbol over Q_p


def tame_symbol(va: int, ua: int, vb: int, ub: int, p: int) -> int:
    """``(-1)^(va vb) ua^vb ub^-va mod p`` for a = p^va ua, b = p^vb ub."""
    sign = -1 if (va * vb) % 2 else 1
    x = sign * pow(ua, vb, p) * pow(ub, -va, p)
    return x % p


# big Witt vectors over Z, via ghost components


def ghost(coeffs: list[int]) -> list[int]:
    """Ghost components of ``1 + a_1 t + ...`` from ``t f'/f``."""
    a = [1] + list(coeffs)
    w = [0]
    for n in range(1, len(a)):
        w.append(n * a[n] - sum(w[k] * a[n - k] for k in range(1, n)))
    return w[1:]


def from_ghost(w: list) -> list[Fraction]:
    """Invert the ghost map over Q."""
    a = [Fraction(1)]
    ww = [0] + list(w)
    for n in range(1, len(ww)):
        a.append(Fraction(ww[n] + sum(ww[k] * a[n - k] for k in range(1, n))) / n)
    return a[1:]


def witt_mul(a: list[int], b: list[int], mod: int) -> list[int]:
    """Witt product of integer lifts, reduced mod ``mod`` (integrality is asserted)."""
    prod = [x * y for x, y in zip(ghost(a), ghost(b))]
    out = []
    for c in from_ghost(prod):
        assert c.denominator == 1
        out.append(int(c) % mod)
    return out


def witt_add(a: list[int], b: list[int], mod: int) -> list[int]:
    """Witt sum: the truncated product of the series."""
    x, y = [1] + list(a), [1] + list(b)
    return [sum(x[k] * y[n - k] for k in range(n + 1)) % mod for n in range(1, len(x))]


def solve_teichmuller_multiple(f: list[int], c: int, mod: int) -> list[int] | None:
    """Search ``w`` with ``[c] * w = f`` over Z/mod, one coefficient at a time.

    Coefficient i of the product depends on ``w_1..w_i`` and is affine in
    ``w_i``; the slope is read off two evaluations and checked at a third.
    """
    L = len(f)
    tc = [pow(c, i, mod) for i in range(1, L + 1)]
    w = [0] * L
    for i in range(L):
        def coeff(x):
            trial = w[:i] + [x] + [0] * (L - i - 1)
            return witt_mul(tc, trial, mod)[i]
        base = coeff(0)
        slope = (coeff(1) - base) % mod
        assert (coeff(7) - base - 7 * slope) % mod == 0
        hit = next((x for x in range(mod) if (base + slope * x - f[i]) % mod == 0), None)
        if hit is None:
            return None
        w[i] = hit
    return w if witt_mul(tc, w, mod) == [x % mod for x in f] else None
