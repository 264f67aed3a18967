"""Truncated big Witt vectors ``W(A0) = 1 + t A0[[t]]``.

A Witt vector is the power series ``1 + a_1 t + ... + a_L t^L``; Witt addition
is multiplication of series.  Ghost components are defined by
``t f'/f = sum w_n t^n``, i.e. ``w_n = n a_n - sum_{k<n} w_k a_{n-k}``.

Witt multiplication uses universal polynomials ``P_n`` in ``a_1..a_n, b_1..b_n``
with ``w_n(P) = w_n(a) w_n(b)``.  They are built once over the integers from
``n P_n = W_n + sum_{k<n} W_k P_{n-k}`` (with ``W_k = w_k(a) w_k(b)``); the
division by ``n`` is checked to be exact, which certifies integrality.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from .errors import InsufficientPrecision, InvalidInput
from .padic_core import AdicScalar, RingDescriptor

DEFAULT_LENGTH = 8

# sparse integer polynomials: {monomial: coeff}, monomial a sorted tuple of
# (var, exp) with var 2*i for a_i and 2*i+1 for b_i


def _pmul(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            d = dict(m1)
            for v, e in m2:
                d[v] = d.get(v, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _padd(f: dict, g: dict, scale: int = 1) -> dict:
    out = dict(f)
    for m, c in g.items():
        out[m] = out.get(m, 0) + scale * c
    return {k: c for k, c in out.items() if c}


def _var(v: int) -> dict:
    return {((v, 1),): 1}


class _UniversalTable:
    """Ghost polynomials and multiplication polynomials, extended on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self.ghost_a: list = [None]
        self.ghost_b: list = [None]
        self.mult: list = [None]      # P_n
        self.mult_ghost: list = [None]  # w_n(P) as a polynomial

    @staticmethod
    def _ghost(prev: list, var_of, n: int) -> dict:
        w = _padd({}, _var(var_of(n)), n)
        for k in range(1, n):
            w = _padd(w, _pmul(prev[k], _var(var_of(n - k))), -1)
        return w

    def ensure(self, length: int) -> None:
        if len(self.mult) > length:
            return
        with self._lock:
            while len(self.mult) <= length:
                n = len(self.mult)
                self.ghost_a.append(self._ghost(self.ghost_a, lambda i: 2 * i, n))
                self.ghost_b.append(self._ghost(self.ghost_b, lambda i: 2 * i + 1, n))
                target = _pmul(self.ghost_a[n], self.ghost_b[n])
                acc = dict(target)
                for k in range(1, n):
                    acc = _padd(acc, _pmul(self.mult_ghost[k], self.mult[n - k]))
                poly = {}
                for m, c in acc.items():
                    q, r = divmod(c, n)
                    if r:
                        raise AssertionError(f"P_{n} is not integral")
                    poly[m] = q
                self.mult.append(poly)
                self.mult_ghost.append(target)

    def multiplication_polynomial(self, n: int) -> dict:
        self.ensure(n)
        return self.mult[n]


_TABLE = _UniversalTable()


def universal_polynomial(n: int) -> dict:
    """``P_n`` as ``{((var, exp), ...): coeff}`` with var ``2i`` = a_i, ``2i+1`` = b_i."""
    return _TABLE.multiplication_polynomial(n)


def _evaluate(poly: dict, values: dict):
    zero = next(iter(values.values())).zero_like()
    acc = zero
    for mono, c in poly.items():
        term = None
        for v, e in mono:
            x = values[v] ** e
            term = x if term is None else term * x
        term = term * c if term is not None else zero.one_like() * c
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WittVector:
    """``1 + a_1 t + ... + a_L t^L``; coefficients beyond L are unknown."""

    ring: RingDescriptor
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise InvalidInput("truncation length must be >= 1")

    @classmethod
    def from_coefficients(cls, ring: RingDescriptor, coeffs: Sequence) -> "WittVector":
        return cls(ring, tuple(ring.scalar(c) if not isinstance(c, AdicScalar) else c
                               for c in coeffs))

    @classmethod
    def zero(cls, ring: RingDescriptor, length: int = DEFAULT_LENGTH) -> "WittVector":
        """``0_W``: the constant series 1."""
        return cls(ring, tuple(ring.zero() for _ in range(length)))

    @classmethod
    def one(cls, ring: RingDescriptor, length: int = DEFAULT_LENGTH) -> "WittVector":
        """``1_W = (1 - t)^-1``."""
        return teichmuller(ring.one(), length)

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def series(self) -> list:
        return [self.ring.one()] + list(self.coeffs)

    def _check(self, other: "WittVector") -> None:
        if self.ring != other.ring or self.length != other.length:
            raise InvalidInput("Witt vectors over different rings or truncations")

    def __add__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, other)

    def __neg__(self) -> "WittVector":
        return witt_neg(self)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, witt_neg(other))

    def __mul__(self, other: "WittVector") -> "WittVector":
        return witt_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.ring == other.ring and self.length == other.length
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None

    def ghost(self) -> list:
        return ghost(self)

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "L": self.length,
                "coefficients": [c.to_json() for c in self.coeffs],
                "ghost": [w.to_json() for w in ghost(self)]}

    def __repr__(self) -> str:
        return "W(1 + " + " + ".join(f"({c!r})t^{i + 1}" for i, c in enumerate(self.coeffs)) + ")"


def witt_add(f: WittVector, g: WittVector) -> WittVector:
    """Truncated product of the two series."""
    f._check(g)
    a, b = f.series(), g.series()
    L = f.length
    out = []
    for n in range(1, L + 1):
        acc = f.ring.zero()
        for k in range(n + 1):
            acc = acc + a[k] * b[n - k]
        out.append(acc)
    return WittVector(f.ring, tuple(out))


def witt_neg(f: WittVector) -> WittVector:
    """Additive inverse: the series inverse ``1/f``."""
    a = f.series()
    inv = [f.ring.one()]
    for n in range(1, f.length + 1):
        acc = f.ring.zero()
        for k in range(1, n + 1):
            acc = acc + a[k] * inv[n - k]
        inv.append(-acc)
    return WittVector(f.ring, tuple(inv[1:]))


def ghost(f: WittVector) -> list:
    """Ghost components ``w_1..w_L``."""
    a = f.series()
    w = [None]
    for n in range(1, f.length + 1):
        acc = a[n] * n
        for k in range(1, n):
            acc = acc - w[k] * a[n - k]
        w.append(acc)
    return w[1:]


def ghost_integers(coeffs: Sequence[int]) -> list[int]:
    """Ghost components of integer lifts (the torsion-free cover Z)."""
    a = [1] + list(coeffs)
    w = [0]
    for n in range(1, len(a)):
        w.append(n * a[n] - sum(w[k] * a[n - k] for k in range(1, n)))
    return w[1:]


def witt_mul(f: WittVector, g: WittVector) -> WittVector:
    """Witt product by specialising the universal polynomials."""
    f._check(g)
    L = f.length
    _TABLE.ensure(L)
    values = {}
    for i in range(1, L + 1):
        values[2 * i] = f.coeffs[i - 1]
        values[2 * i + 1] = g.coeffs[i - 1]
    return WittVector(f.ring, tuple(_evaluate(_TABLE.mult[n], values) for n in range(1, L + 1)))


def teichmuller(x: AdicScalar, length: int = DEFAULT_LENGTH) -> WittVector:
    """``[x] = (1 - x t)^-1 = 1 + x t + x^2 t^2 + ...``."""
    out = []
    cur = x.one_like()
    for _ in range(length):
        cur = cur * x
        out.append(cur)
    return WittVector(x.ring, tuple(out))


def teichmuller_pi(ring: RingDescriptor, length: int = DEFAULT_LENGTH) -> WittVector:
    return teichmuller(ring.pi(), length)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    level: int
    witness: tuple | None
    failing_index: int | None = None

    def to_json(self) -> dict:
        return {"member": self.member, "n": self.level,
                "witness": None if self.witness is None else [c.to_json() for c in self.witness],
                "failing_index": self.failing_index}


def pi_ideal_membership(f: WittVector, n: int) -> MembershipResult:
    """``f in [pi]^n W(A0)`` iff ``a_i = pi^(n i) c_i`` for all i; returns the c_i.

    Over Z/p^k an index with ``n i >= k`` forces ``a_i = 0``.  Over truncated
    rings a coefficient that is zero only at precision below ``n i`` cannot
    be decided and raises InsufficientPrecision.
    """
    if n < 0:
        raise InvalidInput("level n must be >= 0")
    ring = f.ring
    N = ring.precision
    witness = []
    for i, a in enumerate(f.coeffs, start=1):
        need = n * i
        if a.is_exact_zero:
            witness.append(ring.zero())
            continue
        if a.is_zero():
            if ring.exact and need >= N:
                witness.append(ring.zero())
                continue
            if a.precision < need:
                raise InsufficientPrecision(
                    f"a_{i} is zero only modulo pi^{a.precision}; need pi^{need}")
            witness.append(a.divide_by_pi(need) if need <= a.precision else ring.zero())
            continue
        if a.valuation() < need:
            return MembershipResult(False, n, None, i)
        if ring.exact and need >= N:
            witness.append(ring.zero())
        else:
            witness.append(a.divide_by_pi(need))
    return MembershipResult(True, n, tuple(witness))


def pi_tower_transition(f: WittVector) -> WittVector:
    """Multiplication by ``[pi]``: the transition map of the ``[pi]``-adic tower."""
    return witt_mul(f, teichmuller_pi(f.ring, f.length))


__all__ = [
    "DEFAULT_LENGTH", "universal_polynomial", "WittVector", "witt_add", "witt_neg", "ghost",
    "ghost_integers", "witt_mul", "teichmuller", "teichmuller_pi", "MembershipResult",
    "pi_ideal_membership", "pi_tower_transition",
]
