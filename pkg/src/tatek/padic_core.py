"""Precision-tracked arithmetic for complete pi-adic rings and their Tate rings.

Three coefficient rings A0 are shipped, all complete local with a computable
residue field:

* ``zmod``: Z/p^k, an exact finite ring (uniformizer p, "precision" k);
* ``zp``: the p-adic integers, truncated at absolute precision N;
* ``fq_powerseries``: F_q[[pi]], truncated at absolute precision N.

Norms are never materialised as floats.  The gauge norm ``eps**i`` is stored
as the integer exponent ``i`` (a :class:`NormExponent`), so larger exponents
mean smaller norms.

Zero needs care.  A zero that is known exactly (a literal ``0``, or a product
with an exact zero) has infinite precision and exponent ``+inf``.  A zero that
arose by cancellation is only known modulo ``pi**a``; its exponent is reported
as ``a`` with ``lower_bound_only`` set.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Union

from .errors import InsufficientPrecision, InvalidInput, NotInvertible
from .fields import FiniteField, gf, is_prime, prime_power

INF = math.inf

# |shift| of a TateScalar must stay inside this range
EXPONENT_RANGE = 10 ** 6


@total_ordering
@dataclass(frozen=True, eq=False)
class NormExponent:
    """Norm ``eps**value``; ``value = inf`` encodes norm 0.

    Ordered by exponent, so ``a < b`` means ``a`` is the *larger* norm.
    ``lower_bound_only`` marks exponents known only to be at least ``value``.
    """

    value: Union[int, float]
    lower_bound_only: bool = False

    @classmethod
    def infinite(cls) -> "NormExponent":
        return cls(INF)

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    def _v(self, other):
        return other.value if isinstance(other, NormExponent) else other

    def __eq__(self, other):
        if isinstance(other, (NormExponent, int, float)):
            return self.value == self._v(other)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (NormExponent, int, float)):
            return self.value < self._v(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other):
        flag = self.lower_bound_only or getattr(other, "lower_bound_only", False)
        return NormExponent(self.value + self._v(other), flag)

    __radd__ = __add__

    def __sub__(self, k: int) -> "NormExponent":
        return NormExponent(self.value - k, self.lower_bound_only)

    def __mul__(self, k: int) -> "NormExponent":
        if self.value == INF:
            return self
        return NormExponent(self.value * k, self.lower_bound_only)

    def to_json(self) -> dict:
        v = "+inf" if self.value == INF else int(self.value)
        return {"exponent": v, "lower_bound_only": self.lower_bound_only}

    def __str__(self) -> str:
        v = "+inf" if self.value == INF else str(self.value)
        return (">=" + v) if self.lower_bound_only else v

    __repr__ = __str__


def min_exponent(exps: Iterable[NormExponent]) -> NormExponent:
    """Minimum exponent (maximum norm) of a family.

    The result is exact iff the minimum is attained by an exact member.
    """
    best = None
    for e in exps:
        if best is None or e.value < best.value:
            best = e
        elif e.value == best.value and not e.lower_bound_only:
            best = e
    return best if best is not None else NormExponent.infinite()


# ---------------------------------------------------------------------------
# residue backends: raw arithmetic in A0 / pi^N


class _IntegerBackend:
    """Z/p^N with residues stored as ints in ``range(p**N)``."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.mods = [p ** k for k in range(n + 1)]
        self.zero = 0
        self.one = 1 % self.mods[n]

    def reduce(self, x: int, prec: int) -> int:
        return x % self.mods[prec]

    def add(self, x, y):
        return (x + y) % self.mods[self.n]

    def sub(self, x, y):
        return (x - y) % self.mods[self.n]

    def neg(self, x):
        return (-x) % self.mods[self.n]

    def mul(self, x, y):
        return (x * y) % self.mods[self.n]

    def is_zero(self, x) -> bool:
        return x == 0

    def valuation(self, x: int) -> int:
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def divide_pi(self, x: int, k: int) -> int:
        return x // self.mods[k]

    def times_pi(self, x: int, k: int) -> int:
        if k >= self.n:
            return 0
        return (x * self.mods[k]) % self.mods[self.n]

    def from_int(self, m: int) -> int:
        return m % self.mods[self.n]

    def digits(self, x: int, prec: int) -> list[int]:
        out = []
        for _ in range(prec):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_digits(self, ds: list[int]) -> int:
        if any(not 0 <= d < self.p for d in ds):
            raise InvalidInput(f"digits must lie in range({self.p})")
        return sum(d * self.p ** i for i, d in enumerate(ds)) % self.mods[self.n]

    def unit_inverse(self, x: int, prec: int) -> int:
        if prec == 0:
            return 0
        return pow(x, -1, self.mods[prec])

    def residue(self, x: int) -> int:
        return x % self.p

    def lift_residue(self, c: int) -> int:
        return c

    def random(self, rng: random.Random, prec: int) -> int:
        return rng.randrange(self.mods[prec])

    def to_int(self, x: int) -> int:
        return x

    # exact values (precision inf): unreduced Python ints
    def fix(self, x: int) -> int:
        return x % self.mods[self.n]

    def e_add(self, x, y):
        return x + y

    def e_neg(self, x):
        return -x

    def e_mul(self, x, y):
        return x * y

    def e_is_zero(self, x) -> bool:
        return x == 0

    def e_divide_pi(self, x: int, k: int) -> int:
        return x // self.p ** k

    def e_times_pi(self, x: int, k: int) -> int:
        return x * self.p ** k

    def e_from_int(self, m: int) -> int:
        return m

    def e_to_int(self, x: int) -> int:
        return x


class _PowerSeriesBackend:
    """F_q[[pi]]/pi^N with residues stored as length-N tuples over GF(q)."""

    def __init__(self, field: FiniteField, n: int):
        self.field = field
        self.n = n
        self.zero = (0,) * n
        self.one = (1,) + (0,) * (n - 1)

    def reduce(self, x, prec: int):
        if prec >= self.n:
            return x
        return x[:prec] + (0,) * (self.n - prec)

    def add(self, x, y):
        f = self.field
        return tuple(f.add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        f = self.field
        return tuple(f.sub(a, b) for a, b in zip(x, y))

    def neg(self, x):
        return tuple(self.field.neg(a) for a in x)

    def mul(self, x, y):
        f = self.field
        n = self.n
        out = [0] * n
        for i, a in enumerate(x):
            if a:
                for j in range(n - i):
                    b = y[j]
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return tuple(out)

    def is_zero(self, x) -> bool:
        return not any(x)

    def valuation(self, x) -> int:
        return next(i for i, a in enumerate(x) if a)

    def divide_pi(self, x, k: int):
        return x[k:] + (0,) * k

    def times_pi(self, x, k: int):
        if k >= self.n:
            return self.zero
        return (0,) * k + x[: self.n - k]

    def from_int(self, m: int):
        return (self.field.from_int(m),) + (0,) * (self.n - 1)

    def digits(self, x, prec: int) -> list[int]:
        return list(x[:prec])

    def from_digits(self, ds: list[int]):
        if any(not 0 <= d < self.field.q for d in ds):
            raise InvalidInput(f"digits must lie in range({self.field.q})")
        ds = list(ds[: self.n])
        return tuple(ds + [0] * (self.n - len(ds)))

    def unit_inverse(self, x, prec: int):
        f = self.field
        out = [0] * self.n
        if prec == 0:
            return self.zero
        a0inv = f.inv(x[0])
        out[0] = a0inv
        for k in range(1, prec):
            s = 0
            for i in range(1, k + 1):
                if x[i] and out[k - i]:
                    s = f.add(s, f.mul(x[i], out[k - i]))
            out[k] = f.neg(f.mul(a0inv, s))
        return tuple(out)

    def residue(self, x) -> int:
        return x[0]

    def lift_residue(self, c: int):
        return (c,) + (0,) * (self.n - 1)

    def random(self, rng: random.Random, prec: int):
        return tuple(rng.randrange(self.field.q) if i < prec else 0 for i in range(self.n))

    def to_int(self, x):
        raise InvalidInput("power-series residues have no integer representative")

    # exact values (precision inf): polynomials in pi, trailing zeros stripped
    @staticmethod
    def _strip(x):
        x = list(x)
        while x and not x[-1]:
            x.pop()
        return tuple(x)

    def fix(self, x):
        return tuple((list(x) + [0] * self.n)[: self.n])

    def e_add(self, x, y):
        f = self.field
        m = max(len(x), len(y))
        xs = list(x) + [0] * (m - len(x))
        ys = list(y) + [0] * (m - len(y))
        return self._strip(f.add(a, b) for a, b in zip(xs, ys))

    def e_neg(self, x):
        return tuple(self.field.neg(a) for a in x)

    def e_mul(self, x, y):
        f = self.field
        if not x or not y:
            return ()
        out = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return self._strip(out)

    def e_is_zero(self, x) -> bool:
        return not any(x)

    def e_divide_pi(self, x, k: int):
        return tuple(x[k:])

    def e_times_pi(self, x, k: int):
        return (0,) * k + tuple(x) if x else ()

    def e_from_int(self, m: int):
        return self._strip((self.field.from_int(m),))

    def e_to_int(self, x):
        raise InvalidInput("power-series elements have no integer representative")


# ---------------------------------------------------------------------------
# ring descriptors


@dataclass(frozen=True)
class RingDescriptor:
    """A complete local ring of definition A0 together with its uniformizer.

    ``p`` is the residue characteristic, ``q`` the residue field size and
    ``precision`` the number of pi-adic digits carried (for ``zmod`` it is
    the exponent k of the modulus ``p**k``, and arithmetic is exact).
    """

    kind: str
    p: int
    q: int
    precision: int

    def __post_init__(self):
        if self.kind not in ("zmod", "zp", "fq_powerseries"):
            raise InvalidInput(f"unsupported ring kind {self.kind!r}")
        if self.precision < 1:
            raise InvalidInput("precision must be >= 1")
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")
        if self.kind != "fq_powerseries" and self.q != self.p:
            raise InvalidInput("residue field of Z_p or Z/p^k is F_p")

    @classmethod
    def zmod(cls, m: int) -> "RingDescriptor":
        try:
            p, k = prime_power(m)
        except ValueError:
            raise InvalidInput(f"Z/{m} is not local: modulus must be a prime power") from None
        return cls("zmod", p, p, k)

    @classmethod
    def zp(cls, p: int, precision: int) -> "RingDescriptor":
        return cls("zp", p, p, precision)

    @classmethod
    def fq_powerseries(cls, q: int, precision: int) -> "RingDescriptor":
        try:
            p, _ = prime_power(q)
        except ValueError:
            raise InvalidInput(f"{q} is not a prime power") from None
        return cls("fq_powerseries", p, q, precision)

    @classmethod
    def from_json(cls, obj: dict) -> "RingDescriptor":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidInput("ring descriptor must be an object with a 'kind'")
        kind = obj["kind"]
        try:
            if kind == "zmod":
                return cls.zmod(int(obj["m"]))
            if kind == "zp":
                return cls.zp(int(obj["p"]), int(obj["precision"]))
            if kind == "fq_powerseries":
                return cls.fq_powerseries(int(obj["q"]), int(obj["precision"]))
        except KeyError as exc:
            raise InvalidInput(f"ring descriptor missing field {exc}") from None
        raise InvalidInput(f"unsupported ring kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "zmod":
            return {"kind": "zmod", "m": self.p ** self.precision}
        if self.kind == "zp":
            return {"kind": "zp", "p": self.p, "precision": self.precision}
        return {"kind": "fq_powerseries", "q": self.q, "precision": self.precision}

    def __str__(self) -> str:
        if self.kind == "zmod":
            return f"Z/{self.p ** self.precision}"
        if self.kind == "zp":
            return f"Z_{self.p} (prec {self.precision})"
        return f"F_{self.q}[[pi]] (prec {self.precision})"

    @property
    def exact(self) -> bool:
        """True for Z/p^k, where residues are the ring elements themselves."""
        return self.kind == "zmod"

    @property
    def is_tate(self) -> bool:
        """Whether A = A0[1/pi] is nonzero (false for Z/p^k)."""
        return self.kind != "zmod"

    @cached_property
    def backend(self):
        if self.kind == "fq_powerseries":
            return _PowerSeriesBackend(self.residue_field, self.precision)
        return _IntegerBackend(self.p, self.precision)

    @cached_property
    def residue_field(self) -> FiniteField:
        return gf(self.q)

    def with_precision(self, precision: int) -> "RingDescriptor":
        if self.kind == "zmod":
            return RingDescriptor("zmod", self.p, self.q, precision)
        return RingDescriptor(self.kind, self.p, self.q, precision)

    # constructors ---------------------------------------------------------

    def scalar(self, x=0) -> "AdicScalar":
        """Element of A0 from an int, digit list or existing scalar."""
        if isinstance(x, AdicScalar):
            if x.ring != self:
                raise InvalidInput("scalar belongs to a different ring")
            return x
        if isinstance(x, (list, tuple)):
            return AdicScalar(self, self.backend.from_digits(list(x)), self.precision)
        if isinstance(x, int):
            if x == 0:
                return self.zero()
            if self.exact:
                return AdicScalar(self, self.backend.from_int(x), self.precision)
            return AdicScalar(self, self.backend.e_from_int(x), INF)
        raise InvalidInput(f"cannot build a scalar from {x!r}")

    @cached_property
    def _zero(self) -> "AdicScalar":
        return AdicScalar(self, self.backend.e_from_int(0), INF)

    def zero(self) -> "AdicScalar":
        return self._zero

    def one(self) -> "AdicScalar":
        return self.scalar(1)

    def pi(self) -> "AdicScalar":
        return self.one().times_pi(1)

    def tate(self, x=0, shift: int = 0) -> "TateScalar":
        """Element of A = A0[1/pi]: ``x * pi**(-shift)`` with x an int,
        Fraction (zp only), digit list or scalar."""
        if not self.is_tate:
            raise InvalidInput(f"{self}[1/pi] is the zero ring")
        if isinstance(x, TateScalar):
            base = x
        elif isinstance(x, Fraction) and x.denominator != 1:
            base = TateScalar._from_fraction(self, x)
        else:
            if isinstance(x, Fraction):
                x = x.numerator
            base = TateScalar.from_adic(self.scalar(x))
        if shift:
            base = base * TateScalar.pi_power(self, -shift)
        return base


# ---------------------------------------------------------------------------
# elements of A0


class AdicScalar:
    """Element of A0 known modulo ``pi**precision``.

    ``precision`` is an int in ``[0, N]``, or ``inf`` for an element known
    exactly (integers, pi and everything built from them by ring operations).
    Exact values are stored unreduced; binary operations take the minimum
    precision of their operands.
    """

    __slots__ = ("ring", "value", "precision")

    def __init__(self, ring: RingDescriptor, value, precision):
        self.ring = ring
        self.value = value
        self.precision = precision

    # helpers
    def _coerce(self, other) -> "AdicScalar":
        if isinstance(other, AdicScalar):
            if other.ring != self.ring:
                raise InvalidInput("scalars from different rings")
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        return NotImplemented

    @property
    def is_exact(self) -> bool:
        return self.precision == INF

    def _fixed(self):
        """Value in the fixed-size residue representation mod pi^N."""
        return self.ring.backend.fix(self.value) if self.is_exact else self.value

    def _make(self, value, prec) -> "AdicScalar":
        return AdicScalar(self.ring, self.ring.backend.reduce(value, prec), prec)

    @property
    def is_exact_zero(self) -> bool:
        return self.is_exact and self.ring.backend.e_is_zero(self.value)

    def is_zero(self) -> bool:
        return self.ring.backend.is_zero(self.value)

    def zero_like(self) -> "AdicScalar":
        return self.ring.zero()

    def one_like(self) -> "AdicScalar":
        return self.ring.one()

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        b = self.ring.backend
        if self.is_exact and other.is_exact:
            return AdicScalar(self.ring, b.e_add(self.value, other.value), INF)
        prec = min(self.precision, other.precision)
        return self._make(b.add(self._fixed(), other._fixed()), prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return AdicScalar(self.ring, self.ring.backend.e_neg(self.value), INF)
        return self._make(self.ring.backend.neg(self.value), self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero or other.is_exact_zero:
            return self.ring.zero()
        b = self.ring.backend
        if self.is_exact and other.is_exact:
            return AdicScalar(self.ring, b.e_mul(self.value, other.value), INF)
        prec = min(self.precision, other.precision)
        return self._make(b.mul(self._fixed(), other._fixed()), prec)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.one_like()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (AdicScalar, int)) else NotImplemented
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return self.ring.backend.e_is_zero((self - other).value)
        prec = min(self.precision, other.precision)
        b = self.ring.backend
        return b.reduce(self._fixed(), prec) == b.reduce(other._fixed(), prec)

    __hash__ = None

    # valuation
    def valuation(self):
        """Exact valuation, or the precision (a lower bound) for zeros."""
        return self.val().value

    def val(self) -> NormExponent:
        if self.is_exact_zero:
            return NormExponent.infinite()
        if self.is_zero():
            if self.ring.exact and self.precision == self.ring.precision:
                return NormExponent.infinite()
            return NormExponent(self.precision, True)
        return NormExponent(self.ring.backend.valuation(self.value))

    def is_unit(self) -> bool:
        return (self.precision >= 1 and not self.is_zero()
                and self.ring.backend.valuation(self.value) == 0)

    def inverse(self) -> "AdicScalar":
        if self.is_zero():
            raise InsufficientPrecision("inverse of an element indistinguishable from 0")
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit of A0")
        b = self.ring.backend
        if self.is_exact:
            one = b.e_from_int(1)
            if self.value == one or self.value == b.e_neg(one):
                return self
        prec = min(self.precision, self.ring.precision)
        return AdicScalar(self.ring, b.unit_inverse(self._fixed(), prec), prec)

    def divide_by_pi(self, k: int) -> "AdicScalar":
        """Exact quotient by ``pi**k``; loses k digits of precision."""
        if k == 0 or self.is_exact_zero:
            return self
        v = self.valuation()
        if v < k:
            if self.is_zero():
                raise InsufficientPrecision(f"cannot certify divisibility by pi^{k}")
            raise InvalidInput(f"element of valuation {v} is not divisible by pi^{k}")
        b = self.ring.backend
        if self.is_exact:
            return AdicScalar(self.ring, b.e_divide_pi(self.value, k), INF)
        return self._make(b.divide_pi(self.value, k), self.precision - k)

    def times_pi(self, k: int) -> "AdicScalar":
        if k == 0 or self.is_exact_zero:
            return self
        b = self.ring.backend
        if self.is_exact:
            if self.ring.exact:
                return self._make(b.times_pi(b.fix(self.value), k), self.ring.precision)
            return AdicScalar(self.ring, b.e_times_pi(self.value, k), INF)
        prec = min(self.precision + k, self.ring.precision)
        return self._make(b.times_pi(self.value, k), prec)

    def with_precision(self, prec: int) -> "AdicScalar":
        """Reduce to a coarser precision (never refines)."""
        if self.is_exact_zero or prec == INF:
            return self
        prec = min(prec, self.precision, self.ring.precision)
        return self._make(self._fixed(), prec)

    def residue(self) -> int:
        """Image in the residue field A0/pi."""
        if self.precision < 1:
            raise InsufficientPrecision("no digits known")
        if self.is_exact_zero:
            return 0
        return self.ring.backend.residue(self._fixed())

    def digits(self) -> list[int]:
        prec = self.ring.precision if self.is_exact else self.precision
        return self.ring.backend.digits(self._fixed(), prec)

    def to_int(self) -> int:
        if self.is_exact:
            return self.ring.backend.e_to_int(self.value)
        return self.ring.backend.to_int(self.value)

    def to_json(self):
        if self.is_exact_zero:
            return 0
        if self.is_exact and self.ring.kind == "zp":
            return self.value
        out = {"digits": self.digits(), "shift": 0}
        if not self.is_exact:
            out["precision"] = self.precision
        return out

    def __repr__(self) -> str:
        if self.is_exact_zero:
            return "0"
        if self.is_exact:
            return f"{list(self.value)}" if self.ring.kind == "fq_powerseries" else str(self.value)
        if self.ring.kind == "fq_powerseries":
            return f"{self.digits()}+O(pi^{self.precision})"
        return f"{self.value}+O({self.ring.p}^{self.precision})"


# ---------------------------------------------------------------------------
# elements of A = A0[1/pi]


class TateScalar:
    """Element ``unit * pi**(-shift)`` of A = A0[1/pi].

    The unit part carries the *relative* precision.  Zeros carry an absolute
    precision instead: ``unit`` is then a zero of precision 0 (or ``inf`` for
    an exact zero) and ``-shift`` is the absolute precision.
    """

    __slots__ = ("ring", "unit", "shift")

    def __init__(self, ring: RingDescriptor, unit: AdicScalar, shift: int):
        if abs(shift) > EXPONENT_RANGE:
            raise OverflowError(f"pi-exponent {-shift} outside the configured range")
        self.ring = ring
        self.unit = unit
        self.shift = shift

    @classmethod
    def exact_zero(cls, ring: RingDescriptor) -> "TateScalar":
        return cls(ring, ring.zero(), 0)

    @classmethod
    def zero_at(cls, ring: RingDescriptor, absprec: int) -> "TateScalar":
        return cls(ring, AdicScalar(ring, ring.backend.zero, 0), -absprec)

    @classmethod
    def pi_power(cls, ring: RingDescriptor, k: int) -> "TateScalar":
        return cls(ring, ring.one(), -k)

    @classmethod
    def from_adic(cls, x: AdicScalar) -> "TateScalar":
        ring = x.ring
        if not ring.is_tate:
            raise InvalidInput(f"{ring}[1/pi] is the zero ring")
        if x.is_exact_zero:
            return cls.exact_zero(ring)
        if x.is_zero():
            return cls.zero_at(ring, x.precision)
        v = x.valuation()
        return cls(ring, x.divide_by_pi(v), -v)

    @classmethod
    def _from_fraction(cls, ring: RingDescriptor, x: Fraction) -> "TateScalar":
        if ring.kind != "zp":
            raise InvalidInput("fractions are only supported over Q_p")
        if x == 0:
            return cls.exact_zero(ring)
        p = ring.p
        num, den = x.numerator, x.denominator
        vn = vd = 0
        while num % p == 0:
            num //= p
            vn += 1
        while den % p == 0:
            den //= p
            vd += 1
        u = ring.scalar(num) * ring.scalar(den).inverse()
        return cls(ring, u, vd - vn)

    def _coerce(self, other):
        if isinstance(other, TateScalar):
            if other.ring != self.ring:
                raise InvalidInput("scalars from different rings")
            return other
        if isinstance(other, int):
            return TateScalar.from_adic(self.ring.scalar(other))
        if isinstance(other, AdicScalar):
            return TateScalar.from_adic(other)
        return NotImplemented

    @property
    def is_exact_zero(self) -> bool:
        return self.unit.is_exact_zero

    def is_zero(self) -> bool:
        return self.unit.is_zero()

    @property
    def absprec(self):
        """Absolute precision: the element is known modulo ``pi**absprec``."""
        return self.unit.precision - self.shift

    @property
    def relprec(self):
        return self.unit.precision

    def zero_like(self) -> "TateScalar":
        return TateScalar.exact_zero(self.ring)

    def one_like(self) -> "TateScalar":
        return TateScalar(self.ring, self.ring.one(), 0)

    def valuation(self):
        return self.val().value

    def val(self) -> NormExponent:
        if self.is_exact_zero:
            return NormExponent.infinite()
        if self.is_zero():
            return NormExponent(self.absprec, True)
        return NormExponent(-self.shift)

    def is_integral(self) -> bool:
        return self.valuation() >= 0

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        ring = self.ring
        if self.unit.is_exact and other.unit.is_exact:
            m = min(-self.shift, -other.shift)
            raw = (self.unit.times_pi(-self.shift - m) + other.unit.times_pi(-other.shift - m))
            if raw.is_exact_zero:
                return TateScalar.exact_zero(ring)
            v = raw.valuation()
            return TateScalar(ring, raw.divide_by_pi(v), -(m + v))
        a = min(self.absprec, other.absprec)
        nonzero = [x for x in (self, other) if not x.is_zero()]
        if not nonzero:
            return TateScalar.zero_at(ring, a)
        m = min(-x.shift for x in nonzero)
        if a <= m:
            return TateScalar.zero_at(ring, a)
        b = ring.backend
        raw = b.zero
        for x in nonzero:
            raw = b.add(raw, b.times_pi(x.unit._fixed(), -x.shift - m))
        # an exact operand can leave more known digits than the unit part stores
        width = min(a - m, ring.precision)
        raw = b.reduce(raw, width)
        if b.is_zero(raw):
            return TateScalar.zero_at(ring, a)
        v = b.valuation(raw)
        unit = AdicScalar(ring, b.reduce(b.divide_pi(raw, v), width - v), width - v)
        return TateScalar(ring, unit, -(m + v))

    __radd__ = __add__

    def __neg__(self):
        return TateScalar(self.ring, -self.unit, self.shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        if self.is_exact_zero or other.is_exact_zero:
            return TateScalar.exact_zero(ring)
        sz, oz = self.is_zero(), other.is_zero()
        if sz and oz:
            return TateScalar.zero_at(ring, self.absprec + other.absprec)
        if sz:
            return TateScalar.zero_at(ring, self.absprec + other.valuation())
        if oz:
            return TateScalar.zero_at(ring, other.absprec + self.valuation())
        return TateScalar(ring, self.unit * other.unit, self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self) -> "TateScalar":
        if self.is_zero():
            raise InsufficientPrecision("inverse of an element indistinguishable from 0")
        return TateScalar(self.ring, self.unit.inverse(), -self.shift)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.one_like()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, (TateScalar, AdicScalar, int)):
            return NotImplemented
        return (self - self._coerce(other)).is_zero()

    __hash__ = None

    def divide_by_pi(self, k: int) -> "TateScalar":
        return self * TateScalar.pi_power(self.ring, -k)

    def times_pi(self, k: int) -> "TateScalar":
        return self * TateScalar.pi_power(self.ring, k)

    def to_adic(self) -> AdicScalar:
        """The same element in A0; requires valuation >= 0."""
        ring = self.ring
        if self.is_exact_zero:
            return ring.zero()
        if self.is_zero():
            if self.absprec < 0:
                raise InsufficientPrecision("cannot certify integrality")
            return AdicScalar(ring, ring.backend.zero, min(self.absprec, ring.precision))
        v = -self.shift
        if v < 0:
            raise InvalidInput("element is not power bounded (negative valuation)")
        if self.unit.is_exact:
            return self.unit.times_pi(v)
        prec = min(self.absprec, ring.precision)
        b = ring.backend
        return AdicScalar(ring, b.reduce(b.times_pi(self.unit.value, v), prec), prec)

    def residue(self) -> int:
        return self.to_adic().residue()

    def to_json(self):
        if self.is_exact_zero:
            return 0
        if self.is_zero():
            return {"digits": [], "shift": self.shift, "precision": 0}
        return {"digits": self.unit.digits(), "shift": self.shift, "precision": self.relprec}

    def __repr__(self) -> str:
        if self.is_exact_zero:
            return "0"
        if self.is_zero():
            return f"O(pi^{self.absprec})"
        return f"({self.unit!r})*pi^{-self.shift}"


# ---------------------------------------------------------------------------
# dual numbers A[eps]/(eps^2), used for nil-invariance checks


class DualScalar:
    """``a + b*eps`` with ``eps**2 = 0`` over a scalar type; norm max(|a|, |b|)."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    @classmethod
    def lift(cls, x) -> "DualScalar":
        return cls(x, x.zero_like())

    def _coerce(self, other):
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, (int, AdicScalar, TateScalar)):
            x = self.a.zero_like() + other
            return DualScalar(x, x.zero_like())
        return NotImplemented

    def zero_like(self):
        z = self.a.zero_like()
        return DualScalar(z, z)

    def one_like(self):
        return DualScalar(self.a.one_like(), self.a.zero_like())

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DualScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DualScalar(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b

    __hash__ = None

    @property
    def is_exact_zero(self) -> bool:
        return self.a.is_exact_zero and self.b.is_exact_zero

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def val(self) -> NormExponent:
        return min_exponent([self.a.val(), self.b.val()])

    def valuation(self):
        return self.val().value

    def reduce(self):
        """Image modulo eps."""
        return self.a

    def inverse(self) -> "DualScalar":
        ai = self.a.inverse()
        return DualScalar(ai, -(self.b * ai * ai))

    def __repr__(self) -> str:
        return f"({self.a!r} + {self.b!r}*eps)"


# ---------------------------------------------------------------------------
# norms


def val(x) -> NormExponent:
    """Gauge-norm exponent ``max{i : x in pi^i A0}``."""
    return x.val()


@dataclass(frozen=True)
class UnitalElement:
    """Element ``(a, n)`` of the unitalization ``A x Z`` of a non-unital normed ring."""

    a: object
    n: int

    def norm(self) -> NormExponent:
        trivial = NormExponent(0) if self.n != 0 else NormExponent.infinite()
        return min_exponent([self.a.val(), trivial])

    def __add__(self, other: "UnitalElement") -> "UnitalElement":
        return UnitalElement(self.a + other.a, self.n + other.n)

    def __mul__(self, other: "UnitalElement") -> "UnitalElement":
        return UnitalElement(self.a * other.a + self.a * other.n + other.a * self.n,
                             self.n * other.n)


def unitalize(a, n: int) -> UnitalElement:
    """Embed ``(a, n)`` in the unitalization; the norm is max(|a|, |n|_trivial)."""
    return UnitalElement(a, n)


def gauge_exponent(x: TateScalar, uniformizer_power: int = 1, conductor: int = 0) -> NormExponent:
    """Gauge exponent for the ring of definition ``F + pi^c A0`` and uniformizer ``pi^k``.

    ``F`` is the ring of Teichmueller-style constants (the prime ring for
    ``zp``, the constant field for ``fq_powerseries``), ``c = conductor`` and
    ``k = uniformizer_power``.  With the defaults this is :func:`val`.
    """
    if x.is_zero():
        return x.val()
    k = uniformizer_power
    i = math.floor(x.valuation() / k)
    while not _in_subring(x.times_pi(-k * i), conductor):
        i -= 1
    return NormExponent(i)


def _in_subring(y: TateScalar, conductor: int) -> bool:
    if y.valuation() < 0:
        return False
    if y.ring.kind != "fq_powerseries" or conductor <= 1:
        return True
    ds = y.to_adic().digits()
    return all(d == 0 for d in ds[1:conductor])


# ---------------------------------------------------------------------------
# random elements (used by the verification suites and tests)


def random_adic(ring: RingDescriptor, rng: random.Random, min_val: int = 0,
                unit: bool = False) -> AdicScalar:
    b = ring.backend
    if unit:
        raw = b.random(rng, ring.precision)
        raw = b.add(b.times_pi(b.divide_pi(raw, 1), 1),
                    b.lift_residue(ring.residue_field.random(rng, nonzero=True)))
        return AdicScalar(ring, raw, ring.precision)
    raw = b.times_pi(b.random(rng, ring.precision), min_val)
    if b.is_zero(raw):
        return ring.zero()
    return AdicScalar(ring, raw, ring.precision)


def random_tate(ring: RingDescriptor, rng: random.Random, vmin: int = -3, vmax: int = 3,
                zero_weight: float = 0.0) -> TateScalar:
    if zero_weight and rng.random() < zero_weight:
        return TateScalar.exact_zero(ring)
    u = random_adic(ring, rng, unit=True)
    return TateScalar(ring, u, -rng.randint(vmin, vmax))


# ---------------------------------------------------------------------------
# Hensel lifting of idempotents


@dataclass(frozen=True)
class HenselLift:
    idempotent: "Mat"
    iterations: int
    defect_valuations: tuple


def hensel_lift_idempotent(e0, target_precision: int | None = None) -> HenselLift:
    """Lift an idempotent mod pi to an idempotent mod ``pi**target_precision``.

    Newton iteration ``e <- 3e^2 - 2e^3``; the defect ``e^2 - e`` squares its
    pi-adic order at each step.  Every iterate is a polynomial in ``e0``, so
    the lift commutes with anything ``e0`` commutes with.
    """
    from .linalg import Mat

    ring = e0[0, 0].ring
    target = ring.precision if target_precision is None else target_precision
    if target > ring.precision:
        raise InsufficientPrecision(f"ring carries only {ring.precision} digits")
    e = e0.map(lambda x: x.with_precision(target))

    def defect(m):
        return (m @ m - m).norm_exponent()

    d = defect(e)
    if d.value < 1:
        raise InvalidInput("input is not idempotent modulo pi")
    history = [d]
    it = 0
    while d.value < target:
        e2 = e @ e
        e = e2 * 3 - (e2 @ e) * 2
        it += 1
        d = defect(e)
        history.append(d)
    return HenselLift(e, it, tuple(history))


__all__ = [
    "INF", "NormExponent", "min_exponent", "RingDescriptor", "AdicScalar", "TateScalar",
    "DualScalar", "UnitalElement", "unitalize", "val", "gauge_exponent",
    "random_adic", "random_tate", "HenselLift", "hensel_lift_idempotent",
]
