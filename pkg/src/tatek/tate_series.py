"""Convergent power series, Laurent polynomials and simplex rings.

A :class:`TateSeries` is a finite truncation of an element of
``A<t_1..t_m>_rho`` with ``rho = eps**(-j)``.  Coefficients are either
:class:`AdicScalar` (series over A0) or :class:`TateScalar` (series over A).
Terms of total degree above ``degree_bound`` are unknown; a series that has
never lost such terms is ``truncated=False`` and is then an honest polynomial.

Simplex rings ``A<Delta^m_{a0}>`` are stored with ``t_0`` eliminated through
``t_0 = a0 - t_1 - ... - t_m``; all structure maps are substitutions of
linear forms in that representation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidInput, NotInvertible, WindowOverflow
from .padic_core import (
    INF, AdicScalar, NormExponent, RingDescriptor, TateScalar, min_exponent,
)

Index = tuple


def _coerce_scalar(ring: RingDescriptor, integral: bool, x):
    if integral:
        if isinstance(x, TateScalar):
            return x.to_adic()
        return ring.scalar(x)
    if isinstance(x, TateScalar):
        return x
    if isinstance(x, AdicScalar):
        return TateScalar.from_adic(x)
    return ring.tate(x)


def _zero(ring: RingDescriptor, integral: bool):
    return ring.zero() if integral else TateScalar.exact_zero(ring)


# ---------------------------------------------------------------------------


class TateSeries:
    """Truncated element of ``A0<t>_rho`` or ``A<t>_rho`` in ``nvars`` variables."""

    __slots__ = ("ring", "nvars", "coeffs", "radius", "degree_bound", "truncated",
                 "tail_floor", "integral")

    def __init__(self, ring: RingDescriptor, nvars: int, coeffs: Mapping[Index, object],
                 radius: int = 0, degree_bound: int = 8, truncated: bool = False,
                 tail_floor=0, integral: bool | None = None):
        if radius < 0:
            raise InvalidInput("radius index j must be >= 0")
        if integral is None:
            integral = not ring.is_tate or any(isinstance(c, AdicScalar) for c in coeffs.values())
        clean = {}
        for idx, c in coeffs.items():
            idx = tuple(int(e) for e in idx)
            if len(idx) != nvars or any(e < 0 for e in idx):
                raise InvalidInput(f"bad multi-index {idx} for {nvars} variables")
            c = _coerce_scalar(ring, integral, c)
            if sum(idx) > degree_bound:
                if not c.is_zero():
                    truncated = True
                continue
            if c.is_exact_zero:
                continue
            clean[idx] = clean[idx] + c if idx in clean else c
        self.ring = ring
        self.nvars = nvars
        self.coeffs = clean
        self.radius = radius
        self.degree_bound = degree_bound
        self.truncated = truncated
        self.tail_floor = tail_floor if truncated else INF
        self.integral = integral

    # constructors ---------------------------------------------------------

    def _new(self, coeffs, nvars=None, radius=None, degree_bound=None, truncated=None,
             tail_floor=None) -> "TateSeries":
        tr = self.truncated if truncated is None else truncated
        return TateSeries(self.ring, self.nvars if nvars is None else nvars, coeffs,
                          self.radius if radius is None else radius,
                          self.degree_bound if degree_bound is None else degree_bound,
                          tr, self.tail_floor if tail_floor is None else tail_floor,
                          self.integral)

    @classmethod
    def constant(cls, ring, nvars, c, radius=0, degree_bound=8, integral=None) -> "TateSeries":
        if integral is None:
            integral = not ring.is_tate or isinstance(c, AdicScalar)
        return cls(ring, nvars, {(0,) * nvars: c}, radius, degree_bound, integral=integral)

    @classmethod
    def variable(cls, ring, nvars, i, radius=0, degree_bound=8, integral=None) -> "TateSeries":
        idx = tuple(1 if k == i else 0 for k in range(nvars))
        if integral is None:
            integral = not ring.is_tate
        return cls(ring, nvars, {idx: 1}, radius, degree_bound, integral=integral)

    def scalar(self, x):
        return _coerce_scalar(self.ring, self.integral, x)

    def const(self, c) -> "TateSeries":
        return self._new({(0,) * self.nvars: self.scalar(c)}, truncated=False)

    def var(self, i: int) -> "TateSeries":
        idx = tuple(1 if k == i else 0 for k in range(self.nvars))
        return self._new({idx: self.scalar(1)}, truncated=False)

    def zero_like(self) -> "TateSeries":
        return self._new({}, truncated=False)

    def one_like(self) -> "TateSeries":
        return self.const(1)

    # structure ------------------------------------------------------------

    def _check(self, other: "TateSeries") -> None:
        if self.ring != other.ring or self.nvars != other.nvars:
            raise InvalidInput("series over different rings or variable counts")
        if self.radius != other.radius:
            raise InvalidInput("radius mismatch: restrict first")

    def _coerce(self, other):
        if isinstance(other, TateSeries):
            self._check(other)
            return other
        if isinstance(other, (int, AdicScalar, TateScalar)):
            return self.const(other)
        return NotImplemented

    def coefficient(self, idx: Index):
        return self.coeffs.get(tuple(idx), _zero(self.ring, self.integral))

    def total_degree(self) -> int:
        live = [sum(i) for i, c in self.coeffs.items() if not c.is_zero()]
        return max(live, default=0)

    @property
    def is_exact_zero(self) -> bool:
        return not self.truncated and all(c.is_exact_zero for c in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.truncated and all(c.is_zero() for c in self.coeffs.values())

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = min(self.degree_bound, other.degree_bound)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out[idx] + c if idx in out else c
        tr = self.truncated or other.truncated
        floor = min(self.tail_floor, other.tail_floor)
        return TateSeries(self.ring, self.nvars, out, self.radius, d, tr, floor, self.integral)

    __radd__ = __add__

    def __neg__(self):
        return self._new({i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, AdicScalar, TateScalar)):
            c = self.scalar(other)
            return self._new({i: a * c for i, a in self.coeffs.items()},
                             tail_floor=self.tail_floor + c.valuation() if self.truncated else None)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = min(self.degree_bound, other.degree_bound)
        out: dict = {}
        dropped = False
        for i, a in self.coeffs.items():
            si = sum(i)
            for k, b in other.coeffs.items():
                if si + sum(k) > d:
                    dropped = True
                    continue
                idx = tuple(x + y for x, y in zip(i, k))
                p = a * b
                out[idx] = out[idx] + p if idx in out else p
        tr = self.truncated or other.truncated or dropped
        floor = INF
        if tr:
            floor = self._floor() + other._floor()
        return TateSeries(self.ring, self.nvars, out, self.radius, d, tr, floor, self.integral)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TateSeries":
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
        other = self._coerce(other) if not isinstance(other, TateSeries) or \
            (other.ring == self.ring and other.nvars == self.nvars) else other
        if other is NotImplemented or not isinstance(other, TateSeries):
            return NotImplemented
        if other.radius != self.radius:
            return False
        diff = self - other
        return all(c.is_zero() for c in diff.coeffs.values())

    __hash__ = None

    # norms ----------------------------------------------------------------

    def _weighted(self) -> list[NormExponent]:
        j = self.radius
        return [c.val() - j * sum(i) for i, c in self.coeffs.items()]

    def _floor(self):
        """A lower bound on every weighted exponent, tail included."""
        stored = min_exponent(self._weighted()).value
        return min(stored, self.tail_floor)

    def gauss_norm(self) -> NormExponent:
        """``min_I val(a_I) - j|I|`` (the exponent of ``max |a_I| rho^|I|``)."""
        stored = min_exponent(self._weighted())
        if not self.truncated or stored.value <= self.tail_floor:
            return stored
        return NormExponent(self.tail_floor, True)

    val = gauss_norm

    def valuation(self):
        return self.gauss_norm().value

    def in_unit_ball(self) -> bool:
        """Certified membership in ``A0<t>_rho`` (all weighted exponents >= 0)."""
        return self._floor() >= 0

    def restrict(self, j: int) -> "TateSeries":
        """Restriction ``A<t>_rho' -> A<t>_rho`` to a smaller radius index."""
        if j > self.radius:
            raise InvalidInput(f"cannot restrict radius {self.radius} to larger radius {j}")
        if not self.truncated:
            return self._new(self.coeffs, radius=j)
        # unknown tail terms have weighted exponent >= floor at the old radius;
        # at the new radius they gain (old - j) * degree >= (old - j) * (D + 1)
        gain = (self.radius - j) * (self.degree_bound + 1)
        return self._new(self.coeffs, radius=j, tail_floor=self.tail_floor + gain)

    def substitute(self, images: Sequence["TateSeries"], template: "TateSeries | None" = None
                   ) -> "TateSeries":
        """Ring map sending variable ``i`` to ``images[i]`` (coefficients fixed)."""
        if len(images) != self.nvars:
            raise InvalidInput("one image per variable required")
        tgt = template if template is not None else images[0] if images else self
        out = tgt.zero_like()
        pow_cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in pow_cache:
                pow_cache[key] = tgt.one_like() if e == 0 else power(i, e - 1) * images[i]
            return pow_cache[key]

        for idx, c in self.coeffs.items():
            term = tgt.const(c)
            for i, e in enumerate(idx):
                if e:
                    term = term * power(i, e)
            out = out + term
        if self.truncated:
            out = TateSeries(out.ring, out.nvars, out.coeffs, out.radius, out.degree_bound,
                             True, min(out.tail_floor, self.tail_floor), out.integral)
        return out

    def psi_substitute(self, a1) -> "TateSeries":
        """``Psi_{a1}``: every variable ``t_i`` goes to ``a1 * t_i``."""
        a1 = a1 if isinstance(a1, (AdicScalar, TateScalar)) else self.ring.tate(a1) \
            if self.ring.is_tate else self.ring.scalar(a1)
        if a1.valuation() < 0:
            raise InvalidInput("Psi needs a power-bounded scalar (valuation >= 0)")
        a1 = self.scalar(a1)
        powers = [a1.one_like()]
        for _ in range(self.degree_bound):
            powers.append(powers[-1] * a1)
        return self._new({i: c * powers[sum(i)] for i, c in self.coeffs.items()})

    def theta(self, j: int) -> "TateSeries":
        """``Theta``: ``t_i -> pi^j t_i`` from radius 0 to radius j."""
        if self.radius != 0:
            raise InvalidInput("Theta starts at radius index 0")
        pij = self.scalar(self.ring.tate(1, -j) if not self.integral else self.ring.pi() ** j)
        powers = [pij.one_like()]
        for _ in range(self.degree_bound):
            powers.append(powers[-1] * pij)
        return self._new({i: c * powers[sum(i)] for i, c in self.coeffs.items()}, radius=j)

    def map_coefficients(self, fn: Callable) -> "TateSeries":
        return self._new({i: fn(c) for i, c in self.coeffs.items()})

    def reduce_mod_pi(self, k: int) -> "TateSeries":
        """Image in ``A0/pi^k [t]`` (series over A0 only)."""
        if not self.integral:
            raise InvalidInput("reduction mod pi^k needs A0 coefficients")
        return self._new({i: c.with_precision(k) for i, c in self.coeffs.items()})

    def to_json(self) -> dict:
        from .serialize import scalar_to_json
        terms = [{"index": list(i), "coeff": scalar_to_json(c)}
                 for i, c in sorted(self.coeffs.items())]
        return {"radius": self.radius, "degreeBound": self.degree_bound,
                "ring": self.ring.to_json(), "nvars": self.nvars, "truncated": self.truncated,
                "terms": terms}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0" + (" + O(deg>%d)" % self.degree_bound if self.truncated else "")
        parts = []
        for idx, c in sorted(self.coeffs.items()):
            mono = "*".join(f"t{k + 1}^{e}" if e > 1 else f"t{k + 1}"
                            for k, e in enumerate(idx) if e)
            parts.append(f"{c!r}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) + (f" + O(deg>{self.degree_bound})" if self.truncated else "")


# ---------------------------------------------------------------------------
# Laurent polynomials in one variable


class LaurentElement:
    """Element of ``A<t, t^-1>`` supported on exponents in ``[-window, window]``."""

    __slots__ = ("ring", "coeffs", "window", "integral")

    def __init__(self, ring: RingDescriptor, coeffs: Mapping[int, object], window: int = 8,
                 integral: bool | None = None):
        if integral is None:
            integral = not ring.is_tate or any(isinstance(c, AdicScalar) for c in coeffs.values())
        clean = {}
        for e, c in coeffs.items():
            c = _coerce_scalar(ring, integral, c)
            if c.is_exact_zero:
                continue
            if abs(e) > window:
                if c.is_zero():
                    continue
                raise WindowOverflow(f"exponent {e} outside Laurent window [-{window}, {window}]")
            clean[int(e)] = clean[e] + c if e in clean else c
        self.ring = ring
        self.coeffs = clean
        self.window = window
        self.integral = integral

    def _new(self, coeffs) -> "LaurentElement":
        return LaurentElement(self.ring, coeffs, self.window, self.integral)

    def scalar(self, x):
        return _coerce_scalar(self.ring, self.integral, x)

    @classmethod
    def monomial(cls, ring, c, e: int, window: int = 8, integral=None) -> "LaurentElement":
        return cls(ring, {e: c}, window, integral)

    def const(self, c) -> "LaurentElement":
        return self._new({0: self.scalar(c)})

    def zero_like(self) -> "LaurentElement":
        return self._new({})

    def one_like(self) -> "LaurentElement":
        return self.const(1)

    def t_power(self, k: int) -> "LaurentElement":
        return self._new({k: self.scalar(1)})

    def _coerce(self, other):
        if isinstance(other, LaurentElement):
            if other.ring != self.ring:
                raise InvalidInput("Laurent elements over different rings")
            return other
        if isinstance(other, (int, AdicScalar, TateScalar)):
            return self.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LaurentElement(self.ring, out, max(self.window, other.window), self.integral)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()})

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
        out: dict = {}
        for e, a in self.coeffs.items():
            for f, b in other.coeffs.items():
                p = a * b
                out[e + f] = out[e + f] + p if e + f in out else p
        return LaurentElement(self.ring, out, max(self.window, other.window), self.integral)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.one_like()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    @property
    def is_exact_zero(self) -> bool:
        return all(c.is_exact_zero for c in self.coeffs.values())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def val(self) -> NormExponent:
        """Gauss norm at radius 1."""
        return min_exponent(c.val() for c in self.coeffs.values())

    def valuation(self):
        return self.val().value

    def coefficient(self, e: int):
        return self.coeffs.get(e, _zero(self.ring, self.integral))

    def support(self) -> list[int]:
        return sorted(e for e, c in self.coeffs.items() if not c.is_zero())

    def min_degree(self) -> int:
        s = self.support()
        return s[0] if s else 0

    def max_degree(self) -> int:
        s = self.support()
        return s[-1] if s else 0

    def nonnegative_part(self) -> "LaurentElement":
        return self._new({e: c for e, c in self.coeffs.items() if e >= 0})

    def negative_part(self) -> "LaurentElement":
        return self._new({e: c for e, c in self.coeffs.items() if e < 0})

    def shift(self, k: int) -> "LaurentElement":
        """Multiply by ``t^k``."""
        return self._new({e + k: c for e, c in self.coeffs.items()})

    def evaluate_at_one(self):
        acc = _zero(self.ring, self.integral)
        for c in self.coeffs.values():
            acc = acc + c
        return acc

    def map_coefficients(self, fn: Callable) -> "LaurentElement":
        return self._new({e: fn(c) for e, c in self.coeffs.items()})

    def with_precision(self, k: int) -> "LaurentElement":
        return self.map_coefficients(lambda c: c.with_precision(k))

    def residue(self) -> dict[int, int]:
        """Image in ``(A0/pi)[t, t^-1]`` as ``{exponent: residue}``."""
        out = {}
        for e, c in self.coeffs.items():
            if c.is_exact_zero:
                continue
            r = c.residue()
            if r:
                out[e] = r
        return out

    def inverse(self) -> "LaurentElement":
        """Inverse of a monomial unit ``u t^k`` (other units need infinite support)."""
        s = self.support()
        if len(s) != 1:
            raise NotInvertible("only monomial Laurent units are inverted exactly")
        e = s[0]
        return self._new({-e: self.coeffs[e].inverse()})

    def to_json(self) -> dict:
        from .serialize import scalar_to_json
        return {"laurent": [{"exp": e, "coeff": scalar_to_json(c)}
                            for e, c in sorted(self.coeffs.items())]}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c!r}*t^{e}" for e, c in sorted(self.coeffs.items()))


# ---------------------------------------------------------------------------
# simplex rings


@dataclass(frozen=True)
class SimplexElement:
    """Element of ``A<s_1..s_e><Delta^m_{a0}>`` in the t_0-eliminated form.

    The underlying series has ``extra + degree`` variables: first the ``extra``
    coefficient variables (such as the ``t`` of ``A<t>``), then the simplex
    coordinates ``t_1..t_m``.  ``diameter`` is ``a0``.
    """

    series: TateSeries
    degree: int
    diameter: object
    extra: int = 0

    def __post_init__(self):
        if self.series.nvars != self.extra + self.degree:
            raise InvalidInput("series variable count must be extra + degree")

    # helpers
    @property
    def ring(self) -> RingDescriptor:
        return self.series.ring

    def _with(self, series: TateSeries, degree: int) -> "SimplexElement":
        return SimplexElement(series, degree, self.diameter, self.extra)

    def _template(self, degree: int) -> TateSeries:
        s = self.series
        return TateSeries(s.ring, self.extra + degree, {}, s.radius, s.degree_bound,
                          integral=s.integral)

    def coordinate(self, i: int) -> "SimplexElement":
        """The coordinate ``t_i`` (``t_0`` expands to ``a0 - t_1 - ... - t_m``)."""
        return self._with(coordinate_series(self._template(self.degree), self.extra,
                                            self.degree, i, self.diameter), self.degree)

    def extra_variable(self, k: int = 0) -> "SimplexElement":
        return self._with(self._template(self.degree).var(k), self.degree)

    def const(self, c) -> "SimplexElement":
        return self._with(self._template(self.degree).const(c), self.degree)

    def __add__(self, other: "SimplexElement") -> "SimplexElement":
        self._check(other)
        return self._with(self.series + other.series, self.degree)

    def __sub__(self, other: "SimplexElement") -> "SimplexElement":
        self._check(other)
        return self._with(self.series - other.series, self.degree)

    def __mul__(self, other) -> "SimplexElement":
        if isinstance(other, SimplexElement):
            self._check(other)
            return self._with(self.series * other.series, self.degree)
        return self._with(self.series * other, self.degree)

    def __neg__(self):
        return self._with(-self.series, self.degree)

    def _check(self, other: "SimplexElement") -> None:
        if other.degree != self.degree or other.extra != self.extra:
            raise InvalidInput("simplex elements of different shapes")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplexElement):
            return NotImplemented
        return (self.degree == other.degree and self.extra == other.extra
                and self.series == other.series)

    def zero_like(self) -> "SimplexElement":
        return self._with(self.series.zero_like(), self.degree)

    def one_like(self) -> "SimplexElement":
        return self._with(self.series.one_like(), self.degree)

    def val(self) -> NormExponent:
        return self.series.gauss_norm()

    def valuation(self):
        return self.val().value

    def is_zero(self) -> bool:
        return self.series.is_zero()

    @property
    def is_exact_zero(self) -> bool:
        return self.series.is_exact_zero

    def substitute_coordinates(self, images: Sequence[TateSeries], degree: int,
                               extra_images: Sequence[TateSeries] | None = None
                               ) -> "SimplexElement":
        """Apply the ring map ``t_i -> images[i-1]`` (and extras likewise)."""
        tmpl = self._template(degree)
        if extra_images is None:
            extra_images = [tmpl.var(k) for k in range(self.extra)]
        out = self.series.substitute(list(extra_images) + list(images), tmpl)
        return self._with(out, degree)

    # cosimplicial structure
    def face(self, i: int) -> "SimplexElement":
        """``d_i``: ``t_i -> 0`` and renumber the later coordinates."""
        m = self.degree
        if not 0 <= i <= m or m == 0:
            raise InvalidInput(f"face index {i} out of range for degree {m}")
        tmpl = self._template(m - 1)
        images = []
        for k in range(1, m + 1):
            if k < i:
                images.append(coordinate_series(tmpl, self.extra, m - 1, k, self.diameter))
            elif k == i:
                images.append(tmpl.zero_like())
            else:
                images.append(coordinate_series(tmpl, self.extra, m - 1, k - 1, self.diameter))
        return self.substitute_coordinates(images, m - 1)

    def degeneracy(self, i: int) -> "SimplexElement":
        """``s_i``: ``t_i -> t_i + t_{i+1}`` and shift the later coordinates."""
        m = self.degree
        if not 0 <= i <= m:
            raise InvalidInput(f"degeneracy index {i} out of range for degree {m}")
        tmpl = self._template(m + 1)
        images = []
        for k in range(1, m + 1):
            if k < i:
                images.append(coordinate_series(tmpl, self.extra, m + 1, k, self.diameter))
            elif k == i:
                images.append(coordinate_series(tmpl, self.extra, m + 1, k, self.diameter)
                              + coordinate_series(tmpl, self.extra, m + 1, k + 1, self.diameter))
            else:
                images.append(coordinate_series(tmpl, self.extra, m + 1, k + 1, self.diameter))
        return self.substitute_coordinates(images, m + 1)

    def psi(self, a1, target_diameter=None) -> "SimplexElement":
        """``Psi^{a0}_{a1}``: from diameter ``a1*a0`` to diameter ``a0`` (``t_i -> a1 t_i``).

        Extra variables are untouched.
        """
        s = self.series
        a1s = s.scalar(a1)
        if a1s.valuation() < 0:
            raise InvalidInput("Psi needs a power-bounded scalar")
        if target_diameter is None:
            new_diam = _divide_diameter(self.diameter, a1s)
        else:
            new_diam = s.scalar(target_diameter)
            if not a1s * new_diam == self.diameter:
                raise InvalidInput("source diameter must equal a1 * target diameter")
        out = {}
        for idx, c in s.coeffs.items():
            deg = sum(idx[self.extra:])
            out[idx] = c * a1s ** deg
        return SimplexElement(s._new(out), self.degree, new_diam, self.extra)

    def homotopy_h(self, ell: int) -> "SimplexElement":
        """``h_ell``: ``t -> t (t_0 + ... + t_ell)`` and ``t_i -> s_ell(t_i)``.

        Needs exactly one extra variable ``t``.
        """
        if self.extra != 1:
            raise InvalidInput("h_ell acts on A<t><Delta^n>: exactly one extra variable")
        n = self.degree
        if not 0 <= ell <= n:
            raise InvalidInput(f"homotopy index {ell} out of range for degree {n}")
        tmpl = self._template(n + 1)
        partial = tmpl.zero_like()
        for k in range(ell + 1):
            partial = partial + coordinate_series(tmpl, 1, n + 1, k, self.diameter)
        t_image = tmpl.var(0) * partial
        coord_images = []
        for k in range(1, n + 1):
            # s_ell(t_k)
            if k < ell:
                coord_images.append(coordinate_series(tmpl, 1, n + 1, k, self.diameter))
            elif k == ell:
                coord_images.append(coordinate_series(tmpl, 1, n + 1, k, self.diameter)
                                    + coordinate_series(tmpl, 1, n + 1, k + 1, self.diameter))
            else:
                coord_images.append(coordinate_series(tmpl, 1, n + 1, k + 1, self.diameter))
        return self.substitute_coordinates(coord_images, n + 1, [t_image])

    def substitute_extra(self, fn: Callable[[TateSeries], TateSeries]) -> "SimplexElement":
        """Apply ``t -> fn(t)`` to the extra variable(s), coordinates fixed."""
        tmpl = self._template(self.degree)
        extras = [fn(tmpl.var(k)) for k in range(self.extra)]
        coords = [tmpl.var(self.extra + k) for k in range(self.degree)]
        return self._with(self.series.substitute(extras + coords, tmpl), self.degree)

    def __repr__(self) -> str:
        return f"SimplexElement(deg={self.degree}, {self.series!r})"


def coordinate_series(tmpl: TateSeries, extra: int, degree: int, i: int, diameter) -> TateSeries:
    """``t_i`` on ``Delta^degree`` as a series; ``t_0 = a0 - t_1 - ... - t_m``."""
    if i == 0:
        out = tmpl.const(diameter)
        for k in range(1, degree + 1):
            out = out - tmpl.var(extra + k - 1)
        return out
    if not 1 <= i <= degree:
        raise InvalidInput(f"coordinate t_{i} does not exist on Delta^{degree}")
    return tmpl.var(extra + i - 1)


def _divide_diameter(diameter, a1):
    """``diameter / a1``: the target diameter of ``Psi_{a1}`` from ``diameter``."""
    v = a1.valuation()
    unit = a1.divide_by_pi(v)
    return diameter.divide_by_pi(v) * unit.inverse()


def simplex_ring_element(ring: RingDescriptor, degree: int, terms: Mapping[Index, object],
                         j: int, extra: int = 0, degree_bound: int = 8,
                         integral: bool = True, radius: int = 0) -> SimplexElement:
    """Element of ``A0<Delta^degree_{pi^j}>`` (or over A when ``integral=False``)."""
    series = TateSeries(ring, extra + degree, terms, radius, degree_bound, integral=integral)
    diam = series.scalar(ring.pi() ** j if integral or not ring.is_tate else ring.tate(1, -j))
    return SimplexElement(series, degree, diam, extra)


def random_series(ring: RingDescriptor, rng, nvars: int, degree: int, radius: int = 0,
                  degree_bound: int | None = None, integral: bool = False,
                  vmin: int = 0, vmax: int = 3, density: float = 0.6) -> TateSeries:
    from .padic_core import random_adic, random_tate
    d = degree if degree_bound is None else degree_bound
    coeffs = {}
    for idx in itertools.product(range(degree + 1), repeat=nvars):
        if sum(idx) > degree or rng.random() > density:
            continue
        if integral:
            coeffs[idx] = random_adic(ring, rng, min_val=rng.randint(0, max(vmax, 0)))
        else:
            coeffs[idx] = random_tate(ring, rng, vmin, vmax)
    return TateSeries(ring, nvars, coeffs, radius, d, integral=integral)


def monomials(nvars: int, degree: int) -> Iterable[Index]:
    for idx in itertools.product(range(degree + 1), repeat=nvars):
        if sum(idx) <= degree:
            yield idx


__all__ = [
    "TateSeries", "LaurentElement", "SimplexElement", "coordinate_series",
    "simplex_ring_element", "random_series", "monomials",
]
