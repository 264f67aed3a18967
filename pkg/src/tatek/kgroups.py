"""Low-degree K-groups of the supported rings.

Every shipped A0 is local, so K0 is free of rank one on the rank of a
projective module and K1 is the unit group via the determinant.  The
continuous K1 is the pro-group ``n -> Z x (A0/pi^n)^x``, K2 is seen through
the tame symbol, and KV1 classes are handled by witnesses.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .errors import (FactorizationFailure, InsufficientPrecision, InvalidInput,
                     NotInvertible)
from .linalg import Mat
from .matgroup import (UnipotenceCertificate, elementary_factorization, glrho_certificate,
                       invert)
from .padic_core import AdicScalar, DualScalar, RingDescriptor, TateScalar
from .tate_series import SimplexElement, TateSeries, simplex_ring_element

# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + sum Z/d_i`` with invariant factors ``d_1 | d_2 | ...``."""

    free_rank: int
    torsion: tuple = ()

    @classmethod
    def from_cyclic_orders(cls, free_rank: int, orders) -> "AbelianGroup":
        orders = [int(d) for d in orders if int(d) > 1]
        if not orders:
            return cls(free_rank, ())
        facs = invariant_factors(Matrix.diag(*orders), domain=ZZ)
        return cls(free_rank, tuple(int(d) for d in facs if int(d) > 1))

    @property
    def order_of_torsion(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def cokernel(rows: list[list[int]], target_rank: int) -> AbelianGroup:
    """Cokernel of the integer map ``Z^s -> Z^r`` given by an ``r x s`` matrix."""
    if not rows or not rows[0] or all(x == 0 for r in rows for x in r):
        return AbelianGroup(target_rank, ())
    m = Matrix(rows)
    facs = [int(d) for d in invariant_factors(m, domain=ZZ)]
    nonzero = [d for d in facs if d != 0]
    return AbelianGroup(target_rank - len(nonzero), tuple(abs(d) for d in nonzero if abs(d) > 1))


class ProGroup:
    """N-indexed system of abelian groups with transition maps ``level n -> level n-1``.

    Levels are computed on demand and cached; the cache is filled under a
    lock, after which reads are lock-free.
    """

    def __init__(self, name: str, level_fn: Callable[[int], object],
                 transition_fn: Callable[[int, object], object] | None = None, start: int = 0):
        self.name = name
        self._level_fn = level_fn
        self._transition_fn = transition_fn
        self.start = start
        self._cache: dict = {}
        self._lock = threading.Lock()

    def level(self, n: int):
        if n < self.start:
            raise InvalidInput(f"{self.name} has no level {n}")
        got = self._cache.get(n)
        if got is not None:
            return got
        with self._lock:
            if n not in self._cache:
                self._cache[n] = self._level_fn(n)
            return self._cache[n]

    def transition(self, n: int, x):
        """Image of a level-n element at level n-1."""
        if self._transition_fn is None:
            return x
        return self._transition_fn(n, x)

    def is_constant(self, levels) -> bool:
        vals = [self.level(n) for n in levels]
        return all(v == vals[0] for v in vals)


# ---------------------------------------------------------------------------
# K0 and K1 of local rings


@dataclass(frozen=True)
class K0Class:
    rank: int

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.rank + other.rank)

    def __neg__(self) -> "K0Class":
        return K0Class(-self.rank)


def k0(ring: RingDescriptor) -> AbelianGroup:
    """K0 of a local ring: infinite cyclic on the rank."""
    if not isinstance(ring, RingDescriptor):
        raise InvalidInput("k0 needs a ring descriptor")
    return AbelianGroup(1, ())


def k0_class_of_idempotent(e: Mat) -> K0Class:
    """Rank of the projective module ``im(e)``; over a local ring this is the residue rank."""
    if not (e @ e) == e:
        raise InvalidInput("matrix is not idempotent at working precision")
    return K0Class(e.residue_rank())


def k1_local(g) -> object:
    """K1 class of ``g`` over a local ring: its determinant."""
    mat = g.matrix if hasattr(g, "matrix") else g
    return mat.det()


def sk1_witness(g):
    """Factorization ``g = W diag(det g, 1, ...)``; checked by replay."""
    mat = g.matrix if hasattr(g, "matrix") else g
    fac = elementary_factorization(mat)
    if not fac.replay() == mat:
        raise FactorizationFailure("elementary word does not replay to g")
    return fac


# ---------------------------------------------------------------------------
# continuous K1


def _unit_orders(ring: RingDescriptor, n: int) -> list[int]:
    """Cyclic orders whose product is ``(A0/pi^n)^x``."""
    p, q = ring.p, ring.q
    if n < 1:
        return []
    if ring.kind in ("zp", "zmod"):
        if p != 2:
            return [p - 1, p ** (n - 1)]
        if n == 1:
            return []
        if n == 2:
            return [2]
        return [2, 2 ** (n - 2)]
    # F_q[[pi]]/pi^n: F_q^x times the one-units, which split as
    # sum over j < n with p not dividing j of (Z/p^c_j)^f, c_j minimal with j p^c >= n
    f = ring.residue_field.degree
    orders = [q - 1]
    for j in range(1, n):
        if j % p == 0:
            continue
        c = 0
        while j * p ** c < n:
            c += 1
        orders += [p ** c] * f
    return orders


def unit_group(ring: RingDescriptor, n: int) -> AbelianGroup:
    """Structure of ``(A0/pi^n)^x``."""
    return AbelianGroup.from_cyclic_orders(0, _unit_orders(ring, n))


@dataclass(frozen=True)
class K1ContClass:
    """``(v, u)``: valuation component and unit modulo ``1 + pi^n A0``."""

    level: int
    v: int
    unit: AdicScalar

    def __eq__(self, other) -> bool:
        if not isinstance(other, K1ContClass):
            return NotImplemented
        return self.level == other.level and self.v == other.v and self.unit == other.unit

    def __mul__(self, other: "K1ContClass") -> "K1ContClass":
        return K1ContClass(self.level, self.v + other.v,
                           (self.unit * other.unit).with_precision(self.level))

    def is_identity(self) -> bool:
        return self.v == 0 and self.unit == self.unit.one_like()

    def to_json(self) -> dict:
        return {"level": self.level, "v": self.v, "unit": self.unit.digits()}


@dataclass(frozen=True)
class K1ContLevel:
    ring: RingDescriptor
    level: int
    group: AbelianGroup

    def class_of(self, x) -> K1ContClass:
        """Class of a nonzero element of A (or of an invertible matrix, via det)."""
        if isinstance(x, Mat):
            x = x.det()
        if isinstance(x, AdicScalar):
            x = TateScalar.from_adic(x)
        if x.is_zero():
            raise InvalidInput("0 has no K1 class")
        v = x.valuation()
        unit = x.unit.with_precision(self.level)
        if unit.precision < self.level:
            raise InsufficientPrecision(f"unit part known only mod pi^{unit.precision}")
        return K1ContClass(self.level, v, unit)

    def identity(self) -> K1ContClass:
        return K1ContClass(self.level, 0, self.ring.one().with_precision(self.level))

    def to_json(self) -> dict:
        return self.group.to_json()


def k1cont_level(ring: RingDescriptor, n: int) -> K1ContLevel:
    """Level n of continuous K1 of ``A = A0[1/pi]``: ``Z x (A0/pi^n)^x``."""
    if not ring.is_tate:
        raise InvalidInput(f"{ring}[1/pi] is the zero ring; K1cont needs a Tate ring")
    if not 1 <= n <= ring.precision:
        raise InvalidInput(f"level must lie in 1..{ring.precision}")
    return K1ContLevel(ring, n, AbelianGroup.from_cyclic_orders(1, _unit_orders(ring, n)))


def k1cont_transition(c: K1ContClass) -> K1ContClass:
    """Reduction from level n to level n-1."""
    if c.level < 2:
        raise InvalidInput("level 1 has no lower level in the tower")
    return K1ContClass(c.level - 1, c.v, c.unit.with_precision(c.level - 1))


def k1cont_lift(c: K1ContClass, rng=None) -> K1ContClass:
    """An explicit preimage of ``c`` one level up (surjectivity witness).

    Any residue of the unit modulo ``pi^(n+1)`` reducing to ``c.unit`` is a
    unit, so the lift takes the digits of ``c.unit`` plus an arbitrary next digit.
    """
    ring = c.unit.ring
    n = c.level
    if n + 1 > ring.precision:
        raise InsufficientPrecision("ring precision exhausted")
    digits = c.unit.digits()[:n]
    top = 0 if rng is None else rng.randrange(ring.q)
    lifted = ring.scalar(digits + [top]).with_precision(n + 1)
    return K1ContClass(n + 1, c.v, lifted)


def k1cont_progroup(ring: RingDescriptor) -> ProGroup:
    return ProGroup(f"K1cont({ring})", lambda n: k1cont_level(ring, n),
                    lambda n, x: k1cont_transition(x), start=1)


# ---------------------------------------------------------------------------
# tame symbol


def tame_symbol(a: TateScalar, b: TateScalar) -> int:
    """``(-1)^(v(a)v(b)) a^v(b) / b^v(a)`` reduced mod pi, in the residue field."""
    for x in (a, b):
        if not isinstance(x, TateScalar):
            raise InvalidInput("tame symbol takes elements of the fraction field")
        if x.is_zero():
            raise InvalidInput("tame symbol of 0 is undefined")
    f = a.ring.residue_field
    va, vb = a.valuation(), b.valuation()
    ra, rb = a.unit.residue(), b.unit.residue()
    sign = f.from_int(-1) if (va * vb) % 2 else 1
    return f.mul(sign, f.mul(f.pow(ra, vb), f.pow(rb, -va)))


# ---------------------------------------------------------------------------
# pi_0 of analytic K0


def _constant_of(x: SimplexElement):
    return x.series.coefficient((0,) * x.series.nvars)


def _face_to_constants(e: Mat, i: int) -> Mat:
    return e.map(lambda x: _constant_of(x.face(i)))


def sample_simplex_idempotents(ring: RingDescriptor, j: int, degree_bound: int = 6) -> list[Mat]:
    """Idempotent matrices over ``A0<Delta^1_{pi^j}>`` used as K0 samples."""
    def el(terms):
        return simplex_ring_element(ring, 1, terms, j, degree_bound=degree_bound)

    one, zero = el({(0,): 1}), el({})
    t1 = el({(1,): 1})
    pt1 = el({(1,): ring.pi()})
    samples = [
        Mat([[one]]),
        Mat([[zero]]),
        Mat([[one, zero], [zero, zero]]),
        Mat([[one, zero], [zero, one]]),
    ]
    # conjugates of diag(1, 0) by transvections with entries in the simplex ring
    for a in (t1, pt1, t1 * t1):
        e = Mat([[one, a], [zero, one]])
        einv = Mat([[one, -a], [zero, one]])
        samples.append(e @ samples[2] @ einv)
        lower = Mat([[one, zero], [a, one]])
        lower_inv = Mat([[one, zero], [-a, one]])
        samples.append(lower @ samples[2] @ lower_inv)
    return samples


def k0_an_pi0(ring: RingDescriptor, j: int) -> AbelianGroup:
    """``coker(d0 - d1 : K0(A<Delta^1_{pi^j}>) -> K0(A))`` on sampled classes.

    Classes are the ranks of idempotent matrices; the image of a sample is
    ``rank(d0 e) - rank(d1 e)``.  The target K0(A) is free of rank one.
    """
    if j < 0:
        raise InvalidInput("j must be >= 0")
    diffs = []
    for e in sample_simplex_idempotents(ring, j):
        ranks = []
        for i in (0, 1):
            f = _face_to_constants(e, i)
            ranks.append(k0_class_of_idempotent(f).rank)
        diffs.append(ranks[0] - ranks[1])
    return cokernel([diffs], 1)


def k0_an_pi0_progroup(ring: RingDescriptor) -> ProGroup:
    return ProGroup(f"pi0 K0an({ring})", lambda j: k0_an_pi0(ring, j), start=0)


# ---------------------------------------------------------------------------
# KV1 classes


@dataclass(frozen=True)
class CertifiedGenerator:
    matrix: Mat
    certificate: UnipotenceCertificate


@dataclass(frozen=True)
class KV1Witness:
    """``g`` as a product of generators of GL(A)_rho, each with a certificate."""

    radius: int
    generators: tuple

    def replay(self) -> Mat:
        out = self.generators[0].matrix
        for gen in self.generators[1:]:
            out = out @ gen.matrix
        return out

    def to_json(self) -> dict:
        from .serialize import matrix_to_json
        return {"j": self.radius,
                "generators": [{"matrix": matrix_to_json(g.matrix),
                                "certificate": g.certificate.to_json()}
                               for g in self.generators]}


@dataclass(frozen=True)
class KV1Class:
    matrix: Mat
    radius: int
    witness: KV1Witness | None = field(default=None, compare=False)


def _certify_scalar_matrix(g: Mat, j: int, max_exponent: int | None):
    cert = glrho_certificate(g, j, max_exponent)
    if cert is not None:
        return [CertifiedGenerator(g, cert)]
    try:
        fac = elementary_factorization(g)
    except (FactorizationFailure, NotInvertible, InsufficientPrecision):
        return None
    like = g[0, 0]
    n = g.nrows
    gens = []
    for i, k, a in fac.word.letters:
        e = Mat.elementary(n, i, k, a)
        c = glrho_certificate(e, j, max_exponent)
        if c is None:
            return None
        gens.append(CertifiedGenerator(e, c))
    d = Mat.diag([fac.determinant] + [like.one_like()] * (n - 1))
    c = glrho_certificate(d, j, max_exponent)
    if c is None:
        return None
    gens.append(CertifiedGenerator(d, c))
    return gens


def kv1_certify_trivial(g, j: int, max_exponent: int | None = None) -> KV1Witness | None:
    """Witness that ``g`` is trivial in ``GL(A)/GL(A)_rho``, or None (not certified).

    Over dual numbers ``A[eps]``, ``g = g0 (1 + eps h)`` and the correction
    factor is nilpotent minus one, hence always a certified generator.
    """
    mat = g.matrix if hasattr(g, "matrix") else g
    if isinstance(mat[0, 0], DualScalar):
        g0 = mat.map(lambda x: x.a)
        g1 = mat.map(lambda x: x.b)
        base = _certify_scalar_matrix(g0, j, max_exponent)
        if base is None:
            return None
        zero = g0[0, 0].zero_like()
        lifted = [CertifiedGenerator(gen.matrix.map(lambda x: DualScalar(x, zero)),
                                     gen.certificate) for gen in base]
        h = invert(g0).inverse @ g1
        ident = g0.identity_like()
        corr = Mat([[DualScalar(ident[r, c], h[r, c]) for c in range(mat.ncols)]
                    for r in range(mat.nrows)])
        cert = glrho_certificate(corr, j, max_exponent)
        if cert is None:
            return None
        gens = lifted + [CertifiedGenerator(corr, cert)]
    else:
        gens = _certify_scalar_matrix(mat, j, max_exponent)
        if gens is None:
            return None
    witness = KV1Witness(j, tuple(gens))
    if not witness.replay() == mat:
        raise FactorizationFailure("KV1 witness does not replay to g")
    return witness


def kv1_class(g, j: int, max_exponent: int | None = None) -> KV1Class:
    mat = g.matrix if hasattr(g, "matrix") else g
    return KV1Class(mat, j, kv1_certify_trivial(mat, j, max_exponent))


def kv1_equal(g: Mat, h: Mat, j: int, max_exponent: int | None = None) -> KV1Witness | None:
    """Witness that ``g`` and ``h`` agree in KV1 at radius j (``g h^-1`` trivial)."""
    return kv1_certify_trivial(g @ invert(h).inverse, j, max_exponent)


__all__ = [
    "AbelianGroup", "cokernel", "ProGroup", "K0Class", "k0", "k0_class_of_idempotent",
    "k1_local", "sk1_witness", "unit_group", "K1ContClass", "K1ContLevel", "k1cont_level",
    "k1cont_transition", "k1cont_lift", "k1cont_progroup", "tame_symbol",
    "sample_simplex_idempotents", "k0_an_pi0", "k0_an_pi0_progroup", "CertifiedGenerator",
    "KV1Witness", "KV1Class", "kv1_certify_trivial", "kv1_class", "kv1_equal",
]
