"""GL_n over the ring types: norms, congruence subgroups, unipotence certificates.

The certificate for ``g`` in GL(A)_rho with ``rho = eps**(-j)`` is an exponent
``m`` with ``val((g-1)^m) - j*m >= 1``.  Submultiplicativity then gives
``val((g-1)^(m*k)) - j*m*k >= k`` for every k, so ``|(g-1)^n| rho^n -> 0``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .errors import FactorizationFailure, InsufficientPrecision, InvalidInput
from .linalg import Mat
from .padic_core import NormExponent, TateScalar
from .tate_series import SimplexElement, TateSeries, coordinate_series

DEFAULT_MAX_EXPONENT = 64


def max_exponent_default() -> int:
    raw = os.environ.get("TATEK_MAX_EXPONENT")
    if raw is None:
        return DEFAULT_MAX_EXPONENT
    try:
        val = int(raw)
    except ValueError:
        raise InvalidInput(f"TATEK_MAX_EXPONENT must be an integer, got {raw!r}") from None
    if val < 1:
        raise InvalidInput("TATEK_MAX_EXPONENT must be >= 1")
    return val


def mat_norm(m: Mat) -> NormExponent:
    """``max |a_ij|`` as an exponent."""
    return m.norm_exponent()


@dataclass(frozen=True, eq=False)
class GLnElem:
    matrix: Mat
    inverse: Mat

    @property
    def n(self) -> int:
        return self.matrix.nrows

    def __matmul__(self, other: "GLnElem") -> "GLnElem":
        return GLnElem(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def inv(self) -> "GLnElem":
        return GLnElem(self.inverse, self.matrix)

    def stabilize(self, k: int = 1) -> "GLnElem":
        return GLnElem(self.matrix.stabilize(k), self.inverse.stabilize(k))


def invert(m: Mat) -> GLnElem:
    """Certified inverse; raises if ``m`` is singular at working precision."""
    inv = m.inverse()
    if not (m @ inv) == m.identity_like():
        raise InsufficientPrecision("inverse does not verify at working precision")
    return GLnElem(m, inv)


def det(m: Mat):
    return m.det()


def in_congruence_subgroup(g, n: int) -> bool:
    """Whether ``g`` lies in ``1 + pi^n Mat``."""
    m = g.matrix if isinstance(g, GLnElem) else g
    return mat_norm(m - m.identity_like()).value >= n


# ---------------------------------------------------------------------------
# unipotence certificates


@dataclass(frozen=True)
class UnipotenceCertificate:
    radius: int
    exponent: int
    weighted_exponent: NormExponent

    def to_json(self) -> dict:
        w = self.weighted_exponent
        return {"certified": True, "j": self.radius, "m": self.exponent,
                "weighted_exponent": w.to_json()}


def weighted_exponent(g: Mat, j: int, m: int) -> NormExponent:
    """Exponent of ``|(g-1)^m| rho^m`` for ``rho = eps**(-j)``."""
    a = g - g.identity_like()
    return mat_norm(a.power(m)) - j * m


def glrho_certificate(g, j: int, max_exponent: int | None = None
                      ) -> UnipotenceCertificate | None:
    """Smallest ``m <= M_max`` with weighted exponent of ``(g-1)^m`` at least 1.

    ``None`` means "not certified", which is not a proof of non-membership.
    """
    if j < 0:
        raise InvalidInput("radius index j must be >= 0")
    m_max = max_exponent_default() if max_exponent is None else max_exponent
    mat = g.matrix if isinstance(g, GLnElem) else g
    a = mat - mat.identity_like()
    power = a
    for m in range(1, m_max + 1):
        w = mat_norm(power) - j * m
        if w.value >= 1:
            return UnipotenceCertificate(j, m, w)
        if m < m_max:
            power = power @ a
    return None


def certificate_replay(g, cert: UnipotenceCertificate, k: int) -> bool:
    """Check ``val((g-1)^(m*k)) - j*m*k >= k`` by explicit powering."""
    mat = g.matrix if isinstance(g, GLnElem) else g
    return weighted_exponent(mat, cert.radius, cert.exponent * k).value >= k


# ---------------------------------------------------------------------------
# contracting homotopy on 1 + pi^(n+j) Mat(A<Delta_{pi^j}>)


def simplex_parameter_series(tmpl: SimplexElement, s: Sequence[int]) -> TateSeries:
    """``t(s)`` for a monotone ``s: [m] -> [1]``: pull back ``t_1`` along s.

    ``t(s) = sum_{s(i)=1} t_i``; when ``s(0) = 1`` this is written as
    ``a0 - sum_{s(i)=0} t_i`` in the eliminated coordinates.
    """
    m = tmpl.degree
    s = list(s)
    if len(s) != m + 1 or any(x not in (0, 1) for x in s) or s != sorted(s):
        raise InvalidInput("s must be a monotone map [m] -> [1]")
    base = tmpl.series.zero_like()
    if s[0] == 1:
        out = coordinate_series(base, tmpl.extra, m, 0, tmpl.diameter)
        for i in range(1, m + 1):
            out = out + coordinate_series(base, tmpl.extra, m, i, tmpl.diameter)
        return out
    out = base
    for i in range(1, m + 1):
        if s[i] == 1:
            out = out + coordinate_series(base, tmpl.extra, m, i, tmpl.diameter)
    return out


def _divide_series_by_pi(f: TateSeries, k: int) -> TateSeries:
    if f.integral:
        return f.map_coefficients(lambda c: c.divide_by_pi(k))
    return f.map_coefficients(lambda c: c * TateScalar.pi_power(f.ring, -k))


def contracting_homotopy(g: Mat, s: Sequence[int], n: int, j: int) -> Mat:
    """``H(1 + a, s) = 1 + t(s) * (pi^-j a)`` on ``1 + pi^(n+j) Mat(A<Delta^m_{pi^j}>)``."""
    one = g.identity_like()
    a = g - one
    if mat_norm(a).value < n + j:
        raise InsufficientPrecision(f"g - 1 must be divisible by pi^{n + j}")
    tmpl = g[0, 0]
    ts = simplex_parameter_series(tmpl, s)
    rows = []
    for r in range(g.nrows):
        row = []
        for c in range(g.ncols):
            x = a[r, c]
            scaled = _divide_series_by_pi(x.series, j) * ts
            row.append(one[r, c] + SimplexElement(scaled, x.degree, x.diameter, x.extra))
        rows.append(row)
    return Mat(rows)


def face_matrix(g: Mat, i: int) -> Mat:
    return g.map(lambda x: x.face(i))


def degeneracy_matrix(g: Mat, i: int) -> Mat:
    return g.map(lambda x: x.degeneracy(i))


# ---------------------------------------------------------------------------
# elementary factorization over local rings


@dataclass(frozen=True)
class ElementaryWord:
    """Product ``e_{i1 j1}(a1) e_{i2 j2}(a2) ...`` of transvections in GL_n."""

    n: int
    letters: tuple
    like: object = field(repr=False, compare=False, default=None)

    def replay(self) -> Mat:
        out = Mat.identity(self.n, self.like)
        for i, j, a in self.letters:
            out = out @ Mat.elementary(self.n, i, j, a)
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def to_json(self) -> list:
        return [{"i": i, "j": j, "a": a.to_json()} for i, j, a in self.letters]


@dataclass(frozen=True)
class Factorization:
    word: ElementaryWord
    determinant: object

    def replay(self) -> Mat:
        """``word * diag(det, 1, ..., 1)``."""
        w = self.word.replay()
        d = Mat.diag([self.determinant] + [self.determinant.one_like()] * (self.word.n - 1))
        return w @ d


def _usable_pivot(x) -> bool:
    if x.is_zero():
        return False
    if isinstance(x, TateScalar):
        return True
    return x.is_unit()


def _whitehead(v, k0: int, k1: int) -> list:
    """Letters whose product is ``diag(v, v^-1)`` on coordinates (k0, k1)."""
    vi = v.inverse()
    one = v.one_like()
    return [(k0, k1, v), (k1, k0, -vi), (k0, k1, v), (k0, k1, -one), (k1, k0, one), (k0, k1, -one)]


def elementary_factorization(g) -> Factorization:
    """Write ``g = W * diag(det g, 1, ..., 1)`` with ``W`` a word of transvections.

    Only row operations are used: make each pivot a unit (adding a lower row
    when needed), clear its column, then push the diagonal units to the
    first slot with Whitehead words.
    """
    mat = g.matrix if isinstance(g, GLnElem) else g
    n = mat.nrows
    rows = [list(r) for r in mat.rows]
    applied: list = []          # left multipliers, in order of application

    def row_add(dst, src, a):
        rows[dst] = [x + a * y for x, y in zip(rows[dst], rows[src])]
        applied.append((dst, src, a))

    for c in range(n):
        if not _usable_pivot(rows[c][c]):
            cands = [r for r in range(c + 1, n) if _usable_pivot(rows[r][c])]
            if not cands:
                raise FactorizationFailure(f"no unit pivot in column {c}")
            best = min(cands, key=lambda r: rows[r][c].valuation())
            row_add(c, best, rows[c][c].one_like())
            if not _usable_pivot(rows[c][c]):
                raise FactorizationFailure(f"pivot in column {c} lost invertibility")
        inv = rows[c][c].inverse()
        for r in range(n):
            if r != c and not rows[r][c].is_zero():
                row_add(r, c, -(rows[r][c] * inv))
    diag = [rows[i][i] for i in range(n)]
    for k in range(n - 1, 0, -1):
        v = diag[k]
        if v == v.one_like():
            continue
        # left multiply by diag(v, v^-1) on (k-1, k): product applied right to left
        for letter in reversed(_whitehead(v, k - 1, k)):
            i, j, a = letter
            rows[i] = [x + a * y for x, y in zip(rows[i], rows[j])]
            applied.append(letter)
        diag[k - 1] = diag[k - 1] * v
        diag[k] = v.one_like()
    like = mat[0, 0]
    letters = tuple((i, j, -a) for i, j, a in applied)
    word = ElementaryWord(n, letters, like)
    return Factorization(word, diag[0])


__all__ = [
    "DEFAULT_MAX_EXPONENT", "max_exponent_default", "mat_norm", "GLnElem", "invert", "det",
    "in_congruence_subgroup", "UnipotenceCertificate", "weighted_exponent",
    "glrho_certificate", "certificate_replay", "simplex_parameter_series",
    "contracting_homotopy", "face_matrix", "degeneracy_matrix", "ElementaryWord",
    "Factorization", "elementary_factorization",
]
