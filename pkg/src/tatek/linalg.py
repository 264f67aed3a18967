"""Dense matrices over any of the scalar/series types of the package.

Entries only need ``+``, ``-``, ``*``, ``zero_like``, ``one_like`` and (for
norms) ``val``.  Determinants use Berkowitz's division-free algorithm so they
make sense over A0, A, series rings and Laurent rings alike.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .errors import InsufficientPrecision, InvalidInput, NotInvertible
from .padic_core import NormExponent, min_exponent


class Mat:
    """Immutable rectangular matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise InvalidInput("ragged matrix rows")
        if not self.rows:
            raise InvalidInput("empty matrix")

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int, like) -> "Mat":
        one, zero = like.one_like(), like.zero_like()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int, like) -> "Mat":
        zero = like.zero_like()
        return cls([[zero] * m for _ in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        zero = entries[0].zero_like()
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int, a) -> "Mat":
        """Transvection ``1 + a*E_ij`` (i != j)."""
        if i == j:
            raise InvalidInput("elementary matrices need i != j")
        rows = [list(r) for r in cls.identity(n, a).rows]
        rows[i][j] = a
        return cls(rows)

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["Mat"]]) -> "Mat":
        rows = []
        for brow in grid:
            for k in range(brow[0].nrows):
                rows.append([x for b in brow for x in b.rows[k]])
        return cls(rows)

    # access ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.nrows

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def map(self, fn: Callable) -> "Mat":
        return Mat([[fn(x) for x in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.rows)))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        return Mat([r[c0:c1] for r in self.rows[r0:r1]])

    def with_entry(self, i: int, j: int, x) -> "Mat":
        rows = [list(r) for r in self.rows]
        rows[i][j] = x
        return Mat(rows)

    def _like(self):
        return self.rows[0][0]

    def identity_like(self) -> "Mat":
        return Mat.identity(self.nrows, self._like())

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        self._check_shape(other)
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_shape(other)
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return self.map(lambda x: -x)

    def __mul__(self, c) -> "Mat":
        """Scalar multiple (entry-wise, scalar on the right)."""
        return self.map(lambda x: x * c)

    def scale_left(self, c) -> "Mat":
        return self.map(lambda x: c * x)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise InvalidInput("matrix shapes do not compose")
        cols = other.transpose().rows
        zero = self._like().zero_like()
        # sparse pass: exact zeros contribute nothing
        left = [[(k, a) for k, a in enumerate(r) if not a.is_exact_zero] for r in self.rows]
        right = [[b if not b.is_exact_zero else None for b in c] for c in cols]
        out = []
        for r in left:
            row = []
            for c in right:
                acc = zero
                for k, a in r:
                    b = c[k]
                    if b is not None:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Mat(out)

    def power(self, e: int) -> "Mat":
        if e < 0:
            return self.inverse().power(-e)
        out = self.identity_like()
        base = self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def _check_shape(self, other: "Mat") -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InvalidInput("matrix shape mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None

    def direct_sum(self, other: "Mat") -> "Mat":
        z = self._like().zero_like()
        top = [list(r) + [z] * other.ncols for r in self.rows]
        bot = [[z] * self.ncols + list(r) for r in other.rows]
        return Mat(top + bot)

    def stabilize(self, k: int = 1) -> "Mat":
        """``g`` block-summed with the identity of size k."""
        return self.direct_sum(Mat.identity(k, self._like()))

    # norms ----------------------------------------------------------------

    def norm_exponent(self) -> NormExponent:
        """Matrix norm ``max |a_ij|`` as an exponent (min of entry exponents)."""
        return min_exponent(x.val() for x in self.entries())

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    # determinants ---------------------------------------------------------

    def charpoly(self) -> list:
        """Coefficients ``[c_0=1, c_1, ..., c_n]`` of ``det(x*1 - self) = sum c_i x^(n-i)``.

        Berkowitz's algorithm: no divisions, so it works over any commutative ring.
        """
        if not self.is_square:
            raise InvalidInput("charpoly of a non-square matrix")
        like = self._like()
        one, zero = like.one_like(), like.zero_like()
        coeffs = [one]
        for k in range(1, self.nrows + 1):
            a = self.rows[k - 1][k - 1]
            if k == 1:
                col = [one, -a]
            else:
                r = list(self.rows[k - 1][: k - 1])
                s = [self.rows[i][k - 1] for i in range(k - 1)]
                b = [list(row[: k - 1]) for row in self.rows[: k - 1]]
                col = [one, -a]
                vec = s
                for _ in range(k - 1):
                    acc = zero
                    for x, y in zip(r, vec):
                        acc = acc + x * y
                    col.append(-acc)
                    nxt = []
                    for row in b:
                        acc = zero
                        for x, y in zip(row, vec):
                            acc = acc + x * y
                        nxt.append(acc)
                    vec = nxt
            # Toeplitz (k+1) x k lower-triangular matrix times previous vector
            new = []
            for i in range(k + 1):
                acc = zero
                for j in range(min(i + 1, k)):
                    acc = acc + col[i - j] * coeffs[j]
                new.append(acc)
            coeffs = new
        return coeffs

    def det(self):
        c = self.charpoly()
        return c[-1] if self.nrows % 2 == 0 else -c[-1]

    def trace(self):
        acc = self._like().zero_like()
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    # inversion ------------------------------------------------------------

    def inverse(self) -> "Mat":
        """Gauss-Jordan inverse with a maximal-norm pivot in each column.

        Over A0 the pivot must be a unit; over A = A0[1/pi] any pivot that is
        distinguishable from 0 works.
        """
        if not self.is_square:
            raise InvalidInput("inverse of a non-square matrix")
        n = self.nrows
        left = [list(r) for r in self.rows]
        right = [list(r) for r in self.identity_like().rows]
        for c in range(n):
            piv = None
            best = None
            for r in range(c, n):
                x = left[r][c]
                if x.is_zero():
                    continue
                v = x.val()
                if best is None or v.value < best.value:
                    piv, best = r, v
            if piv is None:
                if any(not left[r][c].is_exact_zero for r in range(c, n)):
                    raise InsufficientPrecision("singular at working precision")
                raise NotInvertible("matrix is singular")
            left[c], left[piv] = left[piv], left[c]
            right[c], right[piv] = right[piv], right[c]
            inv = left[c][c].inverse()
            left[c] = [inv * x for x in left[c]]
            right[c] = [inv * x for x in right[c]]
            for r in range(n):
                if r != c:
                    f = left[r][c]
                    if f.is_exact_zero:
                        continue
                    left[r] = [x - f * y for x, y in zip(left[r], left[c])]
                    right[r] = [x - f * y for x, y in zip(right[r], right[c])]
        return Mat(right)

    # residue-level information -------------------------------------------

    def residue_rows(self) -> list[list[int]]:
        """Entry-wise image in the residue field (entries must lie in A0)."""
        return [[_residue(x) for x in r] for r in self.rows]

    def residue_rank(self) -> int:
        ring = self._like().ring
        return ring.residue_field.rank(self.residue_rows())

    def to_json(self):
        return [[_entry_json(x) for x in r] for r in self.rows]

    def __repr__(self) -> str:
        return "Mat(" + repr([list(r) for r in self.rows]) + ")"


def _residue(x) -> int:
    if x.is_exact_zero:
        return 0
    return x.residue()


def _entry_json(x):
    return x.to_json()


def poly_eval(coeffs: Sequence[int], m: Mat) -> Mat:
    """Evaluate ``sum coeffs[i] * m**i`` (integer coefficients) by Horner's rule."""
    ident = m.identity_like()
    out = ident * 0
    for c in reversed(coeffs):
        out = out @ m + ident * c
    return out


__all__ = ["Mat", "poly_eval"]
