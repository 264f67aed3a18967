"""The retraction ``r: Sigma K1 -> K0`` for Laurent matrices, step by step.

Pipeline for ``M`` in ``GL_n(A0[t, t^-1])`` with ``det M = unit * t^k`` mod pi:

1. shift: ``M' = t^N M`` has polynomial entries (adds ``n N`` to the class);
2. linearize: the block companion pencil ``L = L0 + L1 t`` of size ``n d``
   is equivalent to ``M' + 1`` through unitriangular matrices and a block
   permutation;
3. normalize: ``b_i = L_i L(1)^-1`` gives ``b0 + b1 = 1`` (a constant factor
   is zero in Sigma K1);
4. split: the Fitting idempotent ``e`` of ``b0`` for eigenvalue 1 mod pi,
   Hensel-lifted as a polynomial in ``b0``; ``Q0 = im(1 - e)``;
5. ``r(M) = rank Q0 - n N``.

Also here: the Laurent unit splitting of ``1 + pi^n A0<t, t^-1>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InsufficientPrecision, InvalidInput, NotInvertible
from .linalg import Mat
from .padic_core import AdicScalar, RingDescriptor
from .tate_series import LaurentElement

# ---------------------------------------------------------------------------
# Laurent unit splitting


@dataclass(frozen=True)
class SplitResult:
    f: LaurentElement
    g: LaurentElement
    level: int
    iterations: int


def _is_congruent_one(x: LaurentElement, n: int) -> bool:
    return (x - x.one_like()).valuation() >= n


def laurent_unit_split(x: LaurentElement, n: int, levels: int) -> SplitResult:
    """Split ``x = f g`` modulo ``pi^(n + levels)`` with f in ``1 + pi^n A0[t]``, g in ``1 + pi^n A0[t^-1]``.

    Each round writes ``w = x - f g`` (divisible by ``pi^k``), splits it into
    its parts ``w+`` on exponents >= 0 and ``w-`` on exponents < 0 and
    replaces ``f, g`` by ``f (1 + w+), g (1 + w-)``; the new defect is
    divisible by ``pi^(k + n)``.  Products outside the window raise
    WindowOverflow.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if not x.integral:
        raise InvalidInput("splitting needs coefficients in A0")
    if not _is_congruent_one(x, n):
        raise InvalidInput(f"x is not congruent to 1 modulo pi^{n}")
    target = n + levels
    ring = x.ring
    if target > ring.precision and not ring.exact:
        raise InsufficientPrecision(f"target level {target} exceeds ring precision")
    one = x.one_like()
    f, g = one, one
    level = n
    it = 0
    while level < target:
        w = (x - f * g).with_precision(target)
        f = (f * (one + w.nonnegative_part())).with_precision(target)
        g = (g * (one + w.negative_part())).with_precision(target)
        level = min(level + n, target)
        it += 1
    f, g = _drop_zeros(f), _drop_zeros(g)
    return SplitResult(f, g, target, it)


def _drop_zeros(x: LaurentElement) -> LaurentElement:
    return x._new({e: c for e, c in x.coeffs.items() if not c.is_zero()})


# ---------------------------------------------------------------------------
# s and the pencil reduction


def bass_s(k: int, ring: RingDescriptor, window: int = 8) -> Mat:
    """``s(k)``: ``t I_k`` for k > 0, ``t^-1 I_-k`` for k < 0, the identity for k = 0."""
    one = LaurentElement(ring, {0: 1}, window, integral=True)
    if k == 0:
        return Mat([[one]])
    t = one.t_power(1 if k > 0 else -1)
    return Mat.diag([t] * abs(k))


@dataclass(frozen=True)
class LinearPencil:
    b0: Mat
    b1: Mat

    @property
    def size(self) -> int:
        return self.b0.nrows


@dataclass
class RetractionLedger:
    n: int
    N: int
    degree: int
    pencil_size: int
    det_exponent: int
    rank_P0: int | None = None
    rank_Q0: int | None = None

    @property
    def shift(self) -> int:
        return self.n * self.N

    @property
    def r(self) -> int | None:
        return None if self.rank_Q0 is None else self.rank_Q0 - self.shift

    def to_json(self) -> dict:
        return {"n": self.n, "N": self.N, "shift": self.shift, "degree": self.degree,
                "pencil_size": self.pencil_size, "det_exponent": self.det_exponent,
                "rank_P0": self.rank_P0, "rank_Q0": self.rank_Q0, "r": self.r}


def _ring_of(m: Mat) -> RingDescriptor:
    return m[0, 0].ring


def _widen(m: Mat, window: int) -> Mat:
    return m.map(lambda x: LaurentElement(x.ring, x.coeffs, window, True))


def det_residue(m: Mat) -> dict:
    """``det M`` modulo pi as ``{exponent: residue}``."""
    return m.det().residue()


def check_unit_times_power(m: Mat) -> int:
    """Return k with ``det M = unit * t^k`` mod pi, or raise InvalidInput."""
    res = det_residue(m)
    if len(res) != 1:
        raise InvalidInput(f"det M mod pi is not a unit times a power of t: {res}")
    return next(iter(res))


def _coefficient_matrices(m: Mat) -> list[Mat]:
    """``M = sum_k C_k t^k`` for polynomial M; returns ``[C_0, ..., C_d]``."""
    ring = _ring_of(m)
    d = max((x.max_degree() for x in m.entries()), default=0)
    out = []
    for k in range(d + 1):
        out.append(m.map(lambda x, k=k: x.coefficient(k)))
    return out


def _block_companion(cs: list[Mat], one: LaurentElement) -> tuple[Mat, Mat, Mat]:
    """``L = L0 + L1 t`` for ``sum C_k t^k`` with d = len(cs) - 1 >= 1 blocks."""
    n = cs[0].nrows
    d = len(cs) - 1
    ring = one.ring
    zero_s, one_s = ring.zero(), ring.one()
    size = n * d
    l0 = [[zero_s] * size for _ in range(size)]
    l1 = [[zero_s] * size for _ in range(size)]
    for r in range(d - 1):
        for i in range(n):
            l1[r * n + i][r * n + i] = -one_s
            l0[r * n + i][(r + 1) * n + i] = one_s
    last = (d - 1) * n
    for k in range(d):
        for i in range(n):
            for j in range(n):
                l0[last + i][k * n + j] = cs[k][i, j]
    for i in range(n):
        for j in range(n):
            l1[last + i][last + j] = cs[d][i, j]
    L0, L1 = Mat(l0), Mat(l1)
    lmat = Mat([[LaurentElement(ring, {0: L0[r, c], 1: L1[r, c]}, one.window, True)
                 for c in range(size)] for r in range(size)])
    return L0, L1, lmat


def _verify_linearization(lmat: Mat, mprime: Mat, d: int, n: int) -> bool:
    """Check ``Pi U L V = M' + 1`` with U, V block unitriangular, Pi a block permutation."""
    one = lmat[0, 0].one_like()
    t = one.t_power(1)
    size = n * d
    rows = [list(r) for r in lmat.rows]
    # L V with V[k][0] = t^k I: column block 0 += sum_k t^k * column block k
    for k in range(1, d):
        tk = one.t_power(k)
        for r in range(size):
            for i in range(n):
                rows[r][i] = rows[r][i] + rows[r][k * n + i] * tk
    last = (d - 1) * n

    def row_op(dst, src, coeff):
        rows[dst] = [a + coeff * b for a, b in zip(rows[dst], rows[src])]

    # clear the last block row on columns d-1, ..., 1 using row block c-1
    for c in range(d - 1, 0, -1):
        for i in range(n):
            for j in range(n):
                x = rows[last + i][c * n + j]
                if not x.is_zero():
                    row_op(last + i, (c - 1) * n + j, -x)
    # clear -t entries in row blocks 1..d-2
    for r in range(1, d - 1):
        for i in range(n):
            row_op(r * n + i, (r - 1) * n + i, t)
    order = [last + i for i in range(n)] + [r for r in range(last)]
    permuted = Mat([rows[r] for r in order])
    target = mprime.direct_sum(Mat.identity(n * (d - 1), one)) if d > 1 else mprime
    return permuted == target


def reduce_to_linear(m: Mat) -> tuple[LinearPencil, RetractionLedger, dict]:
    """Shift, linearize and normalize ``M`` to a pencil ``b0 + b1 t`` with ``b0 + b1 = 1``."""
    if not m.is_square:
        raise InvalidInput("Laurent matrix must be square")
    if not all(isinstance(x, LaurentElement) and x.integral for x in m.entries()):
        raise InvalidInput("entries must be Laurent polynomials over A0")
    n = m.nrows
    lo = min((x.min_degree() for x in m.entries() if x.support()), default=0)
    hi = max((x.max_degree() for x in m.entries() if x.support()), default=0)
    window = max(x.window for x in m.entries())
    work = 4 * (hi - lo + 1) * (n + 1) + window
    m = _widen(m, work)
    k = check_unit_times_power(m)
    N = max(0, -lo)
    mprime = m.map(lambda x: x.shift(N))
    cs = _coefficient_matrices(mprime)
    if len(cs) == 1:
        cs.append(cs[0].map(lambda x: x.zero_like()))
    d = len(cs) - 1
    one = m[0, 0].one_like()
    L0, L1, lmat = _block_companion(cs, one)
    lin_ok = _verify_linearization(lmat, mprime, d, n)
    if not lin_ok:
        raise AssertionError("block companion linearization failed to verify")
    l_at_1 = L0 + L1
    try:
        inv = l_at_1.inverse()
    except (NotInvertible, InsufficientPrecision) as exc:
        raise InsufficientPrecision(f"L(1) is not invertible over A0: {exc}") from None
    b0, b1 = L0 @ inv, L1 @ inv
    ledger = RetractionLedger(n=n, N=N, degree=d, pencil_size=n * d, det_exponent=k)
    certs = {
        "det_mod_pi": {str(e): r for e, r in det_residue(m).items()},
        "linearization_verified": lin_ok,
        "normalization": {"b0_plus_b1_is_identity": (b0 + b1) == b0.identity_like()},
    }
    return LinearPencil(b0, b1), ledger, certs


# ---------------------------------------------------------------------------
# Fitting splitting


def _poly_mulmod(f: list, g: list, chi: list) -> list:
    """Product of polynomials (ascending coefficients) modulo the monic ``chi``."""
    zero = chi[0].zero_like()
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_exact_zero:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return _poly_mod(out, chi)


def _poly_mod(f: list, chi: list) -> list:
    """Reduce modulo monic chi = x^n + chi[n-1] x^(n-1) + ... + chi[0] (ascending, chi[n] = 1)."""
    n = len(chi) - 1
    f = list(f)
    for d in range(len(f) - 1, n - 1, -1):
        c = f[d]
        if c.is_exact_zero:
            continue
        for i in range(n):
            f[d - n + i] = f[d - n + i] - c * chi[i]
        f[d] = c.zero_like()
    zero = chi[0].zero_like()
    return (f + [zero] * n)[:n]


def _poly_from_ints(coeffs: list[int], like) -> list:
    return [like.one_like() * c if c else like.zero_like() for c in coeffs]


def _poly_eval(coeffs: list, m: Mat) -> Mat:
    ident = m.identity_like()
    out = ident.map(lambda x: x.zero_like())
    for c in reversed(coeffs):
        out = out @ m + ident.map(lambda x, c=c: x * c)
    return out


def _nilpotence_index(m: Mat, bound: int) -> int | None:
    """Smallest k <= bound with ``m^k = 0`` mod pi (``m^0`` is the identity)."""
    cur = m.identity_like()
    for k in range(bound + 1):
        if all(v == 0 for row in cur.residue_rows() for v in row):
            return k
        cur = cur @ m
    return None


@dataclass
class FittingSplit:
    idempotent: Mat
    polynomial: list
    rank_P0: int
    rank_Q0: int
    iterations: int
    certificates: dict = field(default_factory=dict)


def fitting_split(pencil: LinearPencil, precision: int | None = None) -> FittingSplit:
    """Idempotent onto the part of A0^n' where b1 is topologically nilpotent."""
    b0, b1 = pencil.b0, pencil.b1
    ring = _ring_of(b0)
    n = b0.nrows
    N = ring.precision if precision is None else precision
    like = b0[0, 0]
    ident = b0.identity_like()
    # residue eigenvalues of b0 must lie in {0, 1}
    check = b0.power(n) @ (ident - b0).power(n)
    if any(v for row in check.residue_rows() for v in row):
        raise InvalidInput("pencil has a residue eigenvalue outside {0, 1}: not invertible")
    cp = b0.charpoly()          # descending, cp[0] = 1
    chi = list(reversed(cp))    # ascending, monic
    # e0(x) = 1 - (1 - x^n)^n as an integer polynomial
    base = [0] * (n * n + 1)
    for k in range(n + 1):
        base[n * k] -= math.comb(n, k) * (-1) ** k
    base[0] += 1
    poly = _poly_mod(_poly_from_ints(base, like), chi)
    poly = [c.with_precision(N) for c in poly]
    e = _poly_eval(poly, b0)
    history = [(e @ e - e).norm_exponent().to_json()["exponent"]]
    # the defect order doubles per Newton step, so ceil(log2 N) steps suffice;
    # the loop re-checks and keeps going if precision loss ever slows it down
    it = 0
    steps = max(1, math.ceil(math.log2(max(N, 2))))
    while (history[-1] != "+inf" and history[-1] < N):
        for _ in range(steps):
            sq = _poly_mulmod(poly, poly, chi)
            cube = _poly_mulmod(sq, poly, chi)
            poly = [(a * 3 - b * 2).with_precision(N) for a, b in zip(sq, cube)]
            it += 1
        e = _poly_eval(poly, b0)
        history.append((e @ e - e).norm_exponent().to_json()["exponent"])
        if it > 4 * N + 8:
            raise AssertionError("Hensel iteration did not converge")
        steps = 1
    rank_p = e.residue_rank()
    one_minus_e = ident - e
    certs = {
        "idempotent_defect_exponents": history,
        "commutes_with_b0": (e @ b0) == (b0 @ e),
        "commutes_with_b1": (e @ b1) == (b1 @ e),
        "b0_nilpotent_on_Q0_mod_pi": _nilpotence_index(one_minus_e @ b0, n),
        "b1_nilpotent_on_P0_mod_pi": _nilpotence_index(e @ b1, n),
        "polynomial_in_b0": [c.to_json() for c in poly],
    }
    return FittingSplit(e, poly, rank_p, n - rank_p, it, certs)


# ---------------------------------------------------------------------------
# the retraction


@dataclass
class RetractionResult:
    r: int
    ledger: RetractionLedger
    pencil: LinearPencil
    split: FittingSplit
    certificates: dict

    def to_json(self) -> dict:
        return {"r": self.r, "ledger": self.ledger.to_json(), "certificates": self.certificates}


def bass_r(m: Mat, precision: int | None = None) -> RetractionResult:
    pencil, ledger, certs = reduce_to_linear(m)
    split = fitting_split(pencil, precision)
    ledger.rank_P0 = split.rank_P0
    ledger.rank_Q0 = split.rank_Q0
    certs = dict(certs)
    certs["fitting"] = split.certificates
    return RetractionResult(ledger.r, ledger, pencil, split, certs)


def random_elementary_laurent(ring: RingDescriptor, n: int, rng, side: str,
                              max_degree: int = 2, window: int = 8) -> Mat:
    """Random transvection with a polynomial entry in ``t`` (side '+') or ``t^-1`` (side '-')."""
    if n < 2:
        raise InvalidInput("transvections need n >= 2")
    i, j = rng.sample(range(n), 2)
    sign = 1 if side == "+" else -1
    coeffs = {sign * e: rng.randrange(ring.p ** min(ring.precision, 3))
              for e in range(0, max_degree + 1) if rng.random() < 0.7}
    entry = LaurentElement(ring, coeffs, window, True)
    return Mat.elementary(n, i, j, entry) if not entry.is_exact_zero else \
        Mat.identity(n, entry.one_like())


def sigma_coker_check(ring: RingDescriptor, rng, samples: int = 10, window: int = 8) -> dict:
    """Sampled degree-(1, 0) shadow of the Bass sequence.

    (a) invertible matrices over ``A0[t]`` or ``A0[t^-1]`` retract to 0;
    (b) ``r(s(k) X) = k`` for such X;
    (c) products of r-zero elements are r-zero.
    """
    failures = []
    cases = 0
    one = LaurentElement(ring, {0: 1}, window, True)
    pi = ring.pi()
    for idx in range(samples):
        side = "+" if idx % 2 == 0 else "-"
        u = ring.scalar(rng.randrange(1, ring.p)) if ring.p > 2 else ring.one()
        e = 1 if side == "+" else -1
        unit_factor = LaurentElement(ring, {0: u, e: u * pi * rng.randrange(1, ring.p + 1)},
                                     window, True)
        x = Mat([[unit_factor, one.zero_like()], [one.zero_like(), one]])
        x = x @ random_elementary_laurent(ring, 2, rng, side, window=window)
        y = random_elementary_laurent(ring, 2, rng, "-" if side == "+" else "+", window=window)
        k = rng.randint(-2, 2)
        s = bass_s(k, ring, window)
        s2 = s.direct_sum(Mat.identity(2 - s.nrows, one)) if s.nrows < 2 else s
        x2 = x.direct_sum(Mat.identity(s2.nrows - 2, one)) if s2.nrows > 2 else x
        y2 = y.direct_sum(Mat.identity(s2.nrows - 2, one)) if s2.nrows > 2 else y
        checks = {
            "r(x)": (bass_r(x).r, 0),
            "r(y)": (bass_r(y).r, 0),
            "r(x y)": (bass_r(x @ y).r, 0),
            "r(s(k) x)": (bass_r(s2 @ x2).r, k),
        }
        for name, (got, want) in checks.items():
            cases += 1
            if got != want:
                failures.append({"case": idx, "check": name, "got": got, "expected": want})
    return {"cases": cases, "failures": failures}


__all__ = [
    "SplitResult", "laurent_unit_split", "bass_s", "LinearPencil", "RetractionLedger",
    "det_residue", "check_unit_times_power", "reduce_to_linear", "FittingSplit",
    "fitting_split", "RetractionResult", "bass_r", "random_elementary_laurent",
    "sigma_coker_check",
]
