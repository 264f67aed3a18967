"""Named verification suites behind ``tatek verify``.

Every suite is a function ``(run: SuiteRun) -> None`` that records named
checks.  Sample counts scale with ``size``; ``size = 0`` runs nothing.
Reports are deterministic for a fixed seed: checks are recorded under
stable case ids and failures are sorted by id.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .bass import (bass_r, bass_s, laurent_unit_split, random_elementary_laurent,
                   sigma_coker_check)
from .errors import TatekError
from .kgroups import (k0, k0_an_pi0, k1cont_level, k1cont_lift, k1cont_transition,
                      kv1_certify_trivial, tame_symbol)
from .linalg import Mat
from .matgroup import (certificate_replay, contracting_homotopy, elementary_factorization,
                       face_matrix, glrho_certificate, in_congruence_subgroup, invert)
from .padic_core import (AdicScalar, DualScalar, NormExponent, RingDescriptor, TateScalar,
                         gauge_exponent, hensel_lift_idempotent, random_adic, random_tate,
                         unitalize)
from .tate_series import LaurentElement, random_series, simplex_ring_element
from .witt import (WittVector, ghost, ghost_integers, pi_ideal_membership,
                   pi_tower_transition, teichmuller, teichmuller_pi, universal_polynomial,
                   witt_mul)

DEFAULT_SIZE = 20


@dataclass
class SuiteReport:
    suite: str
    seed: int
    size: int
    cases: int = 0
    failures: list = field(default_factory=list)
    wall_time: float | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "size": self.size,
               "cases": self.cases, "failures": sorted(self.failures, key=lambda f: f["case"]),
               "passed": self.ok}
        if timing and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out


class SuiteRun:
    """Recording context handed to a suite function."""

    def __init__(self, report: SuiteReport, rng: random.Random, fixture: dict | None = None):
        self.report = report
        self.rng = rng
        self.size = report.size
        self.fixture = fixture

    def check(self, case: str, ok: bool, payload=None) -> bool:
        self.report.cases += 1
        if not ok:
            self.report.failures.append({"case": case, "counterexample": payload})
        return ok

    def guarded(self, case: str, fn: Callable[[], bool], payload=None) -> bool:
        """Run ``fn``; an exception counts as a failure with its message attached."""
        try:
            ok = bool(fn())
        except (TatekError, ArithmeticError, ValueError) as exc:
            return self.check(case, False, {"input": payload, "error": f"{type(exc).__name__}: {exc}"})
        return self.check(case, ok, payload)


def _j(x):
    """JSON form of a value for counterexample payloads."""
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_j(y) for y in x]
    return x


# ---------------------------------------------------------------------------
# rings used by the suites

def _tate_rings() -> list[RingDescriptor]:
    return [RingDescriptor.zp(5, 8), RingDescriptor.zp(2, 8), RingDescriptor.zp(3, 8),
            RingDescriptor.fq_powerseries(3, 8), RingDescriptor.fq_powerseries(4, 6)]


def _all_rings() -> list[RingDescriptor]:
    return _tate_rings() + [RingDescriptor.zmod(3 ** 5)]


def _ring_tag(ring: RingDescriptor) -> str:
    if ring.kind == "zmod":
        return f"zmod{ring.p}^{ring.precision}"
    if ring.kind == "zp":
        return f"zp{ring.p}"
    return f"fq{ring.q}"


def _random_scalar(ring: RingDescriptor, rng: random.Random):
    if ring.is_tate:
        return random_tate(ring, rng, -3, 3, zero_weight=0.05)
    x = random_adic(ring, rng, min_val=rng.randint(0, ring.precision))
    return x


def _truncate_randomly(x, rng):
    """Lower the precision of some samples so mixed precisions get exercised."""
    if rng.random() < 0.3:
        if isinstance(x, AdicScalar) and not x.is_exact:
            return x.with_precision(rng.randint(1, x.precision))
        if isinstance(x, TateScalar) and not x.is_exact_zero and math.isfinite(x.unit.precision):
            return TateScalar(x.ring, x.unit.with_precision(rng.randint(1, x.unit.precision)),
                              x.shift)
    return x


def _known(e: NormExponent) -> bool:
    return not e.lower_bound_only and math.isfinite(e.value)


# ---------------------------------------------------------------------------
# ultrametric


def suite_ultrametric(run: SuiteRun) -> None:
    rng = run.rng
    for ring in _all_rings():
        tag = _ring_tag(ring)
        domain = ring.is_tate
        for i in range(run.size):
            cid = f"{tag}:{i:04d}"
            x = _truncate_randomly(_random_scalar(ring, rng), rng)
            y = _truncate_randomly(_random_scalar(ring, rng), rng)
            payload = {"ring": ring.to_json(), "x": _j(x), "y": _j(y)}
            vx, vy = x.val(), y.val()
            run.check(f"{cid}:zero", x.is_zero() == (vx.lower_bound_only or vx.value == math.inf),
                      payload)
            run.check(f"{cid}:neg", (-x).val() == vx, payload)
            vs = (x + y).val()
            ok = vs >= min(vx, vy)
            if _known(vx) and _known(vy) and vx != vy:
                ok = ok and vs == min(vx, vy)
            run.check(f"{cid}:ultrametric", ok, payload)
            vp = (x * y).val()
            # a product that is zero at its precision only carries a lower bound
            ok = vp.lower_bound_only or vp.value >= vx.value + vy.value
            if domain and _known(vx) and _known(vy) and _known(vp):
                ok = ok and vp == vx + vy
            run.check(f"{cid}:submultiplicative", ok, payload)
            run.check(f"{cid}:precision", _precision_monotone(x, y), payload)
            if domain and not x.is_zero():
                run.guarded(f"{cid}:inverse", lambda: x * x.inverse() == x.one_like(), payload)
            run.check(f"{cid}:unitalize_isometric", unitalize(x, 0).norm() == vx, payload)
            n = rng.randint(-3, 3)
            want = min(vx, NormExponent(0) if n else NormExponent.infinite())
            run.check(f"{cid}:unitalize_max", unitalize(x, n).norm() == want, payload)
            if domain and not x.is_zero() and _known(vx):
                k, c = rng.randint(1, 3), rng.randint(0, 3)
                g = gauge_exponent(x, k, c)
                run.check(f"{cid}:gauge_bounded", abs(k * g.value - vx.value) <= k + c,
                          {**payload, "k": k, "conductor": c, "gauge": g.to_json()})
        for i in range(max(run.size // 10, 1) if run.size else 0):
            _hensel_case(run, ring, f"{tag}:hensel{i:03d}")


def _precision_monotone(x, y) -> bool:
    if isinstance(x, AdicScalar):
        bound = min(x.precision, y.precision)
        p = x * y
        # an exact zero factor makes the product an exact zero
        absorbed = p.is_exact_zero and (x.is_exact_zero or y.is_exact_zero)
        return (x + y).precision <= bound and (absorbed or p.precision <= bound)
    ok = True
    s, p = x + y, x * y
    if math.isfinite(min(x.absprec, y.absprec)):
        ok = ok and s.absprec <= min(x.absprec, y.absprec)
    if not (x.is_zero() or y.is_zero()) and math.isfinite(min(x.relprec, y.relprec)):
        ok = ok and (p.is_zero() or p.relprec <= min(x.relprec, y.relprec))
    return ok


def _hensel_case(run: SuiteRun, ring: RingDescriptor, cid: str) -> None:
    rng = run.rng
    n = rng.randint(2, 3)
    one, zero = ring.one(), ring.zero()
    k = rng.randint(0, n)
    d = Mat.diag([one if i < k else zero for i in range(n)])
    p = Mat.identity(n, one)
    for _ in range(3):
        i, j = rng.sample(range(n), 2)
        p = p @ Mat.elementary(n, i, j, random_adic(ring, rng))
    e0 = p @ d @ invert(p).inverse
    noise = Mat([[random_adic(ring, rng, min_val=1) for _ in range(n)] for _ in range(n)])
    e0 = e0 + noise
    payload = {"ring": ring.to_json(), "e0": _j(e0)}

    def check():
        lift = hensel_lift_idempotent(e0)
        hist = lift.defect_valuations
        quad = all(h.value >= min(2 ** it, ring.precision) for it, h in enumerate(hist))
        congruent = (lift.idempotent - e0).norm_exponent().value >= 1
        return quad and congruent and lift.idempotent.residue_rank() == k
    run.guarded(f"{cid}", check, payload)


# ---------------------------------------------------------------------------
# gauss


def suite_gauss(run: SuiteRun) -> None:
    rng = run.rng
    for ring in _all_rings():
        tag = _ring_tag(ring)
        integral = not ring.is_tate
        domain = ring.is_tate
        for i in range(run.size):
            cid = f"{tag}:{i:04d}"
            nv = rng.randint(1, 2)
            j = rng.randint(0, 3)
            f = random_series(ring, rng, nv, 3, j, 6, integral=integral)
            g = random_series(ring, rng, nv, 3, j, 6, integral=integral)
            payload = {"f": _j(f), "g": _j(g)}
            nf, ng = f.gauss_norm(), g.gauss_norm()
            formula = NormExponent.infinite()
            for idx, c in f.coeffs.items():
                formula = min(formula, c.val() - j * sum(idx))
            run.check(f"{cid}:formula", nf == formula and nf.lower_bound_only == formula.lower_bound_only,
                      payload)
            npd = (f * g).gauss_norm()
            ok = npd.value >= nf.value + ng.value
            if domain and _known(nf) and _known(ng) and _known(npd):
                ok = ok and npd == nf + ng
            run.check(f"{cid}:submultiplicative", ok, payload)
            if f.in_unit_ball() and g.in_unit_ball():
                run.check(f"{cid}:unit_ball", (f + g).in_unit_ball() and (f * g).in_unit_ball(),
                          payload)
            a = _bounded_scalar(ring, rng, integral)
            b = _bounded_scalar(ring, rng, integral)
            run.check(f"{cid}:psi_functorial",
                      f.psi_substitute(a).psi_substitute(b) == f.psi_substitute(a * b),
                      {**payload, "a": _j(a), "b": _j(b)})
            if j > 0:
                jj = rng.randint(0, j - 1)
                run.check(f"{cid}:restrict_monotone",
                          f.restrict(jj).gauss_norm() >= nf, {**payload, "to": jj})
            f0 = random_series(ring, rng, nv, 3, 0, 6, integral=integral)
            pi = f0.scalar(ring.pi() if integral else ring.tate(1, -1))
            left = f0.theta(j + 1).restrict(j)
            right = f0.psi_substitute(pi).theta(j)
            run.check(f"{cid}:theta_square", left == right, {"f": _j(f0), "j": j})


def _bounded_scalar(ring, rng, integral):
    if integral:
        return random_adic(ring, rng, min_val=rng.randint(0, 2))
    return random_tate(ring, rng, 0, 3)


# ---------------------------------------------------------------------------
# simplicial


def _random_simplex(ring, rng, degree, j, extra=0, max_deg=2):
    terms = {}
    nv = extra + degree
    for _ in range(rng.randint(1, 4)):
        idx = [0] * nv
        for _ in range(rng.randint(0, max_deg)):
            if nv:
                idx[rng.randrange(nv)] += 1
        terms[tuple(idx)] = random_adic(ring, rng)
    return simplex_ring_element(ring, degree, terms, j, extra=extra, degree_bound=10)


def suite_simplicial(run: SuiteRun) -> None:
    rng = run.rng
    rings = [RingDescriptor.zp(3, 6), RingDescriptor.fq_powerseries(4, 5),
             RingDescriptor.zmod(5 ** 4)]
    for ring in rings:
        tag = _ring_tag(ring)
        for i in range(run.size):
            cid = f"{tag}:{i:04d}"
            j = rng.randint(0, 2)
            m = rng.randint(0, 3)
            x = _random_simplex(ring, rng, m, j)
            y = _random_simplex(ring, rng, m, j)
            pay = {"x": _j(x.series), "degree": m, "j": j}
            _simplicial_identities(run, cid, x, pay)
            run.check(f"{cid}:face_const", all(x.const(5).face(k) == x.const(5).face(k).const(5)
                                               for k in range(m + 1)) if m else True, pay)
            if m:
                k = rng.randint(0, m)
                run.check(f"{cid}:face_mult", (x * y).face(k) == x.face(k) * y.face(k), pay)
            n = rng.randint(0, 2)
            z = _random_simplex(ring, rng, n, j, extra=1)
            w = _random_simplex(ring, rng, n, j, extra=1)
            _homotopy_checks(run, cid, z, w, ring, j)
            _contracting_checks(run, cid, ring, rng, j)
            _uniformizer_square(run, cid, ring, rng, j, m)


def _simplicial_identities(run: SuiteRun, cid: str, x, pay) -> None:
    m = x.degree
    ok = True
    for jj in range(m + 1):
        for ii in range(jj):
            if m >= 2:
                ok &= x.face(jj).face(ii) == x.face(ii).face(jj - 1)
    if m >= 2:
        run.check(f"{cid}:dd", ok, pay)
    ok = True
    for jj in range(m + 1):
        for ii in range(jj + 1):
            ok &= x.degeneracy(jj).degeneracy(ii) == x.degeneracy(ii).degeneracy(jj + 1)
    run.check(f"{cid}:ss", ok, pay)
    ok_lt, ok_eq, ok_gt = True, True, True
    for jj in range(m + 1):
        s = x.degeneracy(jj)
        for ii in range(m + 2):
            if ii < jj:
                ok_lt &= s.face(ii) == x.face(ii).degeneracy(jj - 1)
            elif ii in (jj, jj + 1):
                ok_eq &= s.face(ii) == x
            else:
                ok_gt &= s.face(ii) == x.face(ii - 1).degeneracy(jj)
    run.check(f"{cid}:ds_lt", ok_lt, pay)
    run.check(f"{cid}:ds_id", ok_eq, pay)
    run.check(f"{cid}:ds_gt", ok_gt, pay)


def _homotopy_checks(run: SuiteRun, cid: str, z, w, ring, j) -> None:
    n = z.degree
    pay = {"z": _j(z.series), "degree": n, "j": j}
    pij = z.series.scalar(ring.pi() ** j)
    zero_map = z.substitute_extra(lambda t: t.zero_like())
    scale_map = z.substitute_extra(lambda t: t * pij)
    run.check(f"{cid}:h_endpoint0", z.homotopy_h(0).face(0) == zero_map, pay)
    run.check(f"{cid}:h_endpoint1", z.homotopy_h(n).face(n + 1) == scale_map, pay)
    ok = True
    for jj in range(n + 1):
        h = z.homotopy_h(jj)
        for ii in range(n + 2):
            if ii < jj:
                ok &= h.face(ii) == z.face(ii).homotopy_h(jj - 1)
            elif ii > jj + 1:
                ok &= h.face(ii) == z.face(ii - 1).homotopy_h(jj)
        if jj < n:
            ok &= z.homotopy_h(jj + 1).face(jj + 1) == h.face(jj + 1)
        for ii in range(n + 1):
            if ii <= jj:
                ok &= h.degeneracy(ii) == z.degeneracy(ii).homotopy_h(jj + 1)
            else:
                ok &= h.degeneracy(ii) == z.degeneracy(ii - 1).homotopy_h(jj)
    run.check(f"{cid}:h_identities", ok, pay)
    ell = run.rng.randint(0, n)
    run.check(f"{cid}:h_multiplicative",
              (z * w).homotopy_h(ell) == z.homotopy_h(ell) * w.homotopy_h(ell), pay)
    tfree = z.substitute_extra(lambda t: t.zero_like())
    run.check(f"{cid}:h_tfree", tfree.homotopy_h(ell) == tfree.degeneracy(ell), pay)


def _contracting_checks(run: SuiteRun, cid: str, ring, rng, j) -> None:
    m = rng.randint(1, 2)
    n = rng.randint(1, 2)
    size = 2
    one = simplex_ring_element(ring, m, {(0,) * m: 1}, j, degree_bound=10)
    rows = []
    for r in range(size):
        row = []
        for c in range(size):
            a = _random_simplex(ring, rng, m, j)
            a = a * one.const(ring.pi() ** (n + j))
            row.append((one if r == c else one.zero_like()) + a)
        rows.append(row)
    g = Mat(rows)
    pay = {"g": [[_j(x.series) for x in r] for r in g.rows], "m": m, "n": n, "j": j}
    ident = g.identity_like()
    run.guarded(f"{cid}:H0", lambda: contracting_homotopy(g, [0] * (m + 1), n, j) == ident, pay)
    run.guarded(f"{cid}:H1", lambda: contracting_homotopy(g, [1] * (m + 1), n, j) == g, pay)
    cut = rng.randint(0, m + 1)
    s = [0] * cut + [1] * (m + 1 - cut)

    def member():
        h = contracting_homotopy(g, s, n, j)
        return in_congruence_subgroup(h, n)
    run.guarded(f"{cid}:H_member", member, {**pay, "s": s})

    def faces():
        h = contracting_homotopy(g, s, n, j)
        ok = True
        for i in range(m + 1):
            si = s[:i] + s[i + 1:]
            ok &= face_matrix(h, i) == contracting_homotopy(face_matrix(g, i), si, n, j)
        return ok
    run.guarded(f"{cid}:H_faces", faces, {**pay, "s": s})


def _uniformizer_square(run: SuiteRun, cid: str, ring, rng, j, m) -> None:
    """Square for ``varpi = u pi``: both composites are ``t -> u^(j+1) pi t``."""
    u = random_adic(ring, rng, unit=True)
    varpi = u * ring.pi()
    x = _random_simplex(ring, rng, m, 0)
    series = x.series
    src = type(x)(series, m, x.series.scalar(varpi ** (j + 1)), 0)
    top_right = src.psi(varpi).psi(u ** j)
    left_bottom = src.psi(u ** (j + 1)).psi(ring.pi())
    diam = series.scalar(ring.pi() ** j)
    ok = (top_right == left_bottom and top_right.diameter == diam
          and left_bottom.diameter == diam)
    run.check(f"{cid}:uniformizer_square", ok, {"x": _j(series), "u": _j(u), "j": j})


# ---------------------------------------------------------------------------
# glrho


def suite_glrho(run: SuiteRun) -> None:
    rng = run.rng
    if run.size:
        _glrho_fixtures(run)
    for ring in (RingDescriptor.zp(5, 8), RingDescriptor.zp(3, 8),
                 RingDescriptor.fq_powerseries(3, 8)):
        tag = _ring_tag(ring)
        for i in range(run.size):
            cid = f"{tag}:{i:04d}"
            n = rng.randint(2, 3)
            g = _random_glrho_input(ring, rng, n)
            j = rng.randint(0, 3)
            pay = {"g": _j(g), "j": j}
            cert = glrho_certificate(g, j, 16)
            if cert is not None:
                run.check(f"{cid}:replay", all(certificate_replay(g, cert, k) for k in range(1, 6)),
                          {**pay, "certificate": cert.to_json()})
                run.check(f"{cid}:radius_monotone",
                          all(glrho_certificate(g, jj, 16) is not None for jj in range(j)), pay)
            _congruence_checks(run, cid, ring, rng)
            _det_and_words(run, cid, ring, rng)
            _kv1_checks(run, cid, ring, rng, j)


def _glrho_fixtures(run: SuiteRun) -> None:
    for ring in (RingDescriptor.zp(5, 8), RingDescriptor.fq_powerseries(3, 8)):
        tag = _ring_tag(ring)
        one, zero = ring.tate(1), ring.tate(0)
        pi = ring.tate(1, -1)
        d = Mat([[one + pi, zero], [zero, one]])
        c0 = glrho_certificate(d, 0, 64)
        run.check(f"{tag}:fixture:diag_j0", c0 is not None and c0.exponent == 1,
                  {"g": _j(d), "j": 0})
        run.check(f"{tag}:fixture:diag_j1", glrho_certificate(d, 1, 64) is None,
                  {"g": _j(d), "j": 1})
        u = Mat([[one, pi], [zero, one]])
        run.check(f"{tag}:fixture:unipotent",
                  all(glrho_certificate(u, j, 64) is not None for j in range(6)),
                  {"g": _j(u)})


def _random_glrho_input(ring, rng, n):
    one = ring.tate(1)
    kind = rng.randrange(3)
    if kind == 0:
        a = rng.randint(0, 3)
        x = Mat([[random_tate(ring, rng, a, a + 3, 0.3) for _ in range(n)] for _ in range(n)])
        return Mat.identity(n, one) + x
    if kind == 1:
        g = Mat.identity(n, one)
        for _ in range(rng.randint(1, 3)):
            i, k = sorted(rng.sample(range(n), 2))
            g = g @ Mat.elementary(n, i, k, random_tate(ring, rng, -2, 3))
        return g
    diag = [one + random_tate(ring, rng, 0, 3) for _ in range(n)]
    return Mat.diag(diag)


def _congruence_checks(run, cid, ring, rng):
    n = rng.randint(1, 3)
    size = 2
    one = ring.tate(1)

    def member():
        return Mat.identity(size, one) + Mat([[random_tate(ring, rng, n, n + 3, 0.3)
                                               for _ in range(size)] for _ in range(size)])
    g, h = member(), member()
    pay = {"g": _j(g), "h": _j(h), "n": n}
    run.check(f"{cid}:congruence_product", in_congruence_subgroup(g @ h, n), pay)
    run.guarded(f"{cid}:congruence_inverse",
                lambda: in_congruence_subgroup(invert(g).inverse, n), pay)


def _random_gl(ring, rng, n, tate=True):
    while True:
        if tate:
            m = Mat([[random_tate(ring, rng, 0, 3, 0.2) for _ in range(n)] for _ in range(n)])
        else:
            m = Mat([[random_adic(ring, rng) for _ in range(n)] for _ in range(n)])
        d = m.det()
        if not d.is_zero() and (tate or d.is_unit()):
            return m


def _det_and_words(run, cid, ring, rng):
    n = rng.randint(2, 3)
    g, h = _random_gl(ring, rng, n, False), _random_gl(ring, rng, n, False)
    pay = {"g": _j(g), "h": _j(h)}
    run.check(f"{cid}:det_multiplicative", (g @ h).det() == g.det() * h.det(), pay)

    def words():
        fac = elementary_factorization(g)
        w = fac.word.replay()
        return fac.replay() == g and w.det() == w[0, 0].one_like()
    run.guarded(f"{cid}:elementary_replay", words, pay)


def _kv1_checks(run, cid, ring, rng, j):
    one = ring.tate(1)
    n = 2
    g = Mat.identity(n, one) + Mat([[random_tate(ring, rng, j + 1, j + 4, 0.3)
                                     for _ in range(n)] for _ in range(n)])
    pay = {"g": _j(g), "j": j}

    def replay():
        w = kv1_certify_trivial(g, j, 16)
        return w is not None and w.replay() == g
    run.guarded(f"{cid}:kv1_replay", replay, pay)
    h = Mat([[random_tate(ring, rng, 0, 2, 0.3) for _ in range(n)] for _ in range(n)])
    gd = g.map(DualScalar.lift)
    hd = Mat([[DualScalar(one if r == c else one.zero_like(), h[r, c]) for c in range(n)]
              for r in range(n)])

    def nil():
        w = kv1_certify_trivial(gd @ hd, j, 16)
        return w is not None and w.replay() == gd @ hd
    run.guarded(f"{cid}:kv1_nil_invariance", nil, {**pay, "h": _j(h)})


# ---------------------------------------------------------------------------
# k1cont


def unit_group_counts(p: int, q: int, n: int, kind: str) -> dict[int, int]:
    """Brute force: for each d dividing the unit count, #{u in (A0/pi^n)^x : u^d = 1}."""
    ring = RingDescriptor.zp(p, n) if kind == "zp" else RingDescriptor.fq_powerseries(q, n)
    b = ring.backend
    units = []
    if kind == "zp":
        mod = p ** n
        units = [x for x in range(mod) if x % p]
        order = len(units)
        pw = lambda x, d: pow(x, d, mod)  # noqa: E731
        is_one = lambda x: x == 1  # noqa: E731
    else:
        import itertools
        f = ring.residue_field
        elems = [tuple(ds) for ds in itertools.product(range(q), repeat=n) if ds[0] != 0]
        units = [ring.scalar(list(ds)) for ds in elems]
        order = len(units)
        pw = lambda x, d: x ** d  # noqa: E731
        is_one = lambda x: x == x.one_like()  # noqa: E731
        del f, b
    out = {}
    for d in range(1, order + 1):
        if order % d == 0:
            out[d] = sum(1 for u in units if is_one(pw(u, d)))
    return out


def counts_from_orders(orders: list[int], order: int) -> dict[int, int]:
    out = {}
    for d in range(1, order + 1):
        if order % d == 0:
            out[d] = math.prod(math.gcd(d, m) for m in orders)
    return out


def suite_k1cont(run: SuiteRun) -> None:
    rng = run.rng
    if not run.size:
        return
    configs = [("zp", 2, 2, 6), ("zp", 3, 3, 6), ("zp", 5, 5, 5), ("fq", 2, 4, 3),
               ("fq", 3, 9, 2)]
    for kind, p, q, nmax in configs:
        ring = RingDescriptor.zp(p, 8) if kind == "zp" else RingDescriptor.fq_powerseries(q, 8)
        tag = _ring_tag(ring)
        for n in range(1, nmax + 1):
            lvl = k1cont_level(ring, n)
            grp = lvl.group
            order = math.prod(grp.torsion) if grp.torsion else 1
            oracle = unit_group_counts(p, q, n, kind)
            total = (q - 1) * q ** (n - 1)
            run.check(f"{tag}:level{n}:presentation",
                      grp.free_rank == 1 and order == total
                      and counts_from_orders(list(grp.torsion), total) == oracle,
                      {"ring": ring.to_json(), "n": n, "group": grp.to_json()})
            samples = max(run.size // 4, 1)
            for s in range(samples):
                cid = f"{tag}:level{n}:{s:03d}"
                u = random_adic(ring, rng, unit=True)
                x = TateScalar(ring, u, -rng.randint(-3, 3))
                c = lvl.class_of(x)
                pay = {"x": _j(x), "n": n}
                lift = k1cont_lift(c, rng) if n < ring.precision else None
                if lift is not None:
                    run.check(f"{cid}:lift", k1cont_transition(lift) == c, pay)
                w = random_adic(ring, rng, unit=True)
                same = (u - w).valuation() >= n
                run.check(f"{cid}:comparison",
                          (lvl.class_of(TateScalar.from_adic(u)) == lvl.class_of(TateScalar.from_adic(w))) == same,
                          {**pay, "u": _j(u), "w": _j(w)})
                if n >= 2:
                    run.check(f"{cid}:transition_hom",
                              k1cont_transition(c * c) == k1cont_transition(c) * k1cont_transition(c),
                              pay)
    _tame_checks(run)
    for ring in (RingDescriptor.zp(5, 8), RingDescriptor.zp(2, 8), RingDescriptor.zmod(9),
                 RingDescriptor.zmod(25)):
        groups = [k0_an_pi0(ring, j).to_json() for j in range(5)]
        run.check(f"{_ring_tag(ring)}:k0an_constant",
                  all(g == k0(ring).to_json() for g in groups), {"groups": groups})


def _tame_checks(run: SuiteRun) -> None:
    rng = run.rng
    for ring in (RingDescriptor.zp(5, 8), RingDescriptor.zp(3, 8), RingDescriptor.zp(2, 8),
                 RingDescriptor.fq_powerseries(4, 8)):
        tag = _ring_tag(ring)
        f = ring.residue_field
        pi = ring.tate(1, -1)
        run.check(f"{tag}:tame:pi_pi", tame_symbol(pi, pi) == f.from_int(-1), {})
        for i in range(run.size):
            cid = f"{tag}:tame:{i:04d}"
            a1, a2, b = (random_tate(ring, rng, -3, 3) for _ in range(3))
            pay = {"a1": _j(a1), "a2": _j(a2), "b": _j(b)}
            run.check(f"{cid}:bimult_left",
                      tame_symbol(a1 * a2, b) == f.mul(tame_symbol(a1, b), tame_symbol(a2, b)), pay)
            run.check(f"{cid}:bimult_right",
                      tame_symbol(b, a1 * a2) == f.mul(tame_symbol(b, a1), tame_symbol(b, a2)), pay)
            run.check(f"{cid}:antisymmetric",
                      f.mul(tame_symbol(a1, b), tame_symbol(b, a1)) == 1, pay)
            a = a1
            one_minus = a.one_like() - a
            if not one_minus.is_zero():
                run.check(f"{cid}:steinberg", tame_symbol(a, one_minus) == 1, pay)
            run.check(f"{cid}:a_minus_a", tame_symbol(a, -a) == 1, pay)


# ---------------------------------------------------------------------------
# witt


def solve_pi_multiple(f: WittVector, n: int) -> WittVector | None:
    """Coefficient-by-coefficient search for ``w`` with ``[pi]^n * w = f`` over Z/p^k.

    Coefficient i of ``[c] * w`` is affine in ``w_i`` once ``w_1..w_(i-1)`` are
    fixed, so each step scans all residues for ``w_i``.  Together with
    :func:`universal_isobaric` (coefficient i lies in ``c^i A0`` for every w)
    a failed step proves that no w exists.
    """
    ring = f.ring
    if ring.kind != "zmod":
        raise ValueError("brute force needs a finite ring")
    mod = ring.p ** ring.precision
    L = f.length
    c = teichmuller(ring.pi() ** n, L)
    w = [0] * L
    for i in range(L):
        def coeff(x):
            trial = WittVector.from_coefficients(ring, w[:i] + [x] + [0] * (L - i - 1))
            return witt_mul(c, trial).coeffs[i].to_int()
        base = coeff(0)
        slope = (coeff(1) - base) % mod
        target = f.coeffs[i].to_int()
        hit = next((x for x in range(mod) if (base + slope * x - target) % mod == 0), None)
        if hit is None:
            return None
        w[i] = hit
    sol = WittVector.from_coefficients(ring, w)
    return sol if witt_mul(c, sol) == f else None


def universal_isobaric(length: int) -> bool:
    """Every monomial of ``P_n`` has weight n in the a-variables and in the b-variables."""
    for n in range(1, length + 1):
        for mono in universal_polynomial(n):
            wa = sum((v // 2) * e for v, e in mono if v % 2 == 0)
            wb = sum((v // 2) * e for v, e in mono if v % 2 == 1)
            if wa != n or wb != n:
                return False
    return True


def _random_witt(ring, rng, L):
    return WittVector.from_coefficients(ring, [rng.randrange(ring.p ** ring.precision)
                                               for _ in range(L)])


def suite_witt(run: SuiteRun) -> None:
    rng = run.rng
    if not run.size:
        return
    ring = RingDescriptor.zmod(3 ** 9)
    cover = RingDescriptor.zmod(3 ** 400)
    run.check("universal:isobaric", universal_isobaric(6), {})
    for i in range(run.size):
        cid = f"{i:04d}"
        L = rng.randint(1, 6)
        f, g, h = (_random_witt(ring, rng, L) for _ in range(3))
        pay = {"f": _j(f.coeffs), "g": _j(g.coeffs), "h": _j(h.coeffs)}
        zero, one = WittVector.zero(ring, L), WittVector.one(ring, L)
        run.check(f"{cid}:add_assoc", (f + g) + h == f + (g + h), pay)
        run.check(f"{cid}:add_comm", f + g == g + f, pay)
        run.check(f"{cid}:add_neg", f + (-f) == zero, pay)
        run.check(f"{cid}:mul_assoc", (f * g) * h == f * (g * h), pay)
        run.check(f"{cid}:mul_comm", f * g == g * f, pay)
        run.check(f"{cid}:distributive", f * (g + h) == f * g + f * h, pay)
        run.check(f"{cid}:mul_one", f * one == f, pay)
        run.check(f"{cid}:mul_zero", f * zero == zero, pay)
        gf, gg = ghost(f), ghost(g)
        run.check(f"{cid}:ghost_add", all(x == a + b for x, a, b in zip(ghost(f + g), gf, gg)), pay)
        run.check(f"{cid}:ghost_mul", all(x == a * b for x, a, b in zip(ghost(f * g), gf, gg)), pay)
        # torsion-free cover: small integer lifts never wrap modulo 3^400
        fz = [c.to_int() for c in f.coeffs]
        gzl = [c.to_int() for c in g.coeffs]
        fc = WittVector.from_coefficients(cover, fz)
        gc = WittVector.from_coefficients(cover, gzl)
        prod_z = [c.to_int() for c in (fc * gc).coeffs]
        sum_z = [c.to_int() for c in (fc + gc).coeffs]
        half = 3 ** 400 // 2
        prod_z = [x - 3 ** 400 if x > half else x for x in prod_z]
        sum_z = [x - 3 ** 400 if x > half else x for x in sum_z]
        gzf, gzg = ghost_integers(fz), ghost_integers(gzl)
        run.check(f"{cid}:ghost_cover",
                  ghost_integers(sum_z) == [a + b for a, b in zip(gzf, gzg)]
                  and ghost_integers(prod_z) == [a * b for a, b in zip(gzf, gzg)], pay)
        a, b = random_adic(ring, rng), random_adic(ring, rng)
        run.check(f"{cid}:teichmuller", teichmuller(a, L) * teichmuller(b, L) == teichmuller(a * b, L),
                  {"a": _j(a), "b": _j(b)})
        run.check(f"{cid}:tower", pi_ideal_membership(pi_tower_transition(f), 1).member, pay)
        _membership_case(run, cid, ring, rng)


def _membership_case(run: SuiteRun, cid: str, ring, rng) -> None:
    L = rng.randint(1, 5)
    n = rng.randint(0, 2)
    mode = rng.randrange(3)
    if mode == 0:
        w = _random_witt(ring, rng, L)
        f = witt_mul(teichmuller(ring.pi() ** n, L), w)
    else:
        coeffs = []
        for i in range(1, L + 1):
            v = max(0, n * i - rng.randint(0, 1 if mode == 1 else 2))
            coeffs.append((rng.randrange(1, 3 ** 9) * 3 ** v) % 3 ** 9)
        f = WittVector.from_coefficients(ring, coeffs)
    res = pi_ideal_membership(f, n)
    sol = solve_pi_multiple(f, n)
    pay = {"f": _j(f.coeffs), "n": n}
    ok = res.member == (sol is not None)
    if res.member:
        c = teichmuller(ring.pi() ** n, L)
        wit = WittVector(ring, res.witness)
        ok = ok and witt_mul(c, wit) == f
    run.check(f"{cid}:membership", ok, pay)
    if res.member and n >= 1:
        nmax = max(k for k in range(n + 1) if pi_ideal_membership(f, k).member)
        run.check(f"{cid}:kernel_shadow",
                  all(x.is_zero() or x.valuation() >= nmax * (i + 1) for i, x in enumerate(f.coeffs)),
                  pay)


# ---------------------------------------------------------------------------
# bass


def _lmat(ring, rows, window=8):
    return Mat([[LaurentElement(ring, e, window, True) for e in r] for r in rows])


def bass_fixtures(ring: RingDescriptor) -> list[tuple[str, Mat, int]]:
    """Hand-checked retraction inputs with their ranks."""
    pi, one = ring.pi(), ring.one()
    return [
        ("t_I3", bass_s(3, ring), 3),
        ("tinv_I2", bass_s(-2, ring), -2),
        ("perturbed_diag_t_1", _lmat(ring, [[{1: 1}, {0: pi, 1: -pi}], [{}, {0: 1}]]), 1),
        ("unit_1_plus_pi_t", _lmat(ring, [[{0: one, 1: pi}]]), 0),
        ("1_plus_pi_tinv", _lmat(ring, [[{0: 1, -1: pi}]]), 0),
        ("t_times_1_plus_pi_tinv", _lmat(ring, [[{1: 1, 0: pi}]]), 1),
        ("companion_t2_pi", _lmat(ring, [[{2: 1, 0: pi}]]), 2),
    ]


def _random_bass_input(ring, rng):
    k = rng.randint(-2, 2)
    base = bass_s(k, ring)
    if base.nrows < 2:
        base = base.direct_sum(Mat.identity(2 - base.nrows, base[0, 0]))
    return base, k


def suite_bass(run: SuiteRun) -> None:
    rng = run.rng
    if run.fixture is not None:
        _bass_fixture(run, run.fixture)
    if not run.size:
        return
    rings = [RingDescriptor.zp(2, 8), RingDescriptor.zp(3, 8), RingDescriptor.zp(5, 8),
             RingDescriptor.fq_powerseries(3, 8)]
    for ring in rings:
        tag = _ring_tag(ring)
        for k in range(-3, 4):
            m = bass_s(k, ring)
            run.guarded(f"{tag}:r_s:{k:+d}", lambda m=m, k=k: bass_r(m).r == k,
                        {"k": k, "ring": ring.to_json()})
        for name, m, want in bass_fixtures(ring):
            res = None

            def fx(m=m, want=want):
                nonlocal res
                res = bass_r(m)
                return res.r == want and _fitting_ok(res)
            run.guarded(f"{tag}:fixture:{name}", fx, {"matrix": _j(m), "expected": want})
        for i in range(run.size):
            cid = f"{tag}:{i:04d}"
            m, k = _random_bass_input(ring, rng)
            side = rng.choice("+-")
            e = random_elementary_laurent(ring, m.nrows, rng, side)
            e2 = random_elementary_laurent(ring, m.nrows, rng, "-" if side == "+" else "+")
            mod = e @ m @ e2
            pay = {"matrix": _j(mod), "expected": k}
            run.guarded(f"{cid}:elementary_invariance",
                        lambda: bass_r(mod).r == k and _fitting_ok(bass_r(mod)), pay)
            run.guarded(f"{cid}:stabilization",
                        lambda: bass_r(mod.direct_sum(Mat.identity(1, mod[0, 0]))).r == k, pay)
    zm = RingDescriptor.zmod(5 ** 6)
    for i in range(run.size):
        x = random_split_input(zm, rng, 1, 2)
        pay = {"x": _j(x)}

        def split():
            res = laurent_unit_split(x, 1, 4)
            return split_contract_ok(x, res.f, res.g, 1, 5)
        run.guarded(f"split:{i:04d}", split, pay)
    for ring in rings[:2]:
        rep = sigma_coker_check(ring, rng, max(run.size // 5, 1))
        run.report.cases += rep["cases"]
        for fail in rep["failures"]:
            run.report.failures.append({"case": f"{_ring_tag(ring)}:sigma:{fail['case']:04d}:{fail['check']}",
                                        "counterexample": fail})


def _fitting_ok(res) -> bool:
    c = res.certificates["fitting"]
    n = res.pencil.size
    N = res.pencil.b0[0, 0].ring.precision
    last = c["idempotent_defect_exponents"][-1]
    nil0, nil1 = c["b0_nilpotent_on_Q0_mod_pi"], c["b1_nilpotent_on_P0_mod_pi"]
    return (c["commutes_with_b0"] and c["commutes_with_b1"]
            and nil0 is not None and nil1 is not None and nil0 <= n and nil1 <= n
            and (last == "+inf" or last >= N))


def random_split_input(ring: RingDescriptor, rng, n: int, support: int, window: int = 8):
    """Random ``x`` in ``1 + pi^n A0<t, t^-1>`` supported on ``[-support, support]``."""
    coeffs = {0: ring.one()}
    for e in range(-support, support + 1):
        c = random_adic(ring, rng, min_val=n)
        coeffs[e] = coeffs[e] + c if e in coeffs else c
    return LaurentElement(ring, coeffs, window, True)


def split_contract_ok(x, f, g, n: int, level: int) -> bool:
    congruent = (f * g - x).valuation() >= level
    supports = all(e >= 0 for e in f.support()) and all(e <= 0 for e in g.support())
    one = x.one_like()
    units = (f - one).valuation() >= n and (g - one).valuation() >= n
    return congruent and supports and units


def _bass_fixture(run: SuiteRun, fixture: dict) -> None:
    from .serialize import matrix_from_json
    try:
        m = matrix_from_json(fixture["matrix"], laurent=True)
        want = int(fixture["expected_r"])
    except (KeyError, TypeError, ValueError) as exc:
        run.check("fixture:parse", False, {"error": str(exc)})
        return
    run.guarded("fixture:retraction", lambda: bass_r(m).r == want, fixture)


# ---------------------------------------------------------------------------


SUITES: dict[str, Callable[[SuiteRun], None]] = {
    "ultrametric": suite_ultrametric,
    "gauss": suite_gauss,
    "simplicial": suite_simplicial,
    "glrho": suite_glrho,
    "k1cont": suite_k1cont,
    "witt": suite_witt,
    "bass": suite_bass,
}


def run_suite(name: str, seed: int = 0, size: int = DEFAULT_SIZE,
              fixture: dict | None = None) -> SuiteReport:
    """Run one named suite (or ``all``, merged with suite-prefixed case ids)."""
    if name == "all":
        merged = SuiteReport("all", seed, size)
        t0 = time.perf_counter()
        for sub in SUITES:
            rep = run_suite(sub, seed, size, fixture if sub == "bass" else None)
            merged.cases += rep.cases
            merged.failures.extend({**f, "case": f"{sub}/{f['case']}"} for f in rep.failures)
        merged.wall_time = time.perf_counter() - t0
        return merged
    if name not in SUITES:
        raise KeyError(name)
    if size < 0:
        raise ValueError("size must be >= 0")
    report = SuiteReport(name, seed, size)
    rng = random.Random(f"{name}:{seed}")
    t0 = time.perf_counter()
    SUITES[name](SuiteRun(report, rng, fixture))
    report.wall_time = time.perf_counter() - t0
    return report


__all__ = [
    "DEFAULT_SIZE", "SuiteReport", "SuiteRun", "SUITES", "run_suite", "solve_pi_multiple",
    "universal_isobaric", "unit_group_counts", "counts_from_orders", "bass_fixtures",
    "random_split_input", "split_contract_ok",
]
