"""Acceptance gate: one test per criterion, at the stated sizes and time limits."""
from __future__ import annotations

import math
import random
import time

import pytest

import oracles
from tatek.bass import bass_r, bass_s, laurent_unit_split, random_elementary_laurent
from tatek.kgroups import k0, k0_an_pi0, k1cont_level, k1cont_lift, k1cont_transition, tame_symbol
from tatek.linalg import Mat
from tatek.matgroup import glrho_certificate, mat_norm
from tatek.padic_core import RingDescriptor, TateScalar, random_adic, random_tate
from tatek.suites import bass_fixtures, random_split_input, run_suite
from tatek.witt import WittVector, ghost, pi_ideal_membership, teichmuller, witt_mul

criterion = pytest.mark.criterion


def _residue_matrix(m: Mat) -> list[list[dict]]:
    """Laurent matrix as {exp: residue} dicts for the determinant oracle."""
    return [[{e: c.residue() for e, c in m[i, j].coeffs.items() if not c.is_exact_zero}
             for j in range(m.ncols)] for i in range(m.nrows)]


@criterion(1, "bass_r(bass_s(k)) = k, k in -3..3, Z_2 Z_3 Z_5 and F_3[[pi]] at precision 8")
def test_c01_bass_retraction_identity():
    t0 = time.perf_counter()
    rings = [RingDescriptor.zp(p, 8) for p in (2, 3, 5)] + [RingDescriptor.fq_powerseries(3, 8)]
    for ring in rings:
        for k in range(-3, 4):
            assert bass_r(bass_s(k, ring)).r == k, (ring, k)
    assert time.perf_counter() - t0 < 5


@criterion(2, "retraction fixtures plus elementary and stabilization invariance, 50 each")
def test_c02_retraction_fixtures_and_invariance():
    t0 = time.perf_counter()
    ring = RingDescriptor.zp(5, 8)
    names = {name for name, _, _ in bass_fixtures(ring)}
    assert {"perturbed_diag_t_1", "tinv_I2", "companion_t2_pi"} <= names
    for name, m, want in bass_fixtures(ring):
        # the hand-checked rank is the t-order of det M mod pi
        assert oracles.residue_t_order(_residue_matrix(m), ring.p) == want, name
        assert bass_r(m).r == want, name
    rng = random.Random("criterion-2")
    for i in range(50):
        k = rng.randint(-2, 2)
        base = bass_s(k, ring)
        if base.nrows < 2:
            base = base.direct_sum(Mat.identity(2 - base.nrows, base[0, 0]))
        side = rng.choice("+-")
        e1 = random_elementary_laurent(ring, 2, rng, side)
        e2 = random_elementary_laurent(ring, 2, rng, "-" if side == "+" else "+")
        mod = e1 @ base @ e2
        assert oracles.residue_t_order(_residue_matrix(mod), ring.p) == k
        assert bass_r(mod).r == k, i
        stab = mod.direct_sum(Mat.identity(1, mod[0, 0]))
        assert bass_r(stab).r == k, i
    assert time.perf_counter() - t0 < 30


def _ints(x, mod):
    return {e: c.to_int() % mod for e, c in x.coeffs.items() if not c.is_exact_zero}


@criterion(3, "Laurent splitting: 100 samples over Z/5^6, window 8, K = 4, f g = x mod pi^5")
def test_c03_laurent_splitting():
    t0 = time.perf_counter()
    ring = RingDescriptor.zmod(5 ** 6)
    mod = 5 ** 5
    rng = random.Random("criterion-3")
    for _ in range(100):
        x = random_split_input(ring, rng, 1, 2, window=8)
        res = laurent_unit_split(x, 1, 4)
        assert res.level == 5
        f, g = _ints(res.f, mod), _ints(res.g, mod)
        diff = oracles.laurent_sub(oracles.laurent_mul(f, g, mod), _ints(x, mod), mod)
        assert diff == {}
        assert all(e >= 0 for e in f) and all(e <= 0 for e in g)
        assert f.get(0, 0) % 5 == 1 and g.get(0, 0) % 5 == 1
        assert all(c % 5 == 0 for e, c in f.items() if e) and all(c % 5 == 0 for e, c in g.items() if e)
    assert time.perf_counter() - t0 < 10


@criterion(4, "[pi]^n W membership vs brute force, L <= 5, n <= 2, 100 samples over Z/3^9")
def test_c04_witt_completeness():
    t0 = time.perf_counter()
    ring = RingDescriptor.zmod(3 ** 9)
    mod = 3 ** 9
    rng = random.Random("criterion-4")
    members = nonmembers = 0
    for _ in range(100):
        L = rng.randint(1, 5)
        n = rng.randint(0, 2)
        if rng.random() < 0.4:
            w = [rng.randrange(mod) for _ in range(L)]
            f = oracles.witt_mul([pow(3, n * i, mod) for i in range(1, L + 1)], w, mod)
        else:
            f = [(rng.randrange(1, mod) * 3 ** max(0, n * i - rng.randint(0, 2))) % mod
                 for i in range(1, L + 1)]
        fw = WittVector.from_coefficients(ring, f)
        res = pi_ideal_membership(fw, n)
        sol = oracles.solve_teichmuller_multiple(f, 3 ** n, mod)
        assert res.member == (sol is not None), (f, n)
        if res.member:
            members += 1
            wit = [c.to_int() for c in res.witness]
            assert oracles.witt_mul([pow(3, n * i, mod) for i in range(1, L + 1)], wit, mod) == f
        else:
            nonmembers += 1
    assert members and nonmembers
    assert time.perf_counter() - t0 < 60


@criterion(5, "Witt ring axioms and ghost homomorphism, 100 triples, L <= 6")
def test_c05_witt_axioms_and_ghost():
    ring = RingDescriptor.zmod(3 ** 9)
    mod = 3 ** 9
    rng = random.Random("criterion-5")
    for _ in range(100):
        L = rng.randint(1, 6)
        raw = [[rng.randrange(mod) for _ in range(L)] for _ in range(3)]
        f, g, h = (WittVector.from_coefficients(ring, r) for r in raw)
        zero, one = WittVector.zero(ring, L), WittVector.one(ring, L)
        assert (f + g) + h == f + (g + h) and f + g == g + f and f + (-f) == zero
        assert (f * g) * h == f * (g * h) and f * g == g * f
        assert f * (g + h) == f * g + f * h and f * one == f and f * zero == zero
        assert [c.to_int() for c in (f * g).coeffs] == oracles.witt_mul(raw[0], raw[1], mod)
        assert [c.to_int() for c in (f + g).coeffs] == oracles.witt_add(raw[0], raw[1], mod)
        gf, gg = ghost(f), ghost(g)
        assert all(x == a + b for x, a, b in zip(ghost(f + g), gf, gg))
        assert all(x == a * b for x, a, b in zip(ghost(f * g), gf, gg))
        assert [c.to_int() for c in gf] == [x % mod for x in oracles.ghost(raw[0])]


@criterion(6, "GL(A)_rho certificates: replay k = 1..5, radius monotone, diag(1+pi, 1) fixtures")
def test_c06_glrho_certificates():
    t0 = time.perf_counter()
    for ring in (RingDescriptor.zp(5, 8), RingDescriptor.fq_powerseries(3, 8)):
        one, zero, pi = ring.tate(1), ring.tate(0), ring.tate(1, -1)
        d = Mat([[one + pi, zero], [zero, one]])
        c0 = glrho_certificate(d, 0, 64)
        assert c0 is not None and c0.exponent == 1
        assert glrho_certificate(d, 1, 64) is None
    ring = RingDescriptor.zp(5, 8)
    one = ring.tate(1)
    rng = random.Random("criterion-6")
    certified = 0
    for _ in range(60):
        a = rng.randint(0, 3)
        g = Mat.identity(2, one) + Mat([[random_tate(ring, rng, a, a + 3, 0.3) for _ in range(2)]
                                        for _ in range(2)])
        j = rng.randint(0, 3)
        cert = glrho_certificate(g, j, 16)
        if cert is None:
            continue
        certified += 1
        base = g - g.identity_like()
        for k in range(1, 6):
            power = base.power(cert.exponent * k)
            w = mat_norm(power).value - j * cert.exponent * k
            assert w >= k
        assert all(glrho_certificate(g, jj, 16) is not None for jj in range(j))
    assert certified >= 10
    assert time.perf_counter() - t0 < 5


@criterion(7, "simplicial identities, homotopy endpoints and contracting homotopy, degree <= 3")
def test_c07_simplicial_suite():
    t0 = time.perf_counter()
    rep = run_suite("simplicial", seed=2024, size=40)
    assert rep.cases > 0
    assert rep.failures == []
    assert time.perf_counter() - t0 < 10


@criterion(8, "K1cont levels of Q_2 Q_3 Q_5 for n <= 6 vs unit-group oracle, 50 lifts per level")
def test_c08_k1cont_tower():
    rng = random.Random("criterion-8")
    for p in (2, 3, 5):
        ring = RingDescriptor.zp(p, 8)
        for n in range(1, 7):
            grp = k1cont_level(ring, n).group
            total = (p - 1) * p ** (n - 1)
            assert grp.free_rank == 1
            assert math.prod(grp.torsion) == total
            assert oracles.cyclic_power_counts(grp.torsion, total) == oracles.unit_power_counts(p, n)
            lvl = k1cont_level(ring, n)
            for _ in range(50):
                u = random_adic(ring, rng, unit=True)
                c = lvl.class_of(TateScalar(ring, u, -rng.randint(-3, 3)))
                lift = k1cont_lift(c, rng)
                assert lift.level == n + 1 and k1cont_transition(lift) == c


@criterion(9, "tame symbol bimultiplicativity and Steinberg relation, 200 samples over Q_p")
def test_c09_tame_symbol():
    rng = random.Random("criterion-9")
    for p in (2, 3, 5, 7):
        ring = RingDescriptor.zp(p, 8)
        f = ring.residue_field
        for _ in range(200):
            a1, a2, b = (random_tate(ring, rng, -3, 3) for _ in range(3))
            assert tame_symbol(a1, b) == oracles.tame_symbol(
                a1.valuation(), a1.unit.to_int(), b.valuation(), b.unit.to_int(), p)
            assert tame_symbol(a1 * a2, b) == f.mul(tame_symbol(a1, b), tame_symbol(a2, b))
            assert tame_symbol(b, a1 * a2) == f.mul(tame_symbol(b, a1), tame_symbol(b, a2))
            om = a1.one_like() - a1
            if not om.is_zero():
                assert tame_symbol(a1, om) == 1


@criterion(10, "pi_0 of analytic K0 constant in j <= 4 over Z_p and Z/p^2, equal to K0")
def test_c10_k0an_constant():
    rings = [RingDescriptor.zp(p, 8) for p in (2, 3, 5)] + \
        [RingDescriptor.zmod(p * p) for p in (2, 3, 5)]
    for ring in rings:
        groups = [k0_an_pi0(ring, j) for j in range(5)]
        assert all(g == k0(ring) for g in groups)
        assert k0(ring).to_json() == {"free_rank": 1, "torsion": []}


@criterion(11, "ultrametric and Gauss-norm suites, 500 cases per ring")
def test_c11_norm_suites():
    for name in ("ultrametric", "gauss"):
        rep = run_suite(name, seed=11, size=500)
        assert rep.failures == [], rep.failures[:3]
        assert rep.cases >= 500 * 6
    rng = random.Random("criterion-11")
    for p in (2, 3, 5):
        ring = RingDescriptor.zp(p, 8)
        for _ in range(500):
            x = rng.randint(-10 ** 6, 10 ** 6)
            assert ring.tate(x).val().value == oracles.valuation(x, p)
