from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tatek.bass import (bass_r, bass_s, check_unit_times_power, fitting_split,
                        laurent_unit_split, random_elementary_laurent, reduce_to_linear,
                        sigma_coker_check)
from tatek.errors import InsufficientPrecision, InvalidInput
from tatek.linalg import Mat
from tatek.padic_core import RingDescriptor
from tatek.suites import bass_fixtures, random_split_input
from tatek.tate_series import LaurentElement

ZP3 = RingDescriptor.zp(3, 8)
Z5_6 = RingDescriptor.zmod(5 ** 6)


def lmat(ring, rows):
    return Mat([[LaurentElement(ring, e, 8, True) for e in r] for r in rows])


def residues(m):
    return [[{e: c.residue() for e, c in m[i, j].coeffs.items() if not c.is_exact_zero}
             for j in range(m.ncols)] for i in range(m.nrows)]


def test_t_times_identity_has_rank_two():
    res = bass_r(bass_s(2, ZP3))
    assert res.r == 2
    js = res.to_json()
    assert set(js) == {"r", "ledger", "certificates"}
    json.dumps(js)


@pytest.mark.parametrize("k", range(-3, 4))
def test_retraction_inverts_s(k):
    assert bass_r(bass_s(k, ZP3)).r == k


def test_s_of_zero_is_identity():
    m = bass_s(0, ZP3)
    assert m.nrows == 1 and m[0, 0].support() == [0]


@pytest.mark.parametrize("ring", [ZP3, RingDescriptor.fq_powerseries(3, 8)])
def test_fixtures_agree_with_determinant_order(ring):
    for name, m, want in bass_fixtures(ring):
        assert oracles.residue_t_order(residues(m), ring.p) == want, name
        res = bass_r(m)
        assert res.r == want, name
        fit = res.certificates["fitting"]
        assert fit["commutes_with_b0"] and fit["commutes_with_b1"]
        assert fit["idempotent_defect_exponents"][-1] in ("+inf", 8) or \
            fit["idempotent_defect_exponents"][-1] >= 8


def test_ledger_arithmetic():
    m = lmat(ZP3, [[{-1: 1, 1: 3}]])
    pencil, ledger, certs = reduce_to_linear(m)
    assert ledger.N == 1 and ledger.shift == 1 and ledger.degree == 2
    assert pencil.size == 2
    assert certs["linearization_verified"]
    assert certs["normalization"]["b0_plus_b1_is_identity"]
    split = fitting_split(pencil)
    assert split.rank_P0 + split.rank_Q0 == pencil.size
    assert bass_r(m).r == -1


def test_pencil_is_normalized():
    m = lmat(ZP3, [[{1: 1}, {0: 3}], [{0: 0}, {0: 1, 1: 3}]])
    pencil, _, _ = reduce_to_linear(m)
    assert pencil.b0 + pencil.b1 == pencil.b0.identity_like()


def test_det_must_be_unit_times_power():
    m = lmat(ZP3, [[{0: 1, 1: 1}]])
    with pytest.raises(InvalidInput):
        check_unit_times_power(m)
    with pytest.raises(InvalidInput):
        bass_r(m)


def test_elementary_and_stabilization_invariance():
    rng = random.Random(17)
    for _ in range(8):
        k = rng.randint(-2, 2)
        base = bass_s(k, ZP3)
        if base.nrows < 2:
            base = base.direct_sum(Mat.identity(2 - base.nrows, base[0, 0]))
        e1 = random_elementary_laurent(ZP3, 2, rng, "+")
        e2 = random_elementary_laurent(ZP3, 2, rng, "-")
        m = e1 @ base @ e2
        assert bass_r(m).r == k
        assert bass_r(m.direct_sum(Mat.identity(1, m[0, 0]))).r == k


def test_sigma_cokernel_battery():
    rep = sigma_coker_check(ZP3, random.Random(2), samples=3)
    assert rep["cases"] > 0 and rep["failures"] == []


def _as_ints(x, mod):
    return {e: c.to_int() % mod for e, c in x.coeffs.items() if not c.is_exact_zero}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.integers(1, 3))
def test_split_matches_convolution(seed, n, levels):
    x = random_split_input(Z5_6, random.Random(seed), n, 2)
    res = laurent_unit_split(x, n, levels)
    mod = 5 ** res.level
    assert res.level == n + levels
    f, g = _as_ints(res.f, mod), _as_ints(res.g, mod)
    assert oracles.laurent_sub(oracles.laurent_mul(f, g, mod), _as_ints(x, mod), mod) == {}
    assert all(e >= 0 for e in f) and all(e <= 0 for e in g)


def test_split_rejects_bad_inputs():
    x = LaurentElement(Z5_6, {0: 2, 1: 5}, 8, True)
    with pytest.raises(InvalidInput):
        laurent_unit_split(x, 1, 2)
    y = LaurentElement(Z5_6, {0: 1, 1: 5}, 8, True)
    with pytest.raises(InvalidInput):
        laurent_unit_split(y, 0, 2)
    z = LaurentElement(ZP3, {0: 1, 1: 3}, 8, True)
    with pytest.raises(InsufficientPrecision):
        laurent_unit_split(z.with_precision(4), 1, 8)
