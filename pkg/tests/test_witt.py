from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tatek.errors import InsufficientPrecision, InvalidInput
from tatek.padic_core import RingDescriptor
from tatek.suites import universal_isobaric
from tatek.witt import (WittVector, ghost, ghost_integers, pi_ideal_membership,
                        pi_tower_transition, teichmuller, teichmuller_pi, universal_polynomial,
                        witt_mul, witt_neg)

R = RingDescriptor.zmod(3 ** 9)
MOD = 3 ** 9


def vec(coeffs):
    return WittVector.from_coefficients(R, coeffs)


def ints(w):
    return [c.to_int() for c in w.coeffs]


coeff_lists = st.integers(1, 6).flatmap(
    lambda L: st.tuples(*[st.lists(st.integers(0, MOD - 1), min_size=L, max_size=L)] * 3))


def test_teichmuller_pi_length_three():
    t = teichmuller_pi(R, 3)
    assert ints(t) == [3, 9, 27]
    # ghost components of [x] are the powers of x
    assert [c.to_int() for c in ghost(t)] == [3, 9, 27]


def test_first_universal_polynomial():
    # P_1 = a_1 b_1 (variables 2 and 3)
    assert universal_polynomial(1) == {((2, 1), (3, 1)): 1}
    assert universal_isobaric(6)


@settings(max_examples=60, deadline=None)
@given(coeff_lists)
def test_product_matches_ghost_oracle(triple):
    a, b, _ = triple
    assert ints(vec(a) * vec(b)) == oracles.witt_mul(a, b, MOD)
    assert ints(vec(a) + vec(b)) == oracles.witt_add(a, b, MOD)


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_ring_axioms(triple):
    f, g, h = (vec(c) for c in triple)
    L = f.length
    zero, one = WittVector.zero(R, L), WittVector.one(R, L)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * one == f and f * zero == zero
    assert f + witt_neg(f) == zero and f - f == zero


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_ghost_is_a_ring_map(triple):
    a, b, _ = triple
    f, g = vec(a), vec(b)
    assert ghost(f * g) == [x * y for x, y in zip(ghost(f), ghost(g))]
    assert ghost(f + g) == [x + y for x, y in zip(ghost(f), ghost(g))]
    assert ghost_integers(a) == oracles.ghost(a)


def test_teichmuller_is_multiplicative():
    a, b = R.scalar(5), R.scalar(11)
    assert teichmuller(a, 5) * teichmuller(b, 5) == teichmuller(a * b, 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, MOD - 1), min_size=1, max_size=5), st.integers(0, 2))
def test_membership_matches_brute_force(coeffs, n):
    res = pi_ideal_membership(vec(coeffs), n)
    sol = oracles.solve_teichmuller_multiple(coeffs, 3 ** n, MOD)
    assert res.member == (sol is not None)
    if res.member:
        c = [pow(3, n * i, MOD) for i in range(1, len(coeffs) + 1)]
        assert oracles.witt_mul(c, [x.to_int() for x in res.witness], MOD) == coeffs
    else:
        i = res.failing_index
        assert oracles.valuation_mod(coeffs[i - 1], 3, 9) < n * i


def test_membership_of_multiples():
    w = vec([4, 7, 1])
    f = witt_mul(teichmuller_pi(R, 3), w)
    assert pi_ideal_membership(f, 1).member
    assert pi_tower_transition(w) == f


def test_membership_needs_precision_over_truncated_rings():
    ring = RingDescriptor.zp(3, 6)
    f = WittVector(ring, (ring.scalar(9).with_precision(2), ring.scalar(81)))
    with pytest.raises(InsufficientPrecision):
        pi_ideal_membership(f, 3)
    with pytest.raises(InvalidInput):
        pi_ideal_membership(f, -1)


def test_mismatched_lengths_rejected():
    with pytest.raises(InvalidInput):
        vec([1, 2]) + vec([1])
    with pytest.raises(InvalidInput):
        WittVector(R, ())


def test_json_shape():
    js = vec([1, 2]).to_json()
    assert js["L"] == 2 and len(js["coefficients"]) == 2 and len(js["ghost"]) == 2
