from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tatek.errors import InsufficientPrecision, InvalidInput, NotInvertible
from tatek.linalg import Mat
from tatek.padic_core import (NormExponent, RingDescriptor, TateScalar, gauge_exponent,
                              hensel_lift_idempotent, min_exponent, unitalize, val)

ZP5 = RingDescriptor.zp(5, 8)
ZP2 = RingDescriptor.zp(2, 10)
FQ3 = RingDescriptor.fq_powerseries(3, 6)
Z243 = RingDescriptor.zmod(243)

ints = st.integers(min_value=-10 ** 9, max_value=10 ** 9)


def test_norm_of_fifty_is_two():
    assert ZP5.tate(50).val().value == 2
    assert ZP5.scalar(50).valuation() == 2


def test_zero_has_infinite_exponent():
    assert ZP5.tate(0).val().to_json() == {"exponent": "+inf", "lower_bound_only": False}
    assert ZP5.zero().val().is_infinite


def test_unit_has_exponent_zero():
    assert ZP5.tate(7).val().value == 0
    assert ZP5.scalar(7).is_unit()


def test_fraction_valuation():
    assert ZP5.tate(Fraction(3, 25)).valuation() == -2
    x = ZP5.tate(Fraction(2, 15))
    assert x.valuation() == -1
    assert x * ZP5.tate(15) == ZP5.tate(2)


@given(ints, ints)
def test_valuation_matches_oracle(a, b):
    for ring in (ZP5, ZP2):
        p = ring.p
        assert ring.tate(a).val().value == oracles.valuation(a, p)
        assert (ring.tate(a) * ring.tate(b)).val().value == oracles.valuation(a * b, p)


@given(ints, ints)
def test_ultrametric_inequality(a, b):
    x, y = ZP5.tate(a), ZP5.tate(b)
    s = (x + y).val()
    assert s >= min(x.val(), y.val())
    if x.val() != y.val():
        assert s == min(x.val(), y.val())


@given(st.integers(min_value=0, max_value=242), st.integers(min_value=0, max_value=242))
def test_zmod_arithmetic_matches_integers(a, b):
    x, y = Z243.scalar(a), Z243.scalar(b)
    assert (x + y).to_int() == (a + b) % 243
    assert (x * y).to_int() == (a * b) % 243
    assert (x - y).to_int() == (a - b) % 243
    assert x.valuation() == oracles.valuation_mod(a, 3, 5)


@given(st.lists(st.integers(0, 2), min_size=6, max_size=6),
       st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_powerseries_product_matches_convolution(a, b):
    x, y = FQ3.scalar(a), FQ3.scalar(b)
    assert (x * y).digits() == oracles.powerseries_mul(a, b, 3, 6)


@given(st.integers(1, 10 ** 6).filter(lambda n: n % 5))
def test_unit_inverse(a):
    x = ZP5.scalar(a)
    inv = x.inverse()
    assert (x * inv) == ZP5.one()
    assert (inv.to_int() * a) % 5 ** 8 == 1


def test_precision_takes_minimum():
    x = ZP5.scalar(3).with_precision(4)
    y = ZP5.scalar(11).with_precision(6)
    assert (x + y).precision == 4
    assert (x * y).precision == 4
    assert ZP5.scalar(3).is_exact and (ZP5.scalar(3) * ZP5.scalar(4)).is_exact


def test_zero_at_finite_precision_is_a_lower_bound():
    x = ZP5.scalar(25).with_precision(2)
    v = x.val()
    assert v.lower_bound_only and v.value == 2
    assert x.is_zero()


def test_inverse_errors():
    with pytest.raises(NotInvertible):
        ZP5.scalar(10).inverse()
    with pytest.raises(InsufficientPrecision):
        ZP5.scalar(25).with_precision(2).inverse()


def test_divide_by_pi():
    assert ZP5.scalar(75).divide_by_pi(2) == ZP5.scalar(3)
    with pytest.raises(InvalidInput):
        ZP5.scalar(5).divide_by_pi(2)


def test_ring_validation():
    with pytest.raises(InvalidInput):
        RingDescriptor.zmod(12)
    with pytest.raises(InvalidInput):
        RingDescriptor.zp(4, 8)
    with pytest.raises(InvalidInput):
        RingDescriptor.zp(5, 0)
    with pytest.raises(InvalidInput):
        RingDescriptor.from_json({"kind": "zp", "p": 5})
    with pytest.raises(InvalidInput):
        Z243.tate(1)


def test_ring_json_round_trip():
    for ring in (ZP5, FQ3, Z243, RingDescriptor.fq_powerseries(9, 4)):
        assert RingDescriptor.from_json(ring.to_json()) == ring


def test_fq9_residue_field_arithmetic():
    ring = RingDescriptor.fq_powerseries(9, 4)
    f = ring.residue_field
    nonzero = [a for a in range(9) if a]
    assert all(f.mul(a, f.inv(a)) == 1 for a in nonzero)
    # the multiplicative group is cyclic of order 8
    assert any(all(f.pow(g, k) != 1 for k in range(1, 8)) for g in nonzero)


def test_tate_scalar_shift_and_absprec():
    x = ZP5.tate(3, shift=2)
    assert x.valuation() == -2
    assert x.times_pi(2) == ZP5.tate(3)
    z = TateScalar.zero_at(ZP5, 4)
    assert z.is_zero() and z.absprec == 4


def test_val_dispatch_and_min_exponent():
    assert val(ZP5.tate(125)).value == 3
    assert min_exponent([NormExponent(3), NormExponent(1)]).value == 1
    assert min_exponent([]).is_infinite


def test_unitalization_norm():
    x = ZP5.tate(25)
    assert unitalize(x, 0).norm() == x.val()
    assert unitalize(x, 3).norm().value == 0


def test_gauge_exponent_defaults_to_valuation():
    for a in (1, 5, 50, 625):
        assert gauge_exponent(ZP5.tate(a)).value == oracles.valuation(a, 5)
    # uniformizer pi^2: exponent halves, rounded down
    assert gauge_exponent(ZP5.tate(125), 2).value == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_hensel_lift_is_idempotent(k, noise):
    one, zero = ZP5.one(), ZP5.zero()
    e0 = Mat.diag([one if i < k else zero for i in range(2)])
    pert = Mat([[ZP5.scalar(5 * noise[0]), ZP5.scalar(5 * noise[1])],
                [ZP5.scalar(5 * noise[2]), ZP5.scalar(5 * noise[3])]])
    e0 = e0.map(lambda x: x.with_precision(8)) + pert
    lift = hensel_lift_idempotent(e0)
    e = lift.idempotent
    assert (e @ e - e).norm_exponent().value >= 8
    assert (e - e0).norm_exponent().value >= 1
    assert e.residue_rank() == k


def test_hensel_rejects_non_idempotent():
    m = Mat([[ZP5.scalar(2), ZP5.zero()], [ZP5.zero(), ZP5.one()]])
    with pytest.raises(InvalidInput):
        hensel_lift_idempotent(m)


def test_infinite_exponent_arithmetic():
    inf = NormExponent.infinite()
    assert (inf * 3).is_infinite
    assert math.isinf((inf + 2).value)
