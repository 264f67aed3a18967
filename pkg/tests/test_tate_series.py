from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tatek.errors import InvalidInput, NotInvertible
from tatek.padic_core import RingDescriptor
from tatek.tate_series import (LaurentElement, TateSeries, monomials, random_series,
                               simplex_ring_element)

ZP5 = RingDescriptor.zp(5, 8)
Z625 = RingDescriptor.zmod(625)

coeff_maps = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                             st.integers(-3000, 3000).filter(bool), min_size=1, max_size=6)


@given(coeff_maps, st.integers(0, 3))
def test_gauss_norm_formula(coeffs, j):
    f = TateSeries(ZP5, 2, coeffs, radius=j, degree_bound=6, integral=False)
    want = min(oracles.valuation(c, 5) - j * sum(i) for i, c in coeffs.items())
    assert f.gauss_norm().value == want


@given(coeff_maps, coeff_maps, st.integers(0, 2))
def test_gauss_norm_multiplicative(a, b, j):
    f = TateSeries(ZP5, 2, a, radius=j, degree_bound=12, integral=False)
    g = TateSeries(ZP5, 2, b, radius=j, degree_bound=12, integral=False)
    assert (f * g).gauss_norm() == f.gauss_norm() + g.gauss_norm()


@given(coeff_maps, st.integers(1, 3))
def test_restriction_never_decreases_the_exponent(coeffs, j):
    f = TateSeries(ZP5, 2, coeffs, radius=j, degree_bound=6, integral=False)
    for jj in range(j):
        assert f.restrict(jj).gauss_norm() >= f.gauss_norm()


def test_restrict_to_larger_radius_rejected():
    f = TateSeries(ZP5, 1, {(1,): 1}, radius=1)
    with pytest.raises(InvalidInput):
        f.restrict(2)


def test_unit_ball_membership():
    f = TateSeries(ZP5, 1, {(0,): 1, (2,): 25}, radius=1, integral=False)
    assert f.in_unit_ball()
    g = TateSeries(ZP5, 1, {(0,): 1, (3,): 25}, radius=1, integral=False)
    assert not g.in_unit_ball()


def test_theta_and_psi():
    f = TateSeries(ZP5, 1, {(0,): 3, (1,): 1, (2,): 2}, radius=0, integral=False)
    th = f.theta(2)
    assert th.radius == 2
    assert th.coefficient((1,)) == ZP5.tate(25) and th.coefficient((2,)) == ZP5.tate(2 * 625)
    ps = f.psi_substitute(ZP5.tate(5))
    assert ps.coefficient((2,)) == ZP5.tate(50)
    with pytest.raises(InvalidInput):
        f.psi_substitute(ZP5.tate(1, shift=1))


def test_truncated_series_norm_is_a_lower_bound():
    f = TateSeries(ZP5, 1, {(0,): 5, (4,): 1}, radius=1, degree_bound=2, integral=False)
    assert f.truncated
    # the dropped t^4 term is only known to have exponent >= 0
    n = f.gauss_norm()
    assert n.lower_bound_only and n.value == 0


def test_monomials_count():
    assert len(list(monomials(2, 3))) == 10
    assert len(list(monomials(3, 2))) == 10


def test_random_series_is_reproducible():
    a = random_series(ZP5, random.Random(1), 2, 3)
    b = random_series(ZP5, random.Random(1), 2, 3)
    assert a == b


laurent_maps = st.dictionaries(st.integers(-3, 3), st.integers(0, 624), max_size=5)


@given(laurent_maps, laurent_maps)
def test_laurent_product_matches_convolution(a, b):
    f = LaurentElement(Z625, a, 8, True)
    g = LaurentElement(Z625, b, 8, True)
    got = {e: c.to_int() for e, c in (f * g).coeffs.items() if c.to_int()}
    want = oracles.laurent_mul({e: c for e, c in a.items() if c},
                               {e: c for e, c in b.items() if c}, 625)
    assert got == want


def test_laurent_parts_and_shift():
    f = LaurentElement(Z625, {-2: 1, 0: 3, 1: 5}, 8, True)
    assert f.support() == [-2, 0, 1]
    assert f.nonnegative_part().support() == [0, 1]
    assert f.negative_part().support() == [-2]
    assert f.shift(2).support() == [0, 2, 3]
    assert f.evaluate_at_one().to_int() == 9


def test_laurent_inverse_of_monomials_only():
    ring = ZP5
    m = LaurentElement(ring, {3: ring.scalar(2)}, 8, True)
    assert (m * m.inverse()).support() == [0]
    with pytest.raises(NotInvertible):
        LaurentElement(ring, {0: 1, 1: 5}, 8, True).inverse()


def _simplex(ring, degree, j, terms):
    return simplex_ring_element(ring, degree, terms, j, degree_bound=10)


def test_face_kills_a_coordinate():
    # d_1 sets t_1 to 0; d_2 only renumbers the later coordinates
    x = _simplex(ZP5, 2, 1, {(1, 0): 1})
    assert x.face(1).is_zero()
    y = x.face(2)
    assert y.series == x.coordinate(1).face(2).series
    assert y.degree == 1


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                       st.integers(1, 600), min_size=1, max_size=4),
       st.integers(0, 2))
def test_cosimplicial_identities_degree_two(terms, j):
    x = _simplex(Z625, 2, j, terms)
    for jj in range(3):
        for ii in range(jj):
            assert x.face(jj).face(ii) == x.face(ii).face(jj - 1)
    for jj in range(3):
        for ii in range(jj + 1):
            assert x.degeneracy(jj).degeneracy(ii) == x.degeneracy(ii).degeneracy(jj + 1)
        assert x.degeneracy(jj).face(jj) == x and x.degeneracy(jj).face(jj + 1) == x


def test_homotopy_endpoints():
    ring = Z625
    j = 1
    z = simplex_ring_element(ring, 1, {(1, 0): 1, (1, 1): 3, (0, 1): 2}, j, extra=1,
                             degree_bound=10)
    pij = z.series.scalar(ring.pi() ** j)
    assert z.homotopy_h(0).face(0) == z.substitute_extra(lambda t: t.zero_like())
    assert z.homotopy_h(1).face(2) == z.substitute_extra(lambda t: t * pij)


def test_face_index_validation():
    x = _simplex(ZP5, 1, 0, {(1,): 1})
    with pytest.raises(InvalidInput):
        x.face(2)
    with pytest.raises(InvalidInput):
        x.homotopy_h(0)
