import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgcat.cyclotomic import (
    CycNum,
    CyclotomicError,
    RadicalScalar,
    cyclotomic_arithmetic,
    embed_complex,
    field,
    parse_cycnum,
    q_integer,
)

from oracles import as_fractions, q_integer_coeffs

ORDERS = [1, 2, 3, 4, 5, 8, 10, 12, 20, 24, 42]


@st.composite
def elements(draw, N=None):
    N = N or draw(st.sampled_from(ORDERS))
    phi = field(N).phi
    num = draw(st.lists(st.integers(-5, 5), min_size=phi, max_size=phi))
    den = draw(st.integers(1, 4))
    return CycNum(N, num, den)


def test_zeta_product_is_one():
    assert CycNum.zeta(20, 5) * CycNum.zeta(20, 15) == 1


def test_full_orbit_sums_to_zero():
    z = CycNum.zeta(4)
    assert (1 + z + z * z + z * z * z).is_zero()


def test_golden_ratio_from_q_integer():
    phi = q_integer(20, 2, 3)  # eps = zeta_20^2 = zeta_10
    assert phi * phi == phi + 1
    assert embed_complex(phi).real == pytest.approx((1 + 5**0.5) / 2)


def test_embed_examples():
    assert embed_complex(CycNum.one(7)) == 1
    z = embed_complex(CycNum.zeta(4))
    assert abs(z - 1j) < 1e-12
    assert embed_complex(q_integer(20, 2, 2)).real == pytest.approx(2 * math.cos(math.pi / 5))


def test_embed_rejects_non_unit_index():
    with pytest.raises(CyclotomicError):
        embed_complex(CycNum.zeta(20), 4)


@pytest.mark.parametrize("N,e,n", [(20, 2, 3), (24, 2, 5), (42, 6, 4), (12, 1, -3), (40, 2, 7)])
def test_q_integer_matches_sympy_oracle(N, e, n):
    assert q_integer(N, e, n).coeffs == as_fractions(q_integer_coeffs(N, e, n))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms(data):
    N = data.draw(st.sampled_from(ORDERS))
    a, b, c = (data.draw(elements(N)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_embedding_is_ring_homomorphism(data):
    N = data.draw(st.sampled_from(ORDERS))
    a, b = data.draw(elements(N)), data.draw(elements(N))
    assert abs(embed_complex(a * b) - embed_complex(a) * embed_complex(b)) < 1e-9
    assert abs(embed_complex(a + b) - embed_complex(a) - embed_complex(b)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_galois_commutes_with_arithmetic(data):
    N = data.draw(st.sampled_from([5, 8, 12, 20]))
    a, b = data.draw(elements(N)), data.draw(elements(N))
    for j in field(N).units:
        assert (a * b).galois(j) == a.galois(j) * b.galois(j)
        assert (a + b).galois(j) == a.galois(j) + b.galois(j)


@settings(max_examples=40, deadline=None)
@given(elements())
def test_text_round_trip(a):
    assert parse_cycnum(str(a)) == a


def test_embed_between_orders():
    a = CycNum.zeta(5, 2) + 3
    b = a.embed(20)
    assert b.N == 20 and b == CycNum.zeta(20, 8) + 3
    assert a == b  # coercion across orders
    with pytest.raises(CyclotomicError):
        a.embed(12)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CycNum.one(5) / CycNum.zero(5)


def test_arithmetic_helper():
    a, b = CycNum.zeta(8), CycNum.zeta(8, 3)
    assert cyclotomic_arithmetic(a, b, "mul") == CycNum.zeta(8, 4) == -1
    assert cyclotomic_arithmetic(a, b, "sub") == a - b


def test_rational_hash_matches_fraction():
    assert hash(CycNum.from_rational(12, Fraction(3, 4))) == hash(Fraction(3, 4))


def test_group_ring_lift_round_trip():
    a = q_integer(24, 2, 5)
    assert CycNum.from_group_ring(24, a.group_ring_vector()) == a


def test_radical_scalar_normalization():
    d0 = q_integer(20, 2, 3) + 2  # 2 + phi
    x = RadicalScalar(CycNum.one(20), 2, d0)
    assert x.dexp == 0 and x.base == d0
    y = RadicalScalar(CycNum.one(20), -3, d0)
    assert y.dexp == -1 and y.base == d0.inverse()
    assert (y * y).square() == d0 ** (-3) * d0 ** (-3) * d0**0  # D^-6 = d0^-3
    assert (y * y) == RadicalScalar(d0 ** (-3), 0, d0)


def test_radical_scalar_mixed_parity_equality():
    d0 = CycNum.from_rational(8, 4)  # D = 2
    half = RadicalScalar(CycNum.one(8), -1, d0)  # 1/2
    assert half == RadicalScalar(CycNum.from_rational(8, Fraction(1, 2)), 0, d0)
    assert half != RadicalScalar(CycNum.from_rational(8, Fraction(-1, 2)), 0, d0)
    assert abs(half.to_complex() - 0.5) < 1e-12


def test_radical_scalar_add_requires_parity():
    d0 = CycNum.from_rational(5, 3)
    a = RadicalScalar(CycNum.one(5), -1, d0)
    b = RadicalScalar(CycNum.one(5), 0, d0)
    assert (a + a).base == 2
    with pytest.raises(CyclotomicError):
        a + b
