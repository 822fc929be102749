import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hadquot import series as S
from hadquot.errors import (
    ImproperRational,
    NoDominantPole,
    NonSimpleDominantPole,
    NonSplitDenominator,
)
from hadquot.expsum import (
    ExpSumForm,
    dominant_pole_decompose,
    expsum_to_rational,
    hadamard_inverse_approx,
    rational_to_expsum,
)
from hadquot.fields import FieldCtx, Place

Q = FieldCtx.rationals()
INF = Place.archimedean()


def es(*terms, ctx=Q):
    return ExpSumForm.from_terms(terms, ctx)


def test_rational_to_expsum_examples():
    a = 2
    g = S.rational([2, -(a + 1)], [1, -(a + 1), a], Q)
    e = rational_to_expsum(g)
    assert dict((gam, q) for q, gam in e.terms) == {2: (1,), 1: (1,)}
    e2 = rational_to_expsum(S.rational([1], [1, -2, 1], Q))
    assert e2.terms == (((1, 1), 1),)
    assert e2.values(5) == [1, 2, 3, 4, 5]
    with pytest.raises(NonSplitDenominator):
        rational_to_expsum(S.rational([1], [1, 0, 1], Q))
    with pytest.raises(ImproperRational):
        rational_to_expsum(S.rational([1, 1], [1, -1], Q))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.lists(st.integers(-4, 4), min_size=1, max_size=3),
                          st.integers(-6, 6).filter(lambda g: g != 0)),
                min_size=1, max_size=3))
def test_expsum_round_trip(raw):
    e = es(*[([Fr(c) for c in q], Fr(g)) for q, g in raw])
    if not e.terms:
        return
    g = expsum_to_rational(e)
    n = 2 * (len(g.expr.numer) + len(g.expr.denom) + 1)
    assert g.coeffs(n) == e.values(n)
    back = rational_to_expsum(g)
    assert back.values(n) == e.values(n)


def test_function_field_expsum():
    F5 = FieldCtx.function_field(5)
    x = F5.x()
    g = S.rational([2, -(x + 1)], [1, -(x + 1), x], F5)  # b_n = x^n + 1
    e = rational_to_expsum(g)
    assert e.values(6) == [x ** n + 1 for n in range(6)]
    dec = dominant_pole_decompose(e, Place.degree_place(5))
    assert dec.beta == x


def test_dominant_pole_examples():
    d = dominant_pole_decompose(es(([1], 2), ([1], 1)), INF)
    assert d.beta == 2 and d.p == (1,) and d.tail == (((1,), Fr(1, 2)),)
    assert d.simple
    with pytest.raises(NoDominantPole) as exc:
        dominant_pole_decompose(es(([1], 2), ([1], -2)), INF)
    assert sorted(exc.value.tied) == ["-2", "2"]
    d = dominant_pole_decompose(es(([1, 1], 3), ([1], 2)), INF)
    assert d.beta == 3 and d.p == (1, 1) and d.tail == (((1,), Fr(2, 3)),)
    # at p = 2 the 2-adically largest base is 1/2
    d = dominant_pole_decompose(es(([1], Fr(1, 2)), ([1], 3)), Place.prime(2))
    assert d.beta == Fr(1, 2)


def test_inverse_approx_examples():
    e = es(([1], 2), ([1], 1))
    a0 = hadamard_inverse_approx(e, INF, 0)
    assert a0.u.values(5) == [1] * 5
    assert a0.remainder_log_radius == pytest.approx(math.log(2))
    a1 = hadamard_inverse_approx(e, INF, 1)
    assert a1.u.values(6) == [1 - Fr(1, 2 ** n) for n in range(6)]
    assert a1.remainder_log_radius == pytest.approx(math.log(4))
    a = hadamard_inverse_approx(es(([1], 2)), INF, 3)
    assert a.remainder_log_radius == math.inf and a.u.values(4) == [1] * 4
    with pytest.raises(NonSimpleDominantPole):
        hadamard_inverse_approx(es(([1, 1], 3), ([1], 2)), INF, 1)


@pytest.mark.parametrize("J", [0, 1, 2, 3, 5])
def test_inverse_approx_remainder_bound(J):
    e = es(([1], 3), ([2], -1), ([1], 2))
    approx = hadamard_inverse_approx(e, INF, J)
    dec = approx.decomposition
    c = dec.p[0]
    rho = math.exp(-approx.remainder_log_radius / (J + 1))
    for n in range(1, 60):
        # |x_n| <= X_n; the alternating tail of 1/(c(1 + x)) is at most X^{J+1} / (|c| (1 - X))
        X = sum(abs(q[0] / c) * abs(g) ** n for q, g in dec.tail)
        assert X <= sum(abs(q[0] / c) for q, _ in dec.tail) * rho ** n
        if X < 1:
            r = approx.remainder(e, n)
            assert abs(r) <= X ** (J + 1) / (abs(c) * (1 - X))


def test_expsum_invariants():
    with pytest.raises(ValueError):
        ExpSumForm((((1,), 2), ((1,), 2)), Q)
    with pytest.raises(ValueError):
        ExpSumForm((((1,), 0),), Q)
    merged = es(([1], 2), ([2], 2))
    assert merged.terms == (((3,), 2),)
