import math
import random
from fractions import Fraction as Fr

import pytest
import sympy

from hadquot import finite_fields as ff
from hadquot import series as S
from hadquot.errors import InsufficientPrefix, NonIntegralData, NotReducible
from hadquot.expsum import ExpSumForm
from hadquot.fields import FieldCtx, Place, primes_upto
from hadquot.reduction import (
    hadamard_inverse_period_mod,
    minimal_relation_mod,
    place_set_density,
    profile,
    reduce_series,
    required_prefix,
    split_unit_density,
    units_everywhere,
)
from hadquot.relations import BivariateRelation

Q = FieldCtx.rationals()

# a pseudo-random prefix over F_3; an independent GF(3) rank computation
# shows full column rank for every H <= 4 at r = 1
RANDOM_MOD3 = [2, 2, 0, 1, 2, 0, 0, 0, 1, 0, 2, 1, 2, 1, 2, 1, 0, 0, 0, 1, 2, 1, 2, 2, 0, 0, 2, 0, 1, 0,
               1, 0, 1, 1, 0, 1, 2, 0, 0, 2, 1, 1, 0, 2, 1, 0, 1, 1, 2, 2, 1, 0, 2, 2, 0, 1, 1, 2, 0, 1]

# weighted shares of primes p <= 10^4 with a^n + 1 never 0 mod p, from the
# brute-force oracle (tests/oracles.py: hasse_density)
HASSE_1E4 = {2: 0.2839737462907394, 3: 0.32979336361537953}


def es(*terms):
    return ExpSumForm.from_terms(terms, Q)


def hasse(a):
    return es(([1], a), ([1], 1))


def test_reduce_series_examples():
    f = S.rational([1], [1, -2], Q)
    assert reduce_series(f, Place.prime(5), 5) == [1, 2, 4, 3, 1, 2]
    assert reduce_series(f, Place.prime(2), 3) == [1, 0, 0, 0]
    g = S.hadamard_quotient(S.rational([1], [1, -1], Q), S.rational([1], [1, -2, 1], Q))
    with pytest.raises(NotReducible) as exc:
        reduce_series(g, Place.prime(5), 10)
    assert exc.value.index == 4
    assert reduce_series(g, Place.prime(5), 3) == [1, 3, 2, 4]
    with pytest.raises(ValueError):
        reduce_series(f, Place.archimedean(), 3)


def test_minimal_relation_mod_examples():
    F7 = ff.gf(7)
    fs = reduce_series(S.rational([1], [1, -1], Q), Place.prime(7), 40)
    rel, h = minimal_relation_mod(fs, 1, 3, F7)
    assert h == 1 and rel == BivariateRelation.make([[6], [1, 6]], F7)
    F5 = ff.gf(5)
    fs = reduce_series(S.catalan(Q), Place.prime(5), 60)
    rel, h = minimal_relation_mod(fs, 2, 3, F5)
    assert h == 1 and rel == BivariateRelation.make([[1], [4], [0, 1]], F5)
    assert minimal_relation_mod(RANDOM_MOD3, 1, 4, ff.gf(3)) is None
    with pytest.raises(InsufficientPrefix):
        minimal_relation_mod(RANDOM_MOD3[:10], 1, 4, ff.gf(3))


def test_random_prefix_rank_oracle():
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    r = 1
    for H in range(5):
        order = (H + 1) * (r + 1) + H * r + 8
        pw = [[1] + [0] * (order - 1), RANDOM_MOD3[:order]]
        rows = [[pw[j][n - i] if n >= i else 0 for j in range(r + 1) for i in range(H + 1)]
                for n in range(order)]
        M = DomainMatrix([[GF(3)(x) for x in row] for row in rows], (order, (H + 1) * (r + 1)), GF(3))
        assert M.rank() == (H + 1) * (r + 1)


@pytest.mark.parametrize("seed", range(12))
def test_minimal_degree_matches_exhaustive_search(seed):
    from oracles import exhaustive_min_degree

    rng = random.Random(seed)
    p = 3
    # a random rational series mod 3 of small degree, or a random prefix
    den = [1] + [rng.randrange(p) for _ in range(rng.randint(0, 2))]
    num = [rng.randrange(p) for _ in range(rng.randint(1, 2))]
    fs = [0] * 40
    for n in range(40):
        acc = num[n] if n < len(num) else 0
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * fs[n - k]
        fs[n] = acc % p
    if seed % 3 == 0:
        fs = [rng.randrange(p) for _ in range(40)]
    got = minimal_relation_mod(fs, 1, 2, ff.gf(p), margin=8)
    want = exhaustive_min_degree(fs, p, 1, 2, 8)
    assert (None if got is None else got[1]) == want


def test_period_examples():
    assert hadamard_inverse_period_mod(hasse(2), 7).to_dict() == {
        "invertible_everywhere": True, "period": 3, "preperiod": 0}
    assert not hadamard_inverse_period_mod(hasse(2), 3).invertible_everywhere
    assert hadamard_inverse_period_mod(es(([1], 1)), 5).period == 1
    with pytest.raises(NonIntegralData):
        hadamard_inverse_period_mod(es(([Fr(1, 5)], 2)), 5)


def test_period_matches_brute_force():
    from oracles import least_period

    e = es(([1], 2), ([1], 1))
    for p in primes_upto(60):
        res = hadamard_inverse_period_mod(e, p)
        vals = [(pow(2, n, p) + 1) % p for n in range(2 * p)]
        assert res.invertible_everywhere == all(vals)
        if res.invertible_everywhere and p > 2:
            inv = [pow(v, -1, p) for v in vals[: p - 1]]
            assert res.period == least_period(inv)


def test_period_divides_p_minus_1_random():
    rng = random.Random(1234)
    count = 0
    while count < 50:
        k = rng.randint(1, 3)
        terms = [([rng.randint(-9, 9) or 1], rng.choice([g for g in range(-9, 10) if g])) for _ in range(k)]
        e = es(*terms)
        if not e.terms:
            continue
        count += 1
        for p in primes_upto(100):
            try:
                res = hadamard_inverse_period_mod(e, p)
            except NonIntegralData:
                continue
            if res.invertible_everywhere:
                assert (p - 1) % res.period == 0


def test_non_simple_period_divides_p_times_p_minus_1():
    e = es(([1, 1], 2))  # b_n = (n+1) 2^n
    for p in (3, 5, 7):
        res = hadamard_inverse_period_mod(e, p)
        assert not res.invertible_everywhere  # n = p - 1 gives 0
    e = es(([1, 1], 2), ([2], 1))
    for p in primes_upto(40):
        try:
            res = hadamard_inverse_period_mod(e, p)
        except NonIntegralData:
            continue
        if res.invertible_everywhere:
            assert (p * (p - 1)) % res.period == 0


def test_fast_unit_route_matches_period_route():
    rng = random.Random(99)
    for _ in range(40):
        k = rng.randint(1, 2)
        e = es(*[([rng.randint(-5, 5) or 1], rng.choice([g for g in range(-6, 7) if g])) for _ in range(k)])
        if not e.terms:
            continue
        for p in primes_upto(200):
            try:
                slow = hadamard_inverse_period_mod(e, p).invertible_everywhere
            except NonIntegralData:
                slow = False
            assert units_everywhere(e, p) == slow, (e, p)


def test_place_set_density():
    assert place_set_density(lambda s: True, Q, 1000).ratio == 1.0
    est = place_set_density(lambda s: s.p % 4 == 1, Q, 10 ** 5)
    assert abs(est.ratio - 0.5) < 0.02
    direct = sum(math.log(p) for p in sympy.primerange(2, 10 ** 5) if p % 4 == 1)
    assert est.numerator_log == pytest.approx(direct)


def test_split_unit_density_matches_oracle():
    for a, want in HASSE_1E4.items():
        assert split_unit_density(hasse(a), Q, 10 ** 4).ratio == pytest.approx(want, abs=1e-12)
    assert split_unit_density(es(([1], 1)), Q, 1000).ratio == 1.0


def test_split_unit_density_function_field():
    ctx = FieldCtx.function_field(3)
    x = ctx.x()
    e = ExpSumForm.from_terms([([1], x), ([1], 1)], ctx)  # b_n = x^n + 1
    est = split_unit_density(e, ctx, 27)
    assert 0 <= est.ratio <= 1
    # degree-two places never count as split
    est_all = place_set_density(lambda s: True, ctx, 27)
    assert est.denominator_log == est_all.denominator_log


def test_profile_examples():
    prof = profile(S.rational([1], [1, -2], Q), 1, 50, 3)
    hs = {s.p: e.h for s, e in prof.entries.items()}
    assert hs[2] == 0  # 1/(1 - 2t) reduces to 1 at p = 2
    assert all(h == 1 for p, h in hs.items() if p != 2)
    g = S.hadamard_quotient(S.rational([1], [1, -1], Q), S.rational([1], [1, -2, 1], Q))
    for r in (1, 2):
        prof = profile(g, r, 50, 3)
        assert all(e.h == math.inf and e.status == "not-reducible" for e in prof.entries.values())
    prof = profile(S.catalan(Q), 2, 50, 3)
    assert all(e.h == 1 for e in prof.entries.values())


def test_profile_rational_consistency():
    # f = P/Q with deg P < deg Q = b: h_p <= b wherever Q(0) is a unit
    f = S.rational([1, 2], [1, -3, 5], Q)
    prof = profile(f, 1, 60, 4)
    for s, e in prof.entries.items():
        if s.p not in (2,):
            assert e.h <= 2


def test_profile_monotone_in_cap_and_bound():
    f = S.rational([1, 1], [1, -1, -1], Q)
    small = profile(f, 1, 30, 1)
    big = profile(f, 1, 60, 3)
    for s, e in small.entries.items():
        assert big.entries[s].h <= e.h
    assert set(small.entries) <= set(big.entries)
    assert big.lhs(40) >= small.lhs(40)


def test_required_prefix():
    assert required_prefix(1, 4, 8) == 5 * 2 + 4 + 8
