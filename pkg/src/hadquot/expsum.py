"""Rational series as exponential sums b_n = sum_i q_i(n) gamma_i^n.

Also: the dominant-pole factorization b_n = beta^n (p(n) + sum q_i(n) gamma_i^n)
at a chosen place, and the geometric-series approximation of the Hadamard
inverse beta^n / b_n by a rational series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import finite_fields as ff
from .errors import (
    ImproperRational,
    NoDominantPole,
    NonSimpleDominantPole,
    NonSplitDenominator,
)
from .fields import FieldCtx, Place, RatFunc, abs_key, log_abs
from .linalg import solve
from .series import PowerSeries, RationalFn, poly_at_int


def _trim(poly):
    poly = list(poly)
    while poly and not poly[-1]:
        poly.pop()
    return poly


def _pmul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def _padd(a, b, zero):
    n = max(len(a), len(b))
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return _trim([x + y for x, y in zip(a, b)])


@dataclass(frozen=True)
class ExpSumForm:
    """terms: tuple of (q, gamma), q a polynomial in n (tuple, lowest degree
    first), gamma a nonzero field element; the gammas are pairwise distinct."""

    terms: tuple
    ctx: FieldCtx

    def __post_init__(self):
        gammas = [g for _, g in self.terms]
        if any(not g for g in gammas):
            raise ValueError("exponential bases must be nonzero")
        if len(set(gammas)) != len(gammas):
            raise ValueError("exponential bases must be distinct")
        if any(not _trim(q) for q, _ in self.terms):
            raise ValueError("zero polynomial coefficient in exponential sum")

    @classmethod
    def from_terms(cls, terms, ctx: FieldCtx):
        """Build from (q, gamma) pairs, merging equal gammas and dropping zeros."""
        zero = ctx.zero
        merged = {}
        order = []
        for q, g in terms:
            g = ctx.coerce(g)
            q = [ctx.coerce(c) for c in (q if isinstance(q, (list, tuple)) else [q])]
            if g not in merged:
                merged[g] = []
                order.append(g)
            merged[g] = _padd(merged[g], q, zero)
        out = tuple((tuple(merged[g]), g) for g in order if merged[g])
        return cls(out, ctx)

    def __call__(self, n: int):
        ctx = self.ctx
        acc = ctx.zero
        for q, g in self.terms:
            acc = acc + poly_at_int(q, n, ctx) * g ** n
        return acc

    def values(self, count):
        return [self(n) for n in range(count)]

    @property
    def is_simple(self):
        return all(len(q) == 1 for q, _ in self.terms)

    @property
    def total_degree(self):
        return sum(len(q) for q, _ in self.terms)

    def to_dict(self):
        fmt = self.ctx.format_element
        return {"terms": [{"q": [fmt(c) for c in q], "gamma": fmt(g)} for q, g in self.terms]}


# ---------------------------------------------------------------------------
# roots of polynomials over K


def _deflate(poly, root):
    """Divide poly (lowest degree first) by (z - root); None if not a root."""
    n = len(poly) - 1
    quot = [None] * n
    acc = poly[n]
    for k in range(n - 1, -1, -1):
        quot[k] = acc
        acc = poly[k] + acc * root
    return quot if not acc else None


def _roots_q(poly):
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(poly)]
    z = sympy.Symbol("z")
    _, factors = sympy.Poly(coeffs, z, domain="QQ").factor_list()
    roots, bad = [], []
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.append((Fraction(int(r.p), int(r.q)), mult))
        else:
            bad.append(str(fac.as_expr()))
    roots.sort(key=lambda rm: (abs(rm[0]), rm[0]))
    return roots, bad


def _divisors_ff(F, poly):
    lead, facs = ff.factor(F, poly)
    divs = [[1]]
    for g, m in facs:
        new = []
        for d in divs:
            acc = d
            for _ in range(m + 1):
                new.append(acc)
                acc = ff.poly_mul(F, acc, g)
        divs = new
    return divs


def _roots_ff(ctx, poly):
    F = ctx.F
    den = [1]
    for c in poly:
        den = ff.monic(F, ff.poly_divmod(F, ff.poly_mul(F, den, list(c.den)), ff.poly_gcd(F, den, list(c.den)))[0])
    P = [RatFunc(F, ff.poly_mul(F, list(c.num), den), list(c.den)) for c in poly]
    a0 = list(P[0].num)
    am = list(P[-1].num)
    roots = []
    work = list(P)
    cands = []
    for u in _divisors_ff(F, a0):
        for v in _divisors_ff(F, am):
            for c in range(1, F.order):
                cands.append(RatFunc(F, ff.poly_scale(F, c, u), v))
    seen = set()
    for r in cands:
        if r in seen:
            continue
        seen.add(r)
        mult = 0
        while len(work) > 1:
            q = _deflate(work, r)
            if q is None:
                break
            work, mult = q, mult + 1
        if mult:
            roots.append((r, mult))
    bad = [] if len(work) == 1 else ["[" + ", ".join(ctx.format_element(c) for c in work) + "]"]
    return roots, bad


def _roots(ctx, poly):
    return _roots_q(poly) if ctx.is_rationals else _roots_ff(ctx, poly)


# ---------------------------------------------------------------------------


def rational_to_expsum(g, ctx: FieldCtx | None = None) -> ExpSumForm:
    """Exponential-sum form of the coefficients of a rational series."""
    if isinstance(g, PowerSeries):
        ctx, g = g.ctx, g.expr
    if not isinstance(g, RationalFn):
        raise TypeError("rational_to_expsum needs a RationalFn series")
    numer, denom = _trim(g.numer), _trim(g.denom)
    m = len(denom) - 1
    if len(numer) - 1 >= m:
        raise ImproperRational("numerator degree must be below denominator degree")
    # 1/gamma runs over the poles, so the gammas are the roots of the reversal
    rev = list(reversed(denom))
    roots, bad = _roots(ctx, rev)
    if bad:
        raise NonSplitDenominator(bad[0])
    series = PowerSeries(g, ctx)
    b = series.coeffs(m)
    unknowns = [(i, k) for i, (_, mult) in enumerate(roots) for k in range(mult)]
    A = [[ctx.coerce(n) ** k * roots[i][0] ** n for i, k in unknowns] for n in range(m)]
    sol = solve(A, b)
    terms = []
    for i, (gamma, mult) in enumerate(roots):
        q = [sol[unknowns.index((i, k))] for k in range(mult)]
        terms.append((q, gamma))
    e = ExpSumForm.from_terms(terms, ctx)
    check = 2 * (len(numer) + len(denom) - 1)
    if e.values(check) != series.coeffs(check):
        raise ArithmeticError("exponential-sum round trip failed")
    return e


def expsum_to_rational(e: ExpSumForm) -> PowerSeries:
    ctx = e.ctx
    zero, one = ctx.zero, ctx.one
    denom = [one]
    for q, g in e.terms:
        for _ in range(len(q)):
            denom = _pmul(denom, [one, -g], zero)
    m = len(denom) - 1
    b = e.values(m)
    numer = _trim(_pmul(b, denom, zero)[:m])
    return PowerSeries(RationalFn(tuple(numer), tuple(denom)), ctx)


# ---------------------------------------------------------------------------
# dominant pole


@dataclass(frozen=True)
class DominantPole:
    place: Place
    beta: object
    p: tuple  # polynomial in n
    tail: tuple  # ((q_i, gamma_i / beta), ...) with |gamma_i / beta| < 1 at place

    @property
    def simple(self):
        return len(self.p) == 1

    def to_dict(self, ctx):
        fmt = ctx.format_element
        return {
            "place": str(self.place),
            "beta": fmt(self.beta),
            "p": [fmt(c) for c in self.p],
            "tail": [{"q": [fmt(c) for c in q], "gamma": fmt(g)} for q, g in self.tail],
            "simple": self.simple,
        }


def dominant_pole_decompose(e: ExpSumForm, v0: Place) -> DominantPole:
    if not e.terms:
        raise NoDominantPole([])
    keys = [abs_key(v0, g) for _, g in e.terms]
    top = max(keys)
    winners = [i for i, k in enumerate(keys) if k == top]
    if len(winners) > 1:
        raise NoDominantPole([e.ctx.format_element(e.terms[i][1]) for i in winners])
    (w,) = winners
    p, beta = e.terms[w]
    tail = tuple((q, g / beta) for i, (q, g) in enumerate(e.terms) if i != w)
    return DominantPole(v0, beta, p, tail)


@dataclass(frozen=True)
class InverseApprox:
    u: ExpSumForm
    remainder_log_radius: float  # certified lower bound for log R' (math.inf if exact)
    decomposition: DominantPole
    J: int

    def remainder(self, e: ExpSumForm, n: int):
        """r_n = beta^n / b_n - u_n, exactly."""
        return self.decomposition.beta ** n / e(n) - self.u(n)


def hadamard_inverse_approx(e: ExpSumForm, v0: Place, J: int) -> InverseApprox:
    """u_n = sum_{j<=J} (-x_n)^j / c, where beta^n / b_n = 1 / (c (1 + x_n)) and
    x_n = sum (q_i(n)/c) (gamma_i/beta)^n.  The remainder r_n has v0-adic
    radius of convergence at least rho^{-(J+1)}, rho = max |gamma_i/beta|."""
    if J < 0:
        raise ValueError("J must be >= 0")
    dec = dominant_pole_decompose(e, v0)
    if not dec.simple:
        raise NonSimpleDominantPole("dominant pole is not simple")
    ctx = e.ctx
    zero, one = ctx.zero, ctx.one
    c = dec.p[0]
    x_terms = {g: [qi / c for qi in q] for q, g in dec.tail}
    power = {one: [one]}  # (x_n)^j as base -> polynomial
    acc = {one: [one]}
    sign = one
    for _ in range(J):
        nxt = {}
        for b1, q1 in power.items():
            for b2, q2 in x_terms.items():
                key = b1 * b2
                nxt[key] = _padd(nxt.get(key, []), _pmul(q1, q2, zero), zero)
        power = {k: v for k, v in nxt.items() if v}
        sign = -sign
        for k, v in power.items():
            acc[k] = _padd(acc.get(k, []), [sign * x for x in v], zero)
    terms = [([x / c for x in q], g) for g, q in acc.items() if q]
    u = ExpSumForm.from_terms(terms, ctx)
    if not dec.tail:
        radius = math.inf
    else:
        radius = (J + 1) * min(-log_abs(v0, g) for _, g in dec.tail)
    return InverseApprox(u, radius, dec, J)
