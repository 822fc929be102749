"""Exact lazy power series over Q or F_q(x).

A series is described by an immutable expression tree (``SeriesExpr`` nodes)
and evaluated by ``PowerSeries``, which memoizes a growing prefix of exact
coefficients.  Polynomials (in t, or in n for ``DiffOp``) are tuples of field
elements, lowest degree first.  An algebraic relation sum_j P_j(t) y^j is a
tuple whose entry j is the polynomial P_j.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (
    NewtonFailure,
    PrefixExhausted,
    ZeroBeta,
    ZeroDenominatorCoefficient,
)
from .fields import FieldCtx


class SeriesExpr:
    """Base class of expression-tree nodes."""


@dataclass(frozen=True)
class RationalFn(SeriesExpr):
    numer: tuple
    denom: tuple


@dataclass(frozen=True)
class Algebraic(SeriesExpr):
    relation: tuple
    y0: object


@dataclass(frozen=True)
class HadamardProduct(SeriesExpr):
    left: SeriesExpr
    right: SeriesExpr


@dataclass(frozen=True)
class HadamardQuotient(SeriesExpr):
    numer: SeriesExpr
    denom: SeriesExpr


@dataclass(frozen=True)
class DiffOp(SeriesExpr):
    poly: tuple
    inner: SeriesExpr


@dataclass(frozen=True)
class Scale(SeriesExpr):
    beta: object
    inner: SeriesExpr


@dataclass(frozen=True)
class Polylog(SeriesExpr):
    weight: int


@dataclass(frozen=True)
class Literal(SeriesExpr):
    coeffs: tuple


def _children(expr):
    if isinstance(expr, HadamardProduct):
        return (expr.left, expr.right)
    if isinstance(expr, HadamardQuotient):
        return (expr.numer, expr.denom)
    if isinstance(expr, (DiffOp, Scale)):
        return (expr.inner,)
    return ()


# ---------------------------------------------------------------------------
# truncated series arithmetic on coefficient lists


def _all_rational(a):
    return all(type(x) is Fraction or type(x) is int for x in a)


def mul_trunc(a, b, n, zero=0):
    """First n coefficients of the product of two coefficient lists."""
    a, b = a[:n], b[:n]
    if not a or not b:
        return [zero] * n
    if _all_rational(a) and _all_rational(b):
        return _mul_trunc_q(a, b, n)
    out = [zero] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _common(a):
    d = lcm(*(Fraction(x).denominator for x in a))
    return [Fraction(x).numerator * (d // Fraction(x).denominator) for x in a], d


def _mul_trunc_q(a, b, n):
    ia, da = _common(a)
    ib, db = _common(b)
    out = [0] * n
    lb = len(ib)
    for i, x in enumerate(ia):
        if x:
            for j in range(min(lb, n - i)):
                y = ib[j]
                if y:
                    out[i + j] += x * y
    d = da * db
    return [Fraction(c, d) for c in out]


def div_trunc(a, b, n):
    """First n coefficients of a/b; b[0] must be invertible."""
    b0 = b[0]
    if not b0:
        raise ZeroDivisionError("series division by a non-unit")
    inv0 = 1 / b0
    out = []
    for k in range(n):
        acc = a[k] if k < len(a) else 0 * b0
        for j in range(1, min(k, len(b) - 1) + 1):
            bj = b[j]
            if bj:
                acc = acc - bj * out[k - j]
        out.append(acc * inv0)
    return out


def eval_relation(rel, y, n, zero):
    """First n coefficients of sum_j rel[j](t) * y(t)^j (Horner)."""
    acc = [zero] * n
    for j in range(len(rel) - 1, -1, -1):
        acc = mul_trunc(acc, y, n, zero) if j < len(rel) - 1 else acc
        pj = rel[j]
        for i in range(min(n, len(pj))):
            acc[i] = acc[i] + pj[i]
    return acc


def relation_dy(rel):
    """Coefficientwise d/dy of a relation."""
    return tuple(tuple(j * c for c in rel[j]) for j in range(1, len(rel))) or ((),)


def power_prefixes(f: PowerSeries, r: int, n: int):
    """[f^0, f^1, ..., f^r], each truncated to its first n coefficients."""
    zero, one = f.ctx.zero, f.ctx.one
    base = f.coeffs(n)
    out = [[one] + [zero] * (n - 1)] if n else [[]]
    for _ in range(r):
        out.append(mul_trunc(out[-1], base, n, zero))
    return out


def poly_at_int(poly, n, ctx):
    acc = ctx.zero
    x = ctx.coerce(n)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------


class PowerSeries:
    """A series expression together with a memoized coefficient prefix.

    ``coeff`` is safe to call from several threads; a lock serializes
    extension of the memo.
    """

    def __init__(self, expr: SeriesExpr, ctx: FieldCtx, children=None):
        self.expr = expr
        self.ctx = ctx
        if children is None:
            children = [PowerSeries(c, ctx) for c in _children(expr)]
        self.children = list(children)
        self._memo = []
        self._lock = threading.RLock()
        self._validate()

    def _validate(self):
        e = self.expr
        if isinstance(e, RationalFn):
            if not e.denom or not e.denom[0]:
                raise ZeroDivisionError("rational series needs denom(0) != 0")
        elif isinstance(e, Scale):
            if not e.beta:
                raise ZeroBeta("scaling by zero")
        elif isinstance(e, Polylog):
            if e.weight < 0:
                raise ValueError("polylog weight must be >= 0")

    def __repr__(self):
        return f"PowerSeries({self.expr!r})"

    def coeff(self, n: int):
        if n < 0:
            raise IndexError("negative coefficient index")
        memo = self._memo
        if n < len(memo):
            return memo[n]
        with self._lock:
            if n >= len(self._memo):
                self._extend(n + 1)
            return self._memo[n]

    def coeffs(self, n: int) -> list:
        """The first n coefficients a_0, ..., a_{n-1}."""
        if n <= 0:
            return []
        self.coeff(n - 1)
        return self._memo[:n]

    def __getitem__(self, n):
        if isinstance(n, slice):
            start, stop, step = n.indices(n.stop if n.stop is not None else 0)
            return self.coeffs(stop)[start:stop:step]
        return self.coeff(n)

    # -- evaluation ------------------------------------------------------

    def _extend(self, upto):
        e = self.expr
        memo = self._memo
        ctx = self.ctx
        if isinstance(e, RationalFn):
            upto = max(upto, 2 * len(memo))
            d0inv = 1 / e.denom[0]
            for n in range(len(memo), upto):
                acc = e.numer[n] if n < len(e.numer) else ctx.zero
                for k in range(1, min(n, len(e.denom) - 1) + 1):
                    dk = e.denom[k]
                    if dk:
                        acc = acc - dk * memo[n - k]
                memo.append(acc * d0inv)
        elif isinstance(e, Algebraic):
            self._newton(max(upto, 2 * len(memo)))
        elif isinstance(e, HadamardProduct):
            f, g = self.children
            for n in range(len(memo), upto):
                memo.append(f.coeff(n) * g.coeff(n))
        elif isinstance(e, HadamardQuotient):
            f, g = self.children
            for n in range(len(memo), upto):
                b = g.coeff(n)
                if not b:
                    raise ZeroDenominatorCoefficient(n)
                memo.append(f.coeff(n) / b)
        elif isinstance(e, DiffOp):
            (f,) = self.children
            for n in range(len(memo), upto):
                memo.append(poly_at_int(e.poly, n, ctx) * f.coeff(n))
        elif isinstance(e, Scale):
            (f,) = self.children
            n0 = len(memo)
            power = e.beta ** n0 if n0 else ctx.one
            for n in range(n0, upto):
                memo.append(power * f.coeff(n))
                power = power * e.beta
        elif isinstance(e, Polylog):
            for n in range(len(memo), upto):
                if n == 0:
                    memo.append(ctx.zero)
                    continue
                d = ctx.coerce(n) ** e.weight
                if not d:
                    raise ZeroDenominatorCoefficient(n)
                memo.append(1 / d)
        elif isinstance(e, Literal):
            if upto > len(e.coeffs):
                raise PrefixExhausted(upto - 1, len(e.coeffs))
            memo.extend(e.coeffs[len(memo):upto])
        else:
            raise TypeError(f"unknown series node {e!r}")

    def _newton(self, target):
        e = self.expr
        zero = self.ctx.zero
        rel = e.relation
        drel = relation_dy(rel)
        if not self._memo:
            y0 = e.y0
            if eval_relation(rel, [y0], 1, zero)[0]:
                raise NewtonFailure("Phi(0, y0) != 0")
            if not eval_relation(drel, [y0], 1, zero)[0]:
                raise NewtonFailure("dPhi/dy(0, y0) = 0: branch ramified at t = 0")
            self._memo.append(y0)
        y = list(self._memo)
        while len(y) < target:
            m = min(2 * len(y), target)
            y = y + [zero] * (m - len(y))
            phi = eval_relation(rel, y, m, zero)
            dphi = eval_relation(drel, y, m, zero)
            corr = div_trunc(phi, dphi, m)
            y = [a - c for a, c in zip(y, corr)]
        self._memo[:] = y


# ---------------------------------------------------------------------------
# constructors


def _tuple(ctx, seq):
    return tuple(ctx.coerce(c) for c in seq)


def rational(numer, denom, ctx: FieldCtx) -> PowerSeries:
    return PowerSeries(RationalFn(_tuple(ctx, numer), _tuple(ctx, denom)), ctx)


def algebraic(relation, y0, ctx: FieldCtx) -> PowerSeries:
    rel = tuple(_tuple(ctx, p) for p in relation)
    return PowerSeries(Algebraic(rel, ctx.coerce(y0)), ctx)


def polylog(weight: int, ctx: FieldCtx) -> PowerSeries:
    return PowerSeries(Polylog(weight), ctx)


def literal(coeffs, ctx: FieldCtx) -> PowerSeries:
    return PowerSeries(Literal(_tuple(ctx, coeffs)), ctx)


def hadamard_product(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return PowerSeries(HadamardProduct(f.expr, g.expr), f.ctx, [f, g])


def hadamard_quotient(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return PowerSeries(HadamardQuotient(f.expr, g.expr), f.ctx, [f, g])


def diff_op(poly, f: PowerSeries) -> PowerSeries:
    """The series sum p(n) a_n t^n, i.e. p(t d/dt) applied to f."""
    return PowerSeries(DiffOp(_tuple(f.ctx, poly), f.expr), f.ctx, [f])


def scale(beta, f: PowerSeries) -> PowerSeries:
    """The series f(beta t)."""
    beta = f.ctx.coerce(beta)
    if not beta:
        raise ZeroBeta("scaling by zero")
    return PowerSeries(Scale(beta, f.expr), f.ctx, [f])


def catalan(ctx: FieldCtx) -> PowerSeries:
    """Generating function of the Catalan numbers: t y^2 - y + 1 = 0, y(0) = 1."""
    return algebraic([[1], [-1], [0, 1]], 1, ctx)
