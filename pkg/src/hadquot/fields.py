"""Global fields Q and F_q(x): elements, places, normalized absolute values.

Elements of Q are ``fractions.Fraction``.  Elements of F_q(x) are ``RatFunc``
instances kept in lowest terms with monic denominator.  Both support the usual
arithmetic operators, so generic code can treat them alike.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint

from . import finite_fields as ff
from .errors import NotIntegral, ZeroElement


class RatFunc:
    """A rational function num/den in F_q(x), in lowest terms, den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den=(1,)):
        F = field
        num = ff.trim(F, num)
        den = ff.trim(F, den)
        if not den:
            raise ZeroDivisionError("zero denominator in F_q(x)")
        if not num:
            den = [1]
        else:
            g = ff.poly_gcd(F, num, den)
            if g != [1]:
                num = ff.poly_divmod(F, num, g)[0]
                den = ff.poly_divmod(F, den, g)[0]
            c = F.inv(den[-1])
            if c != 1:
                num = ff.poly_scale(F, c, num)
                den = ff.poly_scale(F, c, den)
        self.field = F
        self.num = tuple(num)
        self.den = tuple(den)

    @classmethod
    def _raw(cls, field, num, den):
        obj = cls.__new__(cls)
        obj.field, obj.num, obj.den = field, tuple(num), tuple(den)
        return obj

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, int):
            c = self.field.from_int(other)
            return RatFunc._raw(self.field, (c,) if c else (), (1,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.den == other.den:
            return RatFunc(F, ff.poly_add(F, self.num, other.num), self.den)
        num = ff.poly_add(F, ff.poly_mul(F, self.num, other.den), ff.poly_mul(F, other.num, self.den))
        return RatFunc(F, num, ff.poly_mul(F, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(self.field, ff.poly_neg(self.field, self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        return RatFunc(F, ff.poly_mul(F, self.num, other.num), ff.poly_mul(F, self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero in F_q(x)")
        F = self.field
        return RatFunc(F, ff.poly_mul(F, self.num, other.den), ff.poly_mul(F, self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e):
        if e < 0:
            return (1 / self) ** (-e)
        result = RatFunc._raw(self.field, (1,), (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == (1,) and len(self.num) <= 1:
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)})"


def format_ratfunc(a: RatFunc) -> str:
    num = "<" + " ".join(map(str, a.num)) + ">"
    if a.den == (1,):
        return num
    return num + "/<" + " ".join(map(str, a.den)) + ">"


@dataclass(frozen=True)
class FieldCtx:
    """Which global field we work over, with the constants epsilon and G."""

    kind: str  # "Q" or "Fq"
    q: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Fq"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "Fq":
            ff.gf(self.q)  # validates prime power

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def function_field(cls, q):
        return cls("Fq", q)

    @property
    def is_rationals(self):
        return self.kind == "Q"

    @property
    def epsilon(self):
        return 1 if self.kind == "Q" else 0

    @property
    def genus_term(self):
        # log|D_{Q/Q}|/2 = 0 and g*log q = 0 for the genus-0 base
        return 0.0

    @cached_property
    def F(self):
        return ff.gf(self.q) if self.kind == "Fq" else None

    @property
    def characteristic(self):
        return 0 if self.kind == "Q" else self.F.p

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        if self.kind == "Q":
            if isinstance(x, RatFunc):
                raise TypeError("F_q(x) element given to a Q context")
            return Fraction(x)
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Fraction):
            return RatFunc(self.F, [self.F.from_int(x.numerator)]) / RatFunc(
                self.F, [self.F.from_int(x.denominator)])
        if isinstance(x, int):
            c = self.F.from_int(x)
            return RatFunc._raw(self.F, (c,) if c else (), (1,))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def x(self):
        """The transcendental x of F_q(x)."""
        return RatFunc._raw(self.F, (0, 1), (1,))

    def parse_element(self, text: str):
        text = text.strip()
        if self.kind == "Q":
            return Fraction(text)
        m = re.fullmatch(r"<([^>]*)>(?:/<([^>]*)>)?", text)
        if not m:
            raise ValueError(f"bad F_q(x) element {text!r}")
        num = [int(c) for c in m.group(1).split()]
        den = [int(c) for c in m.group(2).split()] if m.group(2) is not None else [1]
        for c in num + den:
            if not 0 <= c < self.q:
                raise ValueError(f"coefficient {c} out of range for F_{self.q}")
        return RatFunc(self.F, num, den)

    def format_element(self, a) -> str:
        if self.kind == "Q":
            return str(a)
        return format_ratfunc(a)

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F_{self.q}(x)"


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class Place:
    """A normalized absolute value of Q or F_q(x).

    kind is one of "inf" (archimedean), "p" (prime p), "poly" (monic
    irreducible ``poly`` over F_q, coefficients lowest first) or "deg" (the
    degree valuation of F_q(x)).
    """

    kind: str
    p: int = 0
    poly: tuple = ()
    q: int = 0

    @classmethod
    def archimedean(cls):
        return cls("inf")

    @classmethod
    def prime(cls, p):
        return cls("p", p=p)

    @classmethod
    def irreducible(cls, q, poly):
        return cls("poly", poly=tuple(poly), q=q)

    @classmethod
    def degree_place(cls, q):
        return cls("deg", q=q)

    @property
    def is_archimedean(self):
        return self.kind == "inf"

    @property
    def residue_card(self):
        if self.kind == "p":
            return self.p
        if self.kind == "poly":
            return self.q ** (len(self.poly) - 1)
        if self.kind == "deg":
            return self.q
        return None

    @property
    def residue_log_card(self):
        if self.kind == "inf":
            return None
        if self.kind == "poly":
            return (len(self.poly) - 1) * math.log(self.q)
        return math.log(self.residue_card)

    def sort_key(self):
        order = {"inf": 0, "deg": 1, "p": 1, "poly": 2}[self.kind]
        card = self.residue_card or 0
        return (card, order, tuple(reversed(self.poly)), self.p)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "inf":
            return "inf"
        if self.kind == "p":
            return f"p:{self.p}"
        if self.kind == "deg":
            return "deg"
        return f"poly:q={self.q}:{ff.format_poly(ff.gf(self.q), list(self.poly))}"

    @classmethod
    def parse(cls, text: str, ctx: FieldCtx | None = None):
        text = text.strip()
        if text == "inf":
            return cls.archimedean()
        if text == "deg":
            if ctx is None or ctx.kind != "Fq":
                raise ValueError("degree place needs a function-field context")
            return cls.degree_place(ctx.q)
        if text.startswith("p:"):
            p = int(text[2:])
            if not _isprime(p):
                raise ValueError(f"{p} is not prime")
            return cls.prime(p)
        m = re.fullmatch(r"poly:q=(\d+):(.+)", text)
        if m:
            q = int(m.group(1))
            F = ff.gf(q)
            poly = ff.parse_poly(F, m.group(2))
            if not poly or poly[-1] != 1 or not ff.is_irreducible(F, poly):
                raise ValueError(f"{m.group(2)} is not monic irreducible over F_{q}")
            return cls.irreducible(q, poly)
        raise ValueError(f"bad place {text!r}")


def _isprime(n):
    return n >= 2 and factorint(n) == {n: 1}


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def enumerate_places(ctx: FieldCtx, bound: int) -> list[Place]:
    """All non-archimedean places with residue cardinality <= bound, ordered
    by cardinality then lexicographically; the archimedean place of Q first."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    if ctx.is_rationals:
        return [Place.archimedean()] + [Place.prime(p) for p in primes_upto(bound)]
    q = ctx.q
    places = []
    if q <= bound:
        places.append(Place.degree_place(q))
    d = 1
    while q ** d <= bound:
        places.extend(Place.irreducible(q, f) for f in ff.iter_monic_irreducibles(ctx.F, d))
        d += 1
    return sorted(places)


# ---------------------------------------------------------------------------
# valuations


def _ord_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _ord_poly(F, a, pi) -> int:
    k = 0
    while True:
        quo, rem = ff.poly_divmod(F, a, pi)
        if rem:
            return k
        a = quo
        k += 1


def order_at(place: Place, a) -> int:
    """ord_v(a) for a non-archimedean place; a must be nonzero."""
    if not a:
        raise ZeroElement("valuation of zero")
    if place.kind == "p":
        return _ord_int(a.numerator, place.p) - _ord_int(a.denominator, place.p)
    if place.kind == "poly":
        F = a.field
        pi = list(place.poly)
        return _ord_poly(F, list(a.num), pi) - _ord_poly(F, list(a.den), pi)
    if place.kind == "deg":
        return len(a.den) - len(a.num)
    raise ValueError("order_at needs a non-archimedean place")


def log_abs(place: Place, a) -> float:
    """log|a|_v with log|.|_v = -ord_v(.) log|k(v)|; log|a| at infinity."""
    if not a:
        return -math.inf
    if place.kind == "inf":
        return math.log(abs(a.numerator)) - math.log(a.denominator)
    return -order_at(place, a) * place.residue_log_card


def abs_key(place: Place, a):
    """An exactly comparable stand-in for |a|_v (monotone in |a|_v)."""
    if place.kind == "inf":
        return abs(Fraction(a))
    if not a:
        return -math.inf
    return -order_at(place, a)


@lru_cache(maxsize=64)
def _primorial(bound):
    out = 1
    for p in primes_upto(bound):
        out *= p
    return out


def _int_factors(n: int, bound: int | None) -> dict[int, int]:
    n = abs(n)
    if n <= 1:
        return {}
    if bound is None:
        return factorint(n)
    g = math.gcd(n, _primorial(bound))
    if g == 1:
        return {}
    return {p: _ord_int(n, p) for p in factorint(g)}


def nonzero_orders(ctx: FieldCtx, a, bound: int | None = None) -> dict[Place, int]:
    """ord_v(a) at every non-archimedean place where it is nonzero (restricted
    to residue cardinality <= bound when given), ordered by place."""
    if not a:
        raise ZeroElement("valuation of zero")
    out = {}
    if ctx.is_rationals:
        num = _int_factors(a.numerator, bound)
        den = _int_factors(a.denominator, bound)
        for p in sorted(set(num) | set(den)):
            k = num.get(p, 0) - den.get(p, 0)
            if k:
                out[Place.prime(p)] = k
        return out
    F, q = ctx.F, ctx.q
    orders = {}
    for poly, sign in ((a.num, 1), (a.den, -1)):
        if len(poly) > 1:
            for pi, m in ff.factor(F, list(poly))[1]:
                pl = Place.irreducible(q, pi)
                if bound is None or pl.residue_card <= bound:
                    orders[pl] = orders.get(pl, 0) + sign * m
    k = len(a.den) - len(a.num)
    if k and (bound is None or q <= bound):
        orders[Place.degree_place(q)] = k
    return {pl: orders[pl] for pl in sorted(orders) if orders[pl]}


class LogCombination:
    """A formal integer combination sum_s c_s * log(s) of logarithms of
    primes (for Q) or of q (for F_q(x)), so that zero tests are exact."""

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LogCombination(out)

    def __neg__(self):
        return LogCombination({k: -v for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def value(self):
        return sum(c * math.log(s) for s, c in sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, LogCombination) and self.terms == other.terms

    def __repr__(self):
        return "LogCombination(" + " + ".join(f"{c}*log({s})" for s, c in sorted(self.terms.items())) + ")"


def local_log_combination(ctx: FieldCtx, place: Place, a) -> LogCombination:
    """log|a|_v as a formal combination."""
    if place.kind == "inf":
        num = factorint(abs(a.numerator))
        den = factorint(a.denominator)
        terms = dict(num)
        for p, k in den.items():
            terms[p] = terms.get(p, 0) - k
        return LogCombination(terms)
    k = order_at(place, a)
    if place.kind == "p":
        return LogCombination({place.p: -k})
    weight = len(place.poly) - 1 if place.kind == "poly" else 1
    return LogCombination({ctx.q: -k * weight})


def product_formula_defect(ctx: FieldCtx, a) -> LogCombination:
    """sum_v log|a|_v over all places, as a formal combination (always 0)."""
    a = ctx.coerce(a)
    if not a:
        raise ZeroElement("product formula needs a nonzero element")
    total = LogCombination()
    if ctx.is_rationals:
        total = total + local_log_combination(ctx, Place.archimedean(), a)
    for place in nonzero_orders(ctx, a):
        total = total + local_log_combination(ctx, place, a)
    return total


# ---------------------------------------------------------------------------
# residue fields


@lru_cache(maxsize=4096)
def residue_field(place: Place) -> ff.FiniteField:
    if place.kind == "p":
        return ff.gf(place.p)
    if place.kind == "deg":
        return ff.gf(place.q)
    if place.kind == "poly":
        F = ff.gf(place.q)
        if len(place.poly) == 2:
            return F
        return F.extension(place.poly)
    raise ValueError("the archimedean place has no residue field")


def reduce_element(place: Place, a) -> int:
    """Image of a v-integral element in k(v); raises NotIntegral otherwise."""
    k = residue_field(place)
    if place.kind == "p":
        d = a.denominator % place.p
        if d == 0:
            raise NotIntegral(f"{a} is not {place.p}-integral")
        return a.numerator % place.p * pow(d, -1, place.p) % place.p
    F = a.field
    if place.kind == "deg":
        dn, dd = len(a.num) - 1, len(a.den) - 1
        if dn > dd:
            raise NotIntegral("pole at the degree place")
        if dn < dd or not a.num:
            return 0
        return F.div(a.num[-1], a.den[-1])
    pi = list(place.poly)
    den = ff.poly_mod(F, list(a.den), pi)
    if not den:
        raise NotIntegral("pole at the place")
    num = ff.poly_mod(F, list(a.num), pi)
    if len(pi) == 2:
        # residue field is F itself; evaluate at the root of x - c
        root = F.neg(pi[0])
        return F.div(ff.poly_eval(F, num, root), ff.poly_eval(F, den, root))
    return k.div(_embed(k, num), _embed(k, den))


def _embed(k, poly):
    poly = list(poly) + [0] * (k.degree - len(poly))
    return k.encode(poly)
