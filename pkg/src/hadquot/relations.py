"""Bivariate algebraic relations Phi(t, y) and the Siegel-lemma search for one.

find_relation builds the linear system for a Phi of bidegree ((2r+1)L, r) with
Phi(t, f(t)) = 0 mod t^M, M = 2r(r+1)L, and returns an exact kernel vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import finite_fields as ff
from .errors import NoNonzeroTerm, NoneFound, UnverifiedRelation
from .fields import FieldCtx, RatFunc
from .heights import height, truncation_heights, weil_height
from .linalg import nullspace
from .series import PowerSeries, mul_trunc, power_prefixes

SAFETY = 1e-9


def _trim(poly):
    poly = list(poly)
    while poly and not poly[-1]:
        poly.pop()
    return tuple(poly)


@dataclass(frozen=True)
class BivariateRelation:
    """Phi(t, y) = sum_j coeffs[j](t) y^j.

    ``domain`` is the FieldCtx of K, or a FiniteField for relations between
    reduced series.  Coefficient polynomials are trimmed; trailing zero
    y-powers are dropped.
    """

    coeffs: tuple
    domain: object

    @classmethod
    def make(cls, coeffs, domain):
        polys = [_trim(p) for p in coeffs]
        while polys and not polys[-1]:
            polys.pop()
        if not polys:
            raise ValueError("zero relation")
        return cls(tuple(polys), domain)

    @classmethod
    def from_vector(cls, vec, dt, domain):
        polys = [vec[j * (dt + 1):(j + 1) * (dt + 1)] for j in range(len(vec) // (dt + 1))]
        return cls.make(polys, domain)

    @property
    def deg_y(self):
        return len(self.coeffs) - 1

    @property
    def deg_t(self):
        return max(len(p) for p in self.coeffs) - 1

    @property
    def over_finite_field(self):
        return isinstance(self.domain, ff.FiniteField)

    def entries(self):
        return [c for p in self.coeffs for c in p]

    def normalized(self):
        """Canonical scaling: integral primitive coefficients (Q, F_q[x]) and
        the lowest nonzero coefficient of the top y-power polynomial positive
        (Q), monic (F_q[x]) or equal to 1 (finite fields)."""
        lead = next(c for c in self.coeffs[-1] if c)
        D = self.domain
        if self.over_finite_field:
            inv = D.inv(lead)
            return BivariateRelation.make([[D.mul(inv, c) for c in p] for p in self.coeffs], D)
        if D.is_rationals:
            den = math.lcm(*(Fraction(c).denominator for c in self.entries()))
            ints = [[Fraction(c).numerator * (den // Fraction(c).denominator) for c in p] for p in self.coeffs]
            g = math.gcd(*(n for p in ints for n in p))
            sign = -1 if lead < 0 else 1
            return BivariateRelation.make([[Fraction(sign * n // g) for n in p] for p in ints], D)
        F = D.F
        den = [1]
        for c in self.entries():
            if c:
                den = ff.monic(F, ff.poly_divmod(F, ff.poly_mul(F, den, list(c.den)), ff.poly_gcd(F, den, list(c.den)))[0])
        polys = [[ff.poly_divmod(F, ff.poly_mul(F, list(c.num), den), list(c.den))[0] if c else [] for c in p]
                 for p in self.coeffs]
        g = []
        for p in polys:
            for c in p:
                if c:
                    g = ff.poly_gcd(F, g, c) if g else ff.monic(F, c)
        polys = [[ff.poly_divmod(F, c, g)[0] for c in p] for p in polys]
        top = next(c for c in polys[-1] if c)
        inv = F.inv(top[-1])
        return BivariateRelation.make(
            [[RatFunc(F, ff.poly_scale(F, inv, c)) if c else D.zero for c in p] for p in polys], D)

    def height(self, ctx: FieldCtx) -> float:
        return weil_height(ctx, self.entries())

    def fmt_elem(self, c):
        if self.over_finite_field:
            return str(c)
        return self.domain.format_element(c)

    def to_dict(self):
        return {
            "coeffs": [[self.fmt_elem(c) for c in p] for p in self.coeffs],
            "deg_t": self.deg_t,
            "deg_y": self.deg_y,
            "text": str(self),
        }

    def __str__(self):
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            for i, c in enumerate(self.coeffs[j]):
                if not c:
                    continue
                mono = "*".join(m for m in (
                    "" if i == 0 else ("t" if i == 1 else f"t^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if m)
                s = self.fmt_elem(c)
                if mono:
                    if s == "1":
                        s = mono
                    elif s == "-1":
                        s = "-" + mono
                    else:
                        s = f"{s}*{mono}"
                terms.append(s)
        out = " + ".join(terms)
        return out.replace("+ -", "- ")


def evaluate_relation(rel: BivariateRelation, f: PowerSeries, order: int) -> list:
    """First ``order`` coefficients of Phi(t, f(t))."""
    ctx = f.ctx
    pw = power_prefixes(f, rel.deg_y, order)
    acc = [ctx.zero] * order
    for j, pj in enumerate(rel.coeffs):
        if pj:
            prod = mul_trunc(list(pj), pw[j], order, ctx.zero)
            acc = [a + b for a, b in zip(acc, prod)]
    return acc


def verify_relation(rel: BivariateRelation, f: PowerSeries, check_order: int):
    """(vanishing order, first nonzero term (n, c) or None), checked up to
    t^check_order."""
    if check_order < 1:
        raise ValueError("check_order must be >= 1")
    vals = evaluate_relation(rel, f, check_order)
    for n, c in enumerate(vals):
        if c:
            return n, (n, c)
    return check_order, None


def siegel_dims(r: int, L: int):
    """(M, N) with M = 2r(r+1)L rows and N = (2r+1)(r+1)L."""
    if r < 1 or L < 1:
        raise ValueError("r and L must be >= 1")
    return 2 * r * (r + 1) * L, (2 * r + 1) * (r + 1) * L


def monomial_count(r: int, L: int) -> int:
    """Number of monomials t^i y^j of bidegree <= ((2r+1)L, r)."""
    return ((2 * r + 1) * L + 1) * (r + 1)


@dataclass
class RelationCertificate:
    relation: BivariateRelation
    vanishing_order: int
    first_nonzero: tuple | None  # (n, c)
    height_of_relation: float
    siegel_bound: float
    r: int
    L: int
    M: int
    N: int  # monomials actually used as unknowns
    verification_cap: int  # coefficients checked beyond M
    search_degree: int  # t-degree at which the kernel first became nonzero

    @property
    def exact_at_cap(self):
        return self.first_nonzero is None

    def to_dict(self, ctx: FieldCtx):
        fn = None
        if self.first_nonzero is not None:
            n, c = self.first_nonzero
            fn = {"n": n, "c": ctx.format_element(c)}
        return {
            "relation": self.relation.to_dict(),
            "vanishing_order": self.vanishing_order,
            "first_nonzero": fn,
            "height_of_relation": self.height_of_relation,
            "siegel_bound": self.siegel_bound,
            "r": self.r,
            "L": self.L,
            "M": self.M,
            "N_monomials": self.N,
            "N_formula": siegel_dims(self.r, self.L)[1],
            "verification_cap": self.verification_cap,
            "search_degree": self.search_degree,
        }


def siegel_bound(f: PowerSeries, r: int, L: int) -> float:
    """eps/2 log N + 2r h_K(1, f_{/M}, ..., (f^r)_{/M}) + G."""
    ctx = f.ctx
    M, N = siegel_dims(r, L)
    (_, h), = truncation_heights(f, r, [M])
    return ctx.epsilon / 2 * math.log(N) + 2 * r * h + ctx.genus_term


def _lex_key(rel):
    return tuple(str(c) for c in rel.entries())


def find_relation(f: PowerSeries, r: int, L: int, verification_cap: int | None = None) -> RelationCertificate:
    """Smallest-t-degree nonzero Phi of y-degree <= r with Phi(t, f) = 0 mod t^M.

    The kernel of the M x N system is searched by increasing the allowed
    t-degree D = 0, 1, ..., (2r+1)L; at the first D with a nonzero kernel the
    echelon basis vectors are content-normalized and the one of least height
    (ties: lexicographic) is returned.  Every such vector is a solution of the
    full bidegree ((2r+1)L, r) system.
    """
    ctx = f.ctx
    M, _ = siegel_dims(r, L)
    Dt = (2 * r + 1) * L
    N = monomial_count(r, L)
    assert N > M
    cap = 4 * M if verification_cap is None else verification_cap
    total = M + cap
    bound = siegel_bound(f, r, L)

    if not any(f.coeffs(total)):
        rel = BivariateRelation.make([[], [ctx.one]], ctx)
        order, first = verify_relation(rel, f, total)
        return RelationCertificate(rel, order, first, rel.height(ctx), bound, r, L, M, N, cap, 0)

    pw = power_prefixes(f, r, M)
    chosen = None
    for D in range(Dt + 1):
        ncols = (D + 1) * (r + 1)
        rows = []
        for n in range(M):
            row = []
            for j in range(r + 1):
                for i in range(D + 1):
                    row.append(pw[j][n - i] if n >= i else ctx.zero)
            rows.append(row)
        basis = nullspace(rows, ncols, ctx.one)
        if basis:
            cands = [BivariateRelation.from_vector(v, D, ctx).normalized() for v in basis]
            chosen = min(cands, key=lambda c: (c.height(ctx), _lex_key(c)))
            break
    if chosen is None:
        raise NoneFound("trivial kernel")
    order, first = verify_relation(chosen, f, total)
    assert order >= M
    return RelationCertificate(chosen, order, first, chosen.height(ctx), bound, r, L, M, N, cap, D)


@dataclass
class SiegelReport:
    height_of_relation: float
    bound: float
    satisfied: bool
    note: str

    def to_dict(self):
        return {"height_of_relation": self.height_of_relation, "bound": self.bound,
                "satisfied": self.satisfied, "note": self.note}


def siegel_bound_report(cert: RelationCertificate, f: PowerSeries, ctx: FieldCtx) -> SiegelReport:
    bound = siegel_bound(f, cert.r, cert.L)
    h = cert.relation.height(ctx)
    ok = h <= bound + SAFETY
    note = ("the bound guarantees that some small solution exists; "
            + ("the returned relation is within it" if ok else "the returned relation exceeds it")
            + "; the unspecified c*log N allowance for the polynomial factor is not included")
    return SiegelReport(h, bound, ok, note)


@dataclass
class ProductFormulaSplit:
    height_of_c: float  # h_K(c), an upper bound for the contributions below
    positive_contrib: float  # sum of log|k(s)| over audited s with h_s < n/4r^2
    places: list
    n: int
    holds: bool

    def to_dict(self):
        return {"height_of_c": self.height_of_c, "positive_contrib": self.positive_contrib,
                "places": [str(p) for p in self.places], "n": self.n, "holds": self.holds}


def product_formula_on_c(cert: RelationCertificate, ctx: FieldCtx, profile=None) -> ProductFormulaSplit:
    """Split the product formula for the first nonzero coefficient c of
    Phi(t, f): audited places with h_s < n/4r^2 each contribute at least
    log|k(s)|, and together they are bounded by h_K(c)."""
    if cert.first_nonzero is None:
        raise NoNonzeroTerm("certificate has no nonzero term")
    n, c = cert.first_nonzero
    hc = height(ctx, c)
    places = []
    if profile is not None:
        places = profile.qualifying(n, cert.r)
    contrib = sum(p.residue_log_card for p in places)
    return ProductFormulaSplit(hc, contrib, places, n, contrib <= hc + SAFETY)


def check_relation(rel: BivariateRelation, f: PowerSeries, order: int):
    """Raise UnverifiedRelation unless Phi(t, f) vanishes to the given order."""
    vanish, first = verify_relation(rel, f, order)
    if first is not None:
        raise UnverifiedRelation(first[0])
