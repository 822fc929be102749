"""Reduction of series at finite places, reduction degrees h_s, periods of
Hadamard inverses modulo a place and weighted place densities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import sympy

from .errors import InsufficientPrefix, NonIntegralData, NotIntegral, NotReducible
from .expsum import ExpSumForm
from .fields import FieldCtx, Place, enumerate_places, reduce_element, residue_field
from .linalg import nullspace_mod
from .relations import BivariateRelation

INF = math.inf
DEFAULT_MARGIN = 8


def reduce_series(f, s: Place, order: int) -> list:
    """Images of a_0, ..., a_order in k(s)."""
    if s.is_archimedean:
        raise ValueError("reduction needs a non-archimedean place")
    out = []
    for n, a in enumerate(f.coeffs(order + 1)):
        try:
            out.append(reduce_element(s, a))
        except NotIntegral:
            raise NotReducible(n) from None
    return out


def relation_budget(H: int, r: int) -> int:
    """Vanishing order that forces a bidegree (H, r) relation to be exact."""
    return (H + 1) * (r + 1) + H * r


def required_prefix(r: int, degree_cap: int, margin: int = DEFAULT_MARGIN) -> int:
    return relation_budget(degree_cap, r) + margin


def _powers_mod(fs, r, n, F):
    out = [[1] + [0] * (n - 1)]
    base = fs[:n]
    for _ in range(r):
        prev = out[-1]
        nxt = [0] * n
        for i, x in enumerate(prev):
            if x:
                for j in range(n - i):
                    y = base[j]
                    if y:
                        nxt[i + j] = F.add(nxt[i + j], F.mul(x, y))
        out.append(nxt)
    return out


def minimal_relation_mod(fs, r: int, degree_cap: int, F, margin: int = DEFAULT_MARGIN):
    """(Phi, H) for the least H <= degree_cap admitting a nonzero Phi of
    bidegree (H, r) over F with Phi(t, f_s) = 0 mod t^{budget(H) + margin};
    None when no such H exists (h_s = +inf at the cap).

    The extra ``margin`` rows guard against relations that vanish only by
    accident to the bare budget.
    """
    need = required_prefix(r, degree_cap, margin)
    if len(fs) < need:
        raise InsufficientPrefix(f"need {need} coefficients, got {len(fs)}")
    pw = _powers_mod(fs, r, need, F)
    for H in range(degree_cap + 1):
        rows = []
        for n in range(relation_budget(H, r) + margin):
            rows.append([pw[j][n - i] if n >= i else 0 for j in range(r + 1) for i in range(H + 1)])
        basis = nullspace_mod(rows, (H + 1) * (r + 1), F)
        if basis:
            cands = [BivariateRelation.from_vector(v, H, F).normalized() for v in basis]
            return min(cands, key=lambda c: c.coeffs), H
    return None


# ---------------------------------------------------------------------------
# exponential sums modulo a place


def _reduce_expsum(e: ExpSumForm, s: Place):
    """[(q reduced, gamma reduced)]; NonIntegralData if some datum is not
    s-integral."""
    try:
        return [([reduce_element(s, c) for c in q], reduce_element(s, g)) for q, g in e.terms]
    except NotIntegral as exc:
        raise NonIntegralData(str(exc)) from None


def _eval_mod(terms, n, F):
    nn = F.from_int(n)
    acc = 0
    for q, g in terms:
        v = 0
        for c in reversed(q):
            v = F.add(F.mul(v, nn), c)
        if v and (g or n == 0):
            acc = F.add(acc, F.mul(v, F.pow(g, n) if n else 1))
    return acc


def _as_place(p) -> Place:
    return p if isinstance(p, Place) else Place.prime(int(p))


@dataclass(frozen=True)
class PeriodResult:
    invertible_everywhere: bool
    period: int | None
    preperiod: int

    def to_dict(self):
        return {"invertible_everywhere": self.invertible_everywhere,
                "period": self.period, "preperiod": self.preperiod}


def hadamard_inverse_period_mod(e: ExpSumForm, p) -> PeriodResult:
    """Decide whether every b_n is a unit at p and, if so, the least period of
    n -> 1/b_n mod p.  Terms with gamma = 0 mod p only affect b_0, which is
    then reported as a preperiod of length 1."""
    s = _as_place(p)
    F = residue_field(s)
    terms = _reduce_expsum(e, s)
    Q = F.order
    T = Q - 1
    if any(len(q) > 1 for q, _ in terms):
        T *= F.p
    n0 = 1 if any(g == 0 for _, g in terms) else 0
    vals = [_eval_mod(terms, n, F) for n in range(n0 + T)]
    if not all(vals):
        return PeriodResult(False, None, n0)
    inv = [F.inv(v) for v in vals[n0:]]
    for d in sorted(sympy.divisors(T)):
        if all(inv[i] == inv[i % d] for i in range(T)):
            return PeriodResult(True, d, n0)
    raise AssertionError("no period found")


@lru_cache(maxsize=None)
def _prime_factors(n):
    return tuple(sympy.factorint(n))


def _mult_order(F, a):
    N = F.order - 1
    k = N
    for ell in _prime_factors(N):
        while k % ell == 0 and F.pow(a, k // ell) == 1:
            k //= ell
    return k


def units_everywhere(e: ExpSumForm, p) -> bool:
    """True iff every b_n is a unit at p (non-integral data: False).

    One or two simple terms are decided through multiplicative orders; other
    cases enumerate one full period."""
    s = _as_place(p)
    F = residue_field(s)
    try:
        terms = _reduce_expsum(e, s)
    except NonIntegralData:
        return False
    if not _eval_mod(terms, 0, F):
        return False
    live = [(q, g) for q, g in terms if g]
    if any(len(q) > 1 for q, _ in live) or len(live) > 2:
        return hadamard_inverse_period_mod(e, s).invertible_everywhere
    # merge bases that became equal mod p
    merged = {}
    for (c,), g in live:
        merged[g] = F.add(merged.get(g, 0), c)
    live = [(c, g) for g, c in merged.items() if c]
    if len(live) == 0:
        return False  # b_n = 0 for n >= 1
    if len(live) == 1:
        return True
    (c1, g1), (c2, g2) = live
    # b_n = 0  iff  (g1/g2)^n = -c2/c1
    rho = F.div(g1, g2)
    target = F.neg(F.div(c2, c1))
    return F.pow(target, _mult_order(F, rho)) != 1


# ---------------------------------------------------------------------------
# densities


@dataclass
class DensityEstimate:
    numerator_log: float
    denominator_log: float
    ratio: float
    n: int

    def to_dict(self):
        return {"numerator_log": self.numerator_log, "denominator_log": self.denominator_log,
                "ratio": self.ratio, "n": self.n}


def place_set_density(qualifier, ctx: FieldCtx, n: int) -> DensityEstimate:
    """sum_{s in S, |k(s)| <= n} log|k(s)| / sum_{|k(s)| <= n} log|k(s)|."""
    if n < 2:
        raise ValueError("n must be >= 2")
    num = den = 0.0
    for s in enumerate_places(ctx, n):
        if s.is_archimedean:
            continue
        w = s.residue_log_card
        den += w
        if qualifier(s):
            num += w
    ratio = num / den if den else 0.0
    return DensityEstimate(num, den, ratio, n)


def split_unit_density(g: ExpSumForm, ctx: FieldCtx, n: int) -> DensityEstimate:
    """Density of places that split completely in the field of the poles and
    at which every b_n is a unit.  Poles lie in K, so over Q splitting is
    vacuous; over F_q(x) only places of degree one are counted as split."""

    def qualifies(s: Place):
        if s.kind == "poly" and len(s.poly) != 2:
            return False
        return units_everywhere(g, s)

    return place_set_density(qualifies, ctx, n)


# ---------------------------------------------------------------------------
# profile


@dataclass
class ProfileEntry:
    h: float  # int, or math.inf
    status: str  # "ok" | "not-reducible" | "infinite-at-cap"
    relation: BivariateRelation | None = None
    index: int | None = None  # first non-integral coefficient

    def to_dict(self):
        d = {"h": "inf" if self.h == INF else self.h, "status": self.status}
        if self.relation is not None:
            d["relation"] = self.relation.to_dict()
        if self.index is not None:
            d["first_non_integral"] = self.index
        return d


@dataclass
class ReductionProfile:
    r: int
    entries: dict  # Place -> ProfileEntry
    place_bound: int
    search_cap: int
    margin: int
    checked_order: int  # coefficients a_0..a_{checked_order} tested for integrality

    def h(self, s: Place):
        return self.entries[s].h

    def qualifying(self, n: int, r: int | None = None) -> list:
        """Places with h_s < n / 4r^2."""
        r = self.r if r is None else r
        cut = n / (4 * r * r)
        return [s for s, e in self.entries.items() if e.h < cut]

    def lhs(self, n: int, r: int | None = None) -> float:
        return sum(s.residue_log_card for s in self.qualifying(n, r))

    def to_dict(self):
        return {
            "r": self.r,
            "place_bound": self.place_bound,
            "search_cap": self.search_cap,
            "margin": self.margin,
            "checked_order": self.checked_order,
            "entries": [{"place": str(s), **e.to_dict()} for s, e in self.entries.items()],
        }


def profile(f, r: int, place_bound: int, degree_cap: int, margin: int = DEFAULT_MARGIN) -> ReductionProfile:
    """h_s for every finite place with |k(s)| <= place_bound.

    Integrality is checked on a_0, ..., a_order with order at least
    place_bound, so every prime up to the bound gets a chance to divide a
    denominator; places where it does get h_s = +inf."""
    ctx = f.ctx
    need = required_prefix(r, degree_cap, margin)
    order = max(need, place_bound + 1) - 1
    entries = {}
    for s in enumerate_places(ctx, place_bound):
        if s.is_archimedean:
            continue
        try:
            fs = reduce_series(f, s, order)
        except NotReducible as exc:
            entries[s] = ProfileEntry(INF, "not-reducible", index=exc.index)
            continue
        found = minimal_relation_mod(fs, r, degree_cap, residue_field(s), margin)
        if found is None:
            entries[s] = ProfileEntry(INF, "infinite-at-cap")
        else:
            rel, H = found
            entries[s] = ProfileEntry(H, "ok", rel)
    return ReductionProfile(r, entries, place_bound, degree_cap, margin, order)
