"""The algebraicity criterion and the hypothesis checkers built on it.

Nothing here ever claims transcendence.  The left side of the criterion is a
liminf over all places; only a finite audit of it is computed, so a positive
margin without a certificate is evidence, not proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import sympy

from .errors import NonSimplePoles, NoDominantPole
from .expsum import DominantPole, ExpSumForm, dominant_pole_decompose, expsum_to_rational
from .fields import FieldCtx, Place
from .heights import radius_profile, series_height, truncation_heights
from .reduction import DensityEstimate, ReductionProfile, profile, split_unit_density
from .relations import (
    BivariateRelation,
    RelationCertificate,
    check_relation,
    find_relation,
)
from .series import PowerSeries, RationalFn, diff_op, hadamard_quotient, scale

SAFETY = 1e-9

CERTIFIED = "AlgebraicCertified"
HOLDS = "InequalityHoldsAtAudit"
INCONCLUSIVE = "Inconclusive"

AUDIT_NOTE = (
    "The left side of the criterion is a liminf over all places; this report "
    "evaluates it on the finite set of places up to place_bound and on the "
    "listed ladder of orders only. A positive margin is evidence that the "
    "hypothesis holds at the audited scale, not a proof; algebraicity is only "
    "asserted together with an exactly verified relation."
)


def le(a, b):
    return a <= b + SAFETY


def gt(a, b):
    return a > b + SAFETY


def default_ladder(r: int) -> list:
    return [8 * r * r * 2 ** k for k in range(4)]


def default_degree_cap(r: int, ladder) -> int:
    """Largest h_s that can still count at the top of the ladder."""
    return max(1, math.ceil(max(ladder) / (4 * r * r)) - 1)


@dataclass
class CriterionReport:
    r: int
    lhs_samples: list  # [(n, Lambda(n))]
    rhs_samples: list  # [(n, (2r+1) h / n)]
    margin: float
    certificate: RelationCertificate | None
    verdict: str
    anomaly: bool
    L: int  # order parameter of the certificate actually reported
    place_bound: int
    degree_cap: int
    profile: ReductionProfile
    ctx: FieldCtx

    def ladder_rows(self):
        return [(n, lam, rhs) for (n, lam), (_, rhs) in zip(self.lhs_samples, self.rhs_samples)]

    def to_dict(self):
        return {
            "r": self.r,
            "ladder": [{"n": n, "lambda": lam, "rhs": rhs} for n, lam, rhs in self.ladder_rows()],
            "margin": self.margin,
            "verdict": self.verdict,
            "anomaly": self.anomaly,
            "L": self.L,
            "place_bound": self.place_bound,
            "degree_cap": self.degree_cap,
            "certificate": None if self.certificate is None else self.certificate.to_dict(self.ctx),
            "profile": self.profile.to_dict(),
            "audit_note": AUDIT_NOTE,
        }


def _check_ladder(ladder):
    ladder = list(ladder)
    if not ladder or ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be nonempty, positive and strictly increasing")
    return ladder


def criterion_run(f: PowerSeries, r: int, ladder=None, place_bound: int = 200, L: int = 1,
                  degree_cap: int | None = None, verification_cap: int | None = None) -> CriterionReport:
    if r < 1 or L < 1:
        raise ValueError("r and L must be >= 1")
    ladder = _check_ladder(default_ladder(r) if ladder is None else ladder)
    cap = default_degree_cap(r, ladder) if degree_cap is None else degree_cap
    prof = profile(f, r, place_bound, cap)
    lhs = [(n, prof.lhs(n) / n) for n in ladder]
    rhs = [(n, (2 * r + 1) * h / n) for n, h in truncation_heights(f, r, ladder)]
    margin = min(a - b for (_, a), (_, b) in zip(lhs, rhs))

    cert = find_relation(f, r, L, verification_cap)
    used_L = L
    anomaly = False
    if not cert.exact_at_cap and gt(margin, 0.0):
        # the criterion predicts a relation; try once more with room to find it
        retry = find_relation(f, r, 2 * L, verification_cap)
        used_L = 2 * L
        cert = retry
        anomaly = not retry.exact_at_cap

    if cert.exact_at_cap:
        verdict = CERTIFIED
    elif gt(margin, 0.0):
        verdict = HOLDS
    else:
        verdict = INCONCLUSIVE
    return CriterionReport(r, lhs, rhs, margin, cert, verdict, anomaly, used_L,
                           place_bound, cap, prof, f.ctx)


# ---------------------------------------------------------------------------
# dominant pole hypothesis and the theorem14 pipeline


@dataclass
class DominantPoleHypothesis:
    place: Place
    decomposition: DominantPole

    @property
    def simple(self):
        return self.decomposition.simple

    def to_dict(self, ctx):
        return {"place": str(self.place), "simple": self.simple,
                "decomposition": self.decomposition.to_dict(ctx)}


def dominant_pole_hypothesis(g: ExpSumForm, places) -> DominantPoleHypothesis | None:
    """First place (in the given order) where g has a unique pole of maximal
    absolute value; None when there is none."""
    for v in places:
        try:
            return DominantPoleHypothesis(v, dominant_pole_decompose(g, v))
        except NoDominantPole:
            continue
    return None


@dataclass
class Theorem14Report:
    hypothesis: DominantPoleHypothesis | None
    l: int
    criterion: CriterionReport | None
    ctx: FieldCtx

    def to_dict(self):
        return {
            "hypothesis": None if self.hypothesis is None else self.hypothesis.to_dict(self.ctx),
            "l": self.l,
            "criterion": None if self.criterion is None else self.criterion.to_dict(),
        }


def theorem14_check(f: PowerSeries, g: ExpSumForm, places, r: int = 1, ladder=None,
                    place_bound: int = 200, L: int = 1, l: int = 1) -> Theorem14Report:
    """Dominant-pole hypothesis for g, then the criterion on
    p^l(t d/dt) h(beta t), h = f / g coefficientwise."""
    if l < 0:
        raise ValueError("l must be >= 0")
    hyp = dominant_pole_hypothesis(g, places)
    if hyp is None:
        return Theorem14Report(None, l, None, f.ctx)
    dec = hyp.decomposition
    h = hadamard_quotient(f, expsum_to_rational(g))
    pl = [f.ctx.one]
    for _ in range(l):
        pl = _poly_mul(pl, list(dec.p), f.ctx.zero)
    transformed = diff_op(pl, scale(dec.beta, h))
    rep = criterion_run(transformed, r, ladder, place_bound, L)
    return Theorem14Report(hyp, l, rep, f.ctx)


def _poly_mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


# ---------------------------------------------------------------------------
# theorem17: quotients by simple-pole denominators


@dataclass
class Theorem17Report:
    d: int
    d_is_upper_bound: bool
    delta_hat: DensityEstimate
    radii_sum: float
    height_estimate: float | None
    part: str  # "i" | "ii"
    threshold: float
    hypothesis_satisfied: bool
    criterion: CriterionReport
    constant: float

    def to_dict(self):
        return {
            "part": self.part,
            "d": self.d,
            "d_is_upper_bound": self.d_is_upper_bound,
            "delta_hat": self.delta_hat.to_dict(),
            "radii_sum": self.radii_sum,
            "height_estimate": self.height_estimate,
            "constant": self.constant,
            "threshold": self.threshold,
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "criterion": self.criterion.to_dict(),
        }


def _irreducible_over_k(rel: BivariateRelation, ctx: FieldCtx) -> bool:
    """Full factorization over Q; over F_q(x) only a content check in t."""
    if ctx.is_rationals:
        t, y = sympy.symbols("t y")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** i * y ** j
                   for j, p in enumerate(rel.coeffs) for i, c in enumerate(p) if c)
        _, factors = sympy.factor_list(expr, t, y)
        nontrivial = [(fac, m) for fac, m in factors if sympy.Poly(fac, t, y).total_degree() > 0]
        return len(nontrivial) == 1 and nontrivial[0][1] == 1
    g = None
    for p in rel.coeffs:
        if any(p):
            g = list(p) if g is None else _kpoly_gcd(g, list(p), ctx)
    return len(g) <= 1


def _kpoly_gcd(a, b, ctx):
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        while len(a) >= len(b):
            c = a[-1] / b[-1]
            s = len(a) - len(b)
            a = trim([x - c * b[i - s] if i >= s else x for i, x in enumerate(a)])
            if not a:
                break
        a, b = b, a
    return a


def theorem17_check(f_rel: BivariateRelation, f: PowerSeries, g: ExpSumForm, place_bound: int = 200,
                    ladder=None, L: int = 1, part: str = "i", density_bound: int = 10 ** 5,
                    coeff_window: int | None = None, constant: float = 12.0) -> Theorem17Report:
    """Hypotheses of the theorem17 check for h = f / g (coefficientwise), plus the
    criterion on h with r = d (part i) or r = 1 (part ii, f rational)."""
    if part not in ("i", "ii"):
        raise ValueError("part must be 'i' or 'ii'")
    if not g.is_simple:
        raise NonSimplePoles("g must have simple poles")
    ctx = f.ctx
    d = f_rel.deg_t
    if d < 1:
        raise ValueError("relation must involve t")
    r = d if part == "i" else 1
    ladder = _check_ladder(default_ladder(r) if ladder is None else ladder)
    check_relation(f_rel, f, max(max(ladder) + 1, 4 * (d + 1) * (f_rel.deg_y + 1)))
    upper = not _irreducible_over_k(f_rel, ctx)

    delta = split_unit_density(g, ctx, density_bound)
    h = hadamard_quotient(f, expsum_to_rational(g))
    window = max(ladder) if coeff_window is None else coeff_window
    radii = radius_profile(h, place_bound, window).total
    height_est = None
    if part == "i":
        threshold = delta.ratio / (constant * d ** 4)
        ok = le(radii, threshold)
    else:
        if not isinstance(f.expr, RationalFn):
            raise ValueError("part (ii) needs a rational f")
        threshold = delta.ratio / constant
        height_est = series_height(h, ladder).extrapolated
        ok = height_est < threshold - SAFETY
    rep = criterion_run(h, r, ladder, place_bound, L)
    return Theorem17Report(d, upper, delta, radii, height_est, part, threshold, ok, rep, constant)
