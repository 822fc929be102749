"""Weil heights, Bombieri series heights, radii of convergence and the
A-analyticity audit.

Asymptotic quantities (limsup / liminf) are only ever estimated on a finite
window; every result records the window it was computed on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import finite_fields as ff
from .errors import AllZero
from .fields import FieldCtx, Place, enumerate_places, log_abs, nonzero_orders
from .series import PowerSeries, power_prefixes


def _primitive_q(coords):
    d = math.lcm(*(Fraction(c).denominator for c in coords))
    ints = [Fraction(c).numerator * (d // Fraction(c).denominator) for c in coords]
    g = math.gcd(*ints)
    return [n // g for n in ints]


def _primitive_ff(F, coords):
    den = [1]
    for c in coords:
        if c:
            den = ff.monic(F, ff.poly_divmod(F, ff.poly_mul(F, den, list(c.den)), ff.poly_gcd(F, den, list(c.den)))[0])
    polys = [ff.poly_divmod(F, ff.poly_mul(F, list(c.num), den), list(c.den))[0] if c else [] for c in coords]
    g = []
    for p in polys:
        g = ff.poly_gcd(F, g, p) if g else ff.monic(F, p)
    return [ff.poly_divmod(F, p, g)[0] for p in polys]


def weil_height(ctx: FieldCtx, coords) -> float:
    """Height of the projective point (x_0 : ... : x_n) over ctx.

    Computed from the primitive integral representative: log max |n_j| over Q,
    (max deg) * log q over F_q(x).
    """
    coords = [ctx.coerce(c) for c in coords]
    if not any(coords):
        raise AllZero("every coordinate is zero")
    if ctx.is_rationals:
        ints = _primitive_q([c for c in coords])
        return math.log(max(abs(n) for n in ints))
    polys = _primitive_ff(ctx.F, coords)
    return max(len(p) - 1 for p in polys) * math.log(ctx.q)


def height(ctx: FieldCtx, a) -> float:
    """h_K(a) := h_K(1 : a)."""
    return weil_height(ctx, [ctx.one, a])


@dataclass
class HeightEstimate:
    samples: list  # [(N, value)], value = height / N
    extrapolated: float
    window: int

    def to_dict(self):
        return {
            "samples": [{"N": n, "value": v} for n, v in self.samples],
            "extrapolated": self.extrapolated,
            "window": self.window,
        }


def _estimate(samples, window):
    window = max(1, min(window, len(samples)))
    tail = [v for _, v in samples[-window:]]
    return HeightEstimate(samples, sum(tail) / len(tail), window)


def truncation_heights(f: PowerSeries, r: int, orders) -> list:
    """(n, h_K(1, f_{/n}, ..., (f^r)_{/n})) for each n in orders."""
    orders = list(orders)
    if r < 1:
        raise ValueError("r must be >= 1")
    if any(b <= a for a, b in zip(orders, orders[1:])) or not orders or orders[0] < 1:
        raise ValueError("orders must be positive and strictly increasing")
    ctx = f.ctx
    pw = power_prefixes(f, r, orders[-1] + 1)
    out = []
    for n in orders:
        coords = [ctx.one]
        for j in range(1, r + 1):
            coords.extend(pw[j][: n + 1])
        out.append((n, weil_height(ctx, coords)))
    return out


def truncation_height_curve(f: PowerSeries, r: int, orders, window: int = 3) -> HeightEstimate:
    samples = [(n, h / n) for n, h in truncation_heights(f, r, orders)]
    return _estimate(samples, window)


def series_height(f: PowerSeries, orders, window: int = 3) -> HeightEstimate:
    """Bombieri height proxy: h_K(f_{/N}) / N on the given orders."""
    ctx = f.ctx
    orders = list(orders)
    coeffs = f.coeffs(orders[-1] + 1)
    samples = []
    for n in orders:
        prefix = coeffs[: n + 1]
        h = weil_height(ctx, prefix) if any(prefix) else 0.0
        samples.append((n, h / n))
    return _estimate(samples, window)


# ---------------------------------------------------------------------------
# radii


@dataclass
class RadiusProfile:
    per_place: dict  # Place -> estimate of log+ R_v^{-1}
    total: float
    audited_bound: int
    window: tuple  # (first n, last n) scanned

    def to_dict(self):
        return {
            "per_place": [{"place": str(p), "log_inv_radius": v} for p, v in self.per_place.items()],
            "total": self.total,
            "audited_bound": self.audited_bound,
            "window": list(self.window),
        }


def _audited_places(ctx, bound, archimedean=True):
    places = enumerate_places(ctx, bound)
    if not archimedean:
        places = [p for p in places if not p.is_archimedean]
    return places


def radius_profile(f: PowerSeries, place_bound: int, coeff_window: int) -> RadiusProfile:
    """Per-place estimate of log+ R_v^{-1}: max over n in the upper half of the
    window [coeff_window // 2, coeff_window] of (1/n) log+ |a_n|_v."""
    ctx = f.ctx
    lo, hi = max(1, coeff_window // 2), coeff_window
    places = _audited_places(ctx, place_bound)
    best = {p: 0.0 for p in places}
    coeffs = f.coeffs(hi + 1)
    for n in range(lo, hi + 1):
        a = coeffs[n]
        if not a:
            continue
        if ctx.is_rationals:
            v = log_abs(Place.archimedean(), a) / n
            if v > best[Place.archimedean()]:
                best[Place.archimedean()] = v
        for place, k in nonzero_orders(ctx, a, place_bound).items():
            if k < 0:
                v = -k * place.residue_log_card / n
                if v > best[place]:
                    best[place] = v
    total = sum(best.values())
    return RadiusProfile(best, total, place_bound, (lo, hi))


@dataclass
class AnalyticityAudit:
    per_place: dict  # Place -> log r_v^{-1} (math.inf when no r_v > 0 works)
    divergence_sum: float
    threshold: float
    verdict: str  # "plausible" | "refuted-at-bound"
    audited_bound: int
    window: int

    def radius(self, place):
        return math.exp(-self.per_place[place])

    def to_dict(self):
        return {
            "per_place": [
                {"place": str(p), "log_inv_r": v, "r": math.exp(-v)} for p, v in self.per_place.items()
            ],
            "divergence_sum": self.divergence_sum,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "audited_bound": self.audited_bound,
            "window": self.window,
        }


def a_analyticity_audit(f: PowerSeries, place_bound: int, coeff_window: int,
                        threshold: float = 3.0) -> AnalyticityAudit:
    """Largest r_v <= 1 compatible with |a_n|_v <= r_v^{-(n-1)} on the window,
    at every finite place up to place_bound.

    The constant term is ignored (the audit concerns f - f(0)); |a_1|_v > 1
    rules out every r_v > 0.
    """
    ctx = f.ctx
    places = _audited_places(ctx, place_bound, archimedean=False)
    best = {p: 0.0 for p in places}
    coeffs = f.coeffs(coeff_window + 1)
    for n in range(1, coeff_window + 1):
        a = coeffs[n]
        if not a:
            continue
        for place, k in nonzero_orders(ctx, a, place_bound).items():
            if k >= 0:
                continue
            if n == 1:
                best[place] = math.inf
                continue
            v = -k * place.residue_log_card / (n - 1)
            if v > best[place]:
                best[place] = v
    total = sum(best.values())
    verdict = "refuted-at-bound" if total > threshold else "plausible"
    return AnalyticityAudit(best, total, threshold, verdict, place_bound, coeff_window)
