"""Slow, independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""

import itertools
import math
from fractions import Fraction

import sympy


def weil_height_q(coords):
    """-sum_p min_j ord_p(x_j) log p + log max_j |x_j|, place by place."""
    xs = [Fraction(c) for c in coords if c]
    primes = set()
    for x in xs:
        primes |= set(sympy.factorint(x.numerator)) | set(sympy.factorint(x.denominator))
    primes.discard(1)
    primes.discard(-1)
    total = math.log(max(abs(x) for x in xs))
    for p in primes:
        total += -min(sympy.multiplicity(p, x.numerator) - sympy.multiplicity(p, x.denominator)
                      for x in xs) * math.log(p)
    return total


def catalan(n):
    c = [1]
    for k in range(n - 1):
        c.append(sum(c[i] * c[k - i] for i in range(k + 1)))
    return c


def log_lcm(n):
    return math.log(math.lcm(*range(1, n + 1)))


def primes(n):
    return list(sympy.primerange(2, n + 1))


def hasse_density(a, bound):
    """Weighted share of primes p <= bound with a^n + 1 != 0 mod p for all n."""
    num = den = 0.0
    for p in primes(bound):
        w = math.log(p)
        den += w
        if a % p == 0:
            ok = (1 + 1) % p != 0  # b_0 = 2, b_n = 1 for n >= 1
        else:
            ok = all((pow(a, n, p) + 1) % p for n in range(p - 1))
        num += w if ok else 0.0
    return num / den


def least_period(seq):
    n = len(seq)
    for d in range(1, n + 1):
        if all(seq[i] == seq[i % d] for i in range(n)):
            return d
    return n


def exhaustive_min_degree(fs, p, r, cap, margin):
    """Least H <= cap with some nonzero Phi over F_p of bidegree (H, r) and
    Phi(t, f_s) = 0 mod t^{(H+1)(r+1) + H r + margin}; None if none.
    Enumerates every coefficient vector, so only for tiny p, H, r."""
    for H in range(cap + 1):
        order = (H + 1) * (r + 1) + H * r + margin
        pw = [[1] + [0] * (order - 1)]
        for _ in range(r):
            prev = pw[-1]
            pw.append([sum(prev[i] * fs[k - i] for i in range(k + 1)) % p for k in range(order)])
        nvars = (H + 1) * (r + 1)
        for vec in itertools.product(range(p), repeat=nvars):
            if not any(vec):
                continue
            ok = True
            for k in range(order):
                s = 0
                for j in range(r + 1):
                    for i in range(min(H, k) + 1):
                        s += vec[j * (H + 1) + i] * pw[j][k - i]
                if s % p:
                    ok = False
                    break
            if ok:
                return H
    return None


def legendre(n, p):
    k, e = 0, p
    while e <= n:
        k += n // e
        e *= p
    return k


def monic_irreducible_count(q, d):
    return sum(sympy.mobius(d // e) * q ** e for e in sympy.divisors(d)) // d
