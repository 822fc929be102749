"""Finite fields with integer-encoded elements and dense polynomials over them.

A field element is a plain ``int``.  For the prime field F_p it is the residue
in ``range(p)``.  For an extension E = B[z]/(m) the element
``c_0 + c_1 z + ... + c_{d-1} z^{d-1}`` is encoded as ``sum c_i * |B|**i``, so
the prime subfield always sits at ``range(p)`` and 0, 1 are the usual 0, 1.

Polynomials are lists of elements, lowest degree first, with no trailing zeros
(the zero polynomial is ``[]``).
"""

from __future__ import annotations

import random
from functools import lru_cache

from sympy import factorint

_TABLE_LIMIT = 1 << 16


class FiniteField:
    def __init__(self, p: int, base: FiniteField | None = None, modulus=None):
        self.p = p
        self.base = base
        if base is None:
            self.modulus = None
            self.degree = 1
            self.order = p
        else:
            self.modulus = tuple(modulus)
            self.degree = len(self.modulus) - 1
            if self.modulus[-1] != 1 or self.degree < 1:
                raise ValueError("modulus must be monic of positive degree")
            self.order = base.order ** self.degree
        self._exp = self._log = self._digits = None
        if base is not None and self.order <= _TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.order}; {self.base!r}[z]/{list(self.modulus)})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.base == other.base and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.base, self.modulus))

    @property
    def is_prime(self):
        return self.base is None

    # -- encoding --------------------------------------------------------

    def digits(self, a):
        if self._digits is not None:
            return self._digits[a]
        b = self.base.order
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, b)
            out.append(r)
        return out

    def encode(self, digits):
        b = self.base.order
        a = 0
        for c in reversed(list(digits)):
            a = a * b + c
        return a

    # -- arithmetic ------------------------------------------------------

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        if self.base is None:
            s = a + b
            return s - self.p if s >= self.p else s
        B = self.base
        return self.encode([B.add(x, y) for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.base is None:
            return (-a) % self.p
        B = self.base
        return self.encode([B.neg(x) for x in self.digits(a)])

    def sub(self, a, b):
        if self.base is None:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._slow_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.base is None:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if self.base is None:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 0 if e else 1
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.order - 1)]
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def pth_root(self, a):
        # Frobenius is bijective; its inverse is a -> a^(q/p).
        return self.pow(a, self.order // self.p)

    def elements(self):
        return range(self.order)

    def extension(self, modulus) -> FiniteField:
        return FiniteField(self.p, self, modulus)

    # -- internals -------------------------------------------------------

    def _slow_mul(self, a, b):
        B = self.base
        prod = poly_mul(B, trim(B, self.digits(a)), trim(B, self.digits(b)))
        rem = poly_mod(B, prod, list(self.modulus))
        rem = rem + [0] * (self.degree - len(rem))
        return self.encode(rem)

    def _build_tables(self):
        n = self.order
        self._digits = [None] * n
        b = self.base.order
        for a in range(n):
            x, ds = a, []
            for _ in range(self.degree):
                x, r = divmod(x, b)
                ds.append(r)
            self._digits[a] = ds
        group = n - 1
        primes = list(factorint(group)) if group > 1 else []
        for g in range(2 if n > 2 else 1, n):
            if all(self._slow_pow(g, group // l) != 1 for l in primes):
                break
        else:
            raise ValueError("modulus is not irreducible: no generator found")
        exp = [0] * group
        log = [0] * n
        x = 1
        for k in range(group):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, g)
        if x != 1 or len(set(exp)) != group:
            raise ValueError("modulus is not irreducible")
        self._exp, self._log = exp, log

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    """The field with q elements (q a prime power), built over the prime field
    by the first monic irreducible in lexicographic order."""
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = fac.items()
    Fp = _prime_field(p)
    if k == 1:
        return Fp
    modulus = next(iter_monic_irreducibles(Fp, k))
    return Fp.extension(modulus)


@lru_cache(maxsize=None)
def _prime_field(p):
    return FiniteField(p)


# ---------------------------------------------------------------------------
# polynomials over a FiniteField


def trim(F, a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(F, out)


def poly_neg(F, a):
    return [F.neg(c) for c in a]


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F, c, a):
    if c == 0:
        return []
    return [F.mul(c, x) for x in a]


def poly_mul(F, a, b):
    if not a or not b:
        return []
    if F.is_prime:
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(F, [c % p for c in out])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(F, out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    if len(a) <= db:
        return [], trim(F, a)
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = F.mul(c, inv_lead)
        quot[k - db] = c
        for j, y in enumerate(b):
            a[k - db + j] = F.sub(a[k - db + j], F.mul(c, y))
    return trim(F, quot), trim(F, a[:db])


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def monic(F, a):
    if not a:
        return []
    return poly_scale(F, F.inv(a[-1]), a)


def poly_gcd(F, a, b):
    a, b = trim(F, a), trim(F, b)
    while b:
        a, b = b, poly_mod(F, a, b)
    return monic(F, a)


def poly_deriv(F, a):
    return trim(F, [F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:])


def poly_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_powmod(F, a, e, m):
    result = [1]
    a = poly_mod(F, a, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, a), m)
        a = poly_mod(F, poly_mul(F, a, a), m)
        e >>= 1
    return result


def is_irreducible(F, f) -> bool:
    """Rabin's test."""
    f = trim(F, f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    x = [0, 1]
    q = F.order
    for l in factorint(n):
        h = poly_powmod(F, x, q ** (n // l), f)
        if poly_gcd(F, poly_sub(F, h, x), f) != [1]:
            return False
    return poly_sub(F, poly_powmod(F, x, q ** n, f), x) == []


def iter_monic_polys(F, d):
    """Monic polynomials of degree d, ordered lexicographically by their
    coefficients read from the top down."""
    q = F.order
    for k in range(q ** d):
        # digit i of k is the coefficient of x^i; x^(d-1) is most significant
        coeffs = []
        for _ in range(d):
            k, r = divmod(k, q)
            coeffs.append(r)
        yield coeffs + [1]


def iter_monic_irreducibles(F, d):
    for f in iter_monic_polys(F, d):
        if is_irreducible(F, f):
            yield f


def factor(F, f):
    """Factor f into (lead, [(monic irreducible, multiplicity), ...]) with the
    factors sorted by (degree, coefficients from the top)."""
    f = trim(F, f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lead = f[-1]
    out = {}
    for g, m in _squarefree(F, monic(F, f)):
        for d, h in _ddf(F, g):
            for irr in _edf(F, h, d):
                key = tuple(irr)
                out[key] = out.get(key, 0) + m
    items = sorted(out.items(), key=lambda kv: (len(kv[0]), tuple(reversed(kv[0]))))
    return lead, [(list(k), m) for k, m in items]


def _squarefree(F, f):
    """Squarefree decomposition of a monic polynomial: pairs (g, m), g
    squarefree, with f = prod g^m."""
    if len(f) <= 1:
        return []
    out = []
    fp = poly_deriv(F, f)
    if not fp:
        # f is a p-th power
        root = [F.pth_root(c) for c in f[::F.p]]
        return [(g, m * F.p) for g, m in _squarefree(F, root)]
    c = poly_gcd(F, f, fp)
    w = poly_divmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = poly_divmod(F, c, y)[0]
    if len(c) > 1:
        root = [F.pth_root(x) for x in c[::F.p]]
        out.extend((g, m * F.p) for g, m in _squarefree(F, root))
    return out


def _ddf(F, f):
    out = []
    x = [0, 1]
    h = x
    d = 0
    q = F.order
    while 2 * (d + 1) <= len(f) - 1:
        d += 1
        h = poly_powmod(F, h, q, f)
        g = poly_gcd(F, poly_sub(F, h, x), f)
        if len(g) > 1:
            out.append((d, g))
            f = poly_divmod(F, f, g)[0]
            h = poly_mod(F, h, f) if len(f) > 1 else h
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _edf(F, f, d):
    n = len(f) - 1
    if n == d:
        return [monic(F, f)]
    rng = random.Random(hash((F.order, tuple(f))))
    q = F.order
    while True:
        a = trim(F, [rng.randrange(q) for _ in range(n)])
        if len(a) <= 1:
            continue
        if q % 2:
            b = poly_powmod(F, a, (q ** d - 1) // 2, f)
            b = poly_sub(F, b, [1])
        else:
            # absolute trace to F_2 of a over F_{q^d}
            k = (q ** d).bit_length() - 1
            b, t = [], a
            for _ in range(k):
                b = poly_add(F, b, t)
                t = poly_mod(F, poly_mul(F, t, t), f)
        g = poly_gcd(F, b, f)
        if 1 < len(g) < len(f):
            rest = poly_divmod(F, f, g)[0]
            return _edf(F, g, d) + _edf(F, rest, d)


def format_poly(F, a, var="x"):
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms)


def parse_poly(F, text, var="x"):
    text = text.replace(" ", "")
    if text == "0":
        return []
    coeffs = {}
    for term in text.split("+"):
        if not term:
            raise ValueError(f"bad polynomial {text!r}")
        if var in term:
            c, _, mono = term.rpartition(var)
            c = c.rstrip("*")
            c = int(c) if c else 1
            e = int(mono[1:]) if mono.startswith("^") else 1
            if mono and not mono.startswith("^"):
                raise ValueError(f"bad polynomial {text!r}")
        else:
            c, e = int(term), 0
        if not 0 <= c < F.order:
            raise ValueError(f"coefficient {c} out of range for {F!r}")
        coeffs[e] = F.add(coeffs.get(e, 0), c)
    n = max(coeffs) + 1
    return trim(F, [coeffs.get(i, 0) for i in range(n)])
