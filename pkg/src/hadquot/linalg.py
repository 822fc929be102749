"""Exact Gaussian elimination.

``rref`` / ``nullspace`` / ``solve`` work over any field whose elements support
the arithmetic operators (``Fraction``, ``RatFunc``).  The ``*_mod`` variants
work over a ``FiniteField`` with integer-encoded elements.
"""

from __future__ import annotations


def rref(rows, ncols):
    """Reduced row echelon form. Returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    i = 0
    for j in range(ncols):
        if i == len(m):
            break
        k = next((k for k in range(i, len(m)) if m[k][j]), None)
        if k is None:
            continue
        m[i], m[k] = m[k], m[i]
        inv = 1 / m[i][j]
        row = [x * inv if x else x for x in m[i]]
        m[i] = row
        for k in range(len(m)):
            c = m[k][j]
            if k != i and c:
                m[k] = [a - c * b if b else a for a, b in zip(m[k], row)]
        pivots.append(j)
        i += 1
    return m[:i], pivots


def _kernel_from_rref(m, pivots, ncols, zero, one, neg):
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = one
        for row, pcol in zip(m, pivots):
            if row[fcol]:
                v[pcol] = neg(row[fcol])
        basis.append(v)
    return basis


def nullspace(rows, ncols, one):
    """Echelon-form basis of the right kernel: one vector per free column,
    with 1 at that column and 0 at the other free columns."""
    zero = one - one
    if not rows:
        m, pivots = [], []
    else:
        m, pivots = rref(rows, ncols)
    return _kernel_from_rref(m, pivots, ncols, zero, one, lambda x: -x)


def solve(A, b):
    """Unique solution of the square nonsingular system A x = b."""
    n = len(A)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    m, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [row[n] for row in m]


# ---------------------------------------------------------------------------
# finite fields


def rref_mod(rows, ncols, F):
    if F.is_prime:
        return _rref_prime(rows, ncols, F.p)
    m = [list(r) for r in rows]
    pivots = []
    i = 0
    for j in range(ncols):
        if i == len(m):
            break
        k = next((k for k in range(i, len(m)) if m[k][j]), None)
        if k is None:
            continue
        m[i], m[k] = m[k], m[i]
        inv = F.inv(m[i][j])
        row = [F.mul(x, inv) for x in m[i]]
        m[i] = row
        for k in range(len(m)):
            c = m[k][j]
            if k != i and c:
                m[k] = [F.sub(a, F.mul(c, b)) for a, b in zip(m[k], row)]
        pivots.append(j)
        i += 1
    return m[:i], pivots


def _rref_prime(rows, ncols, p):
    m = [[x % p for x in r] for r in rows]
    pivots = []
    i = 0
    for j in range(ncols):
        if i == len(m):
            break
        k = next((k for k in range(i, len(m)) if m[k][j]), None)
        if k is None:
            continue
        m[i], m[k] = m[k], m[i]
        inv = pow(m[i][j], -1, p)
        row = [x * inv % p for x in m[i]]
        m[i] = row
        for k in range(len(m)):
            c = m[k][j]
            if k != i and c:
                m[k] = [(a - c * b) % p for a, b in zip(m[k], row)]
        pivots.append(j)
        i += 1
    return m[:i], pivots


def nullspace_mod(rows, ncols, F):
    if rows:
        m, pivots = rref_mod(rows, ncols, F)
    else:
        m, pivots = [], []
    return _kernel_from_rref(m, pivots, ncols, 0, 1, F.neg)
