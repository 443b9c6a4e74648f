"""Exact Gaussian elimination over any domain from groundfields/exactfield.

Matrices are lists of lists of raw domain values. Nothing here pivots for
stability; arithmetic is exact, so the first nonzero entry is always a valid
pivot.
"""

from __future__ import annotations


def mat_copy(rows):
    return [list(r) for r in rows]


def identity(D, n):
    return [[D.one() if i == j else D.zero() for j in range(n)] for i in range(n)]


def mat_mul(D, a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[D.zero()] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if D.is_zero(x):
                continue
            bt = b[t]
            row = out[i]
            for j in range(m):
                row[j] = D.add(row[j], D.mul(x, bt[j]))
    return out


def mat_vec(D, a, v):
    return [
        _dot(D, row, v)
        for row in a
    ]


def _dot(D, r, v):
    acc = D.zero()
    for x, y in zip(r, v):
        acc = D.add(acc, D.mul(x, y))
    return acc


def row_echelon(D, rows):
    """In-place forward elimination; returns (rank, pivot column list)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if not D.is_zero(rows[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = D.inv(rows[r][c])
        rows[r] = [D.mul(x, inv) for x in rows[r]]
        for i in range(m):
            if i != r and not D.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [D.sub(x, D.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return r, pivots


def rank(D, rows) -> int:
    if not rows:
        return 0
    return row_echelon(D, mat_copy(rows))[0]


def det(D, rows):
    n = len(rows)
    a = mat_copy(rows)
    result = D.one()
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if not D.is_zero(a[i][c]):
                pivot = i
                break
        if pivot is None:
            return D.zero()
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = D.neg(result)
        result = D.mul(result, a[c][c])
        inv = D.inv(a[c][c])
        for i in range(c + 1, n):
            if D.is_zero(a[i][c]):
                continue
            f = D.mul(a[i][c], inv)
            a[i] = [D.sub(x, D.mul(f, y)) for x, y in zip(a[i], a[c])]
    return result


def inverse(D, rows):
    n = len(rows)
    a = [list(r) + list(e) for r, e in zip(mat_copy(rows), identity(D, n))]
    r, pivots = row_echelon(D, a)
    if r < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in a]


def nullspace(D, rows):
    """Basis of the right kernel, deterministic order (free columns ascending)."""
    if not rows:
        return []
    n = len(rows[0])
    a = mat_copy(rows)
    _, pivots = row_echelon(D, a)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [D.zero()] * n
        v[free] = D.one()
        for r, c in enumerate(pivots):
            v[c] = D.neg(a[r][free])
        basis.append(v)
    return basis


def solve(D, rows, rhs):
    """One solution of rows * x = rhs, or None if inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    _, pivots = row_echelon(D, a)
    for i in range(m):
        if all(D.is_zero(x) for x in a[i][:n]) and not D.is_zero(a[i][n]):
            return None
    x = [D.zero()] * n
    for r, c in enumerate(pivots):
        x[c] = a[r][n]
    return x
