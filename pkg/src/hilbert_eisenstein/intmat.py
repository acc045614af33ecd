"""Exact integer and rational matrix utilities: HNF, SNF, solvers, kernels.

All matrices are lists of rows.  Integer routines never leave Z; rational
routines use fractions.Fraction throughout.  Sizes here are tiny (the field
degree d is 1 or 2 in practice), so the classical O(n^3)-ish algorithms with
full-size intermediate entries are fine.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def hnf_rows(mat: list[list[int]], pivot_order: list[int] | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the row span of ``mat``.

    Returns the canonical basis (one row per pivot, pivots positive, entries
    above a pivot reduced into [0, pivot)).  ``pivot_order`` permutes the
    column elimination order; the default is left to right.
    """
    if not mat:
        return []
    ncols = len(mat[0])
    order = pivot_order if pivot_order is not None else list(range(ncols))
    h = [list(map(int, row)) for row in mat if any(row)]
    r = 0
    for c in order:
        if r >= len(h):
            break
        # clear column c below row r by gcd steps
        piv = None
        for i in range(r, len(h)):
            if h[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        for i in range(r + 1, len(h)):
            while h[i][c] != 0:
                q = h[i][c] // h[r][c]
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                if h[i][c] != 0:
                    h[r], h[i] = h[i], h[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
        r += 1
    h = [row for row in h if any(row)]
    return h


def hnf_rows_with_transform(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Return (H, U) with U unimodular and U @ mat == H (rows padded with zeros)."""
    n = len(mat)
    ncols = len(mat[0]) if mat else 0
    h = [list(map(int, row)) for row in mat]
    u = identity(n)
    r = 0
    for c in range(ncols):
        if r >= n:
            break
        piv = None
        for i in range(r, n):
            if h[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, n):
            while h[i][c] != 0:
                q = h[i][c] // h[r][c]
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                if h[i][c] != 0:
                    h[r], h[i] = h[i], h[r]
                    u[r], u[i] = u[i], u[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


def snf_with_transforms(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: returns (U, S, V) with U @ mat @ V == S diagonal,
    diagonal entries nonnegative and each dividing the next."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    m = len(a[0]) if a else 0
    u = identity(n)
    v = identity(m)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(n, m):
        # find nonzero pivot
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            moved = False
            for i in range(t + 1, n):
                while a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    addmul_row(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                    moved = True
            for j in range(t + 1, m):
                while a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    addmul_col(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                    moved = True
            if not moved:
                break
        # enforce divisibility a[t][t] | a[i][j]
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % a[t][t] != 0:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            addmul_row(t, bad, -1)  # row_t += row_bad; column pass then shrinks the pivot
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def solve_integer(mat: list[list[int]], target: list[int]) -> list[int] | None:
    """Solve mat @ x == target over the integers; None if unsolvable."""
    uu, s, vv = snf_with_transforms(mat)
    b = mat_vec(uu, target)
    n, m = len(mat), len(mat[0])
    y = [0] * m
    for i in range(n):
        d = s[i][i] if i < min(n, m) else 0
        if d == 0:
            if b[i] != 0:
                return None
        else:
            if b[i] % d != 0:
                return None
            y[i] = b[i] // d
    for i in range(min(n, m), n):
        if b[i] != 0:
            return None
    return mat_vec(vv, y)


def kernel_integer(mat: list[list[int]]) -> list[list[int]]:
    """Basis (as rows) of the integer kernel {x : mat @ x == 0}."""
    uu, s, vv = snf_with_transforms(mat)
    n, m = len(mat), len(mat[0])
    basis = []
    for j in range(m):
        d = s[j][j] if j < min(n, m) else 0
        if d == 0:
            basis.append([vv[i][j] for i in range(m)])
    return basis


def det_fraction(mat) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination over Q."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def rat_inv(mat) -> list[list[Fraction]]:
    """Inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def rat_solve(mat, target) -> list[Fraction]:
    """Solve a square rational system mat @ x == target exactly."""
    inv = rat_inv(mat)
    return [sum(inv[i][j] * Fraction(target[j]) for j in range(len(target)))
            for i in range(len(target))]


def clear_denominators(mat) -> tuple[list[list[int]], int]:
    """Write a rational matrix as (integer matrix) / scale."""
    denoms = [Fraction(x).denominator for row in mat for x in row] or [1]
    scale = lcm(*denoms) if len(denoms) > 1 else denoms[0]
    out = [[int(Fraction(x) * scale) for x in row] for row in mat]
    return out, scale


def content(mat) -> int:
    g = 0
    for row in mat:
        for x in row:
            g = gcd(g, int(x))
    return g
