"""Brute-force oracles, kept independent of the library's lazy paths.

Everything here works on dense lists of Fractions built by explicitly
truncating operators, so tests can cross-check the sparse/lazy machinery
against plain matrix arithmetic.
"""

from fractions import Fraction


def dense_truncation(op, n_rows, n_cols, row_lo=0, col_lo=0):
    """Explicit (n_rows x n_cols) block of the operator matrix."""
    out = []
    for i in range(row_lo, row_lo + n_rows):
        row = op.row(i)
        out.append([row[j] for j in range(col_lo, col_lo + n_cols)])
    return out


def mat_mult(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            if a[i][k] == 0:
                continue
            for j in range(p):
                out[i][j] += a[i][k] * b[k][j]
    return out


def mat_power(a, k):
    out = a
    for _ in range(k - 1):
        out = mat_mult(out, a)
    return out


def brute_rank(matrix):
    """Row-echelon rank, written forward-elimination style (no rref)."""
    m = [list(row) for row in matrix]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    col = 0
    while rank < rows and col < cols:
        pivot = None
        for i in range(rank, rows):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(rank + 1, rows):
            if m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def row_support_end(dense_row):
    """Smallest c with the row zero from column c on (0 for a zero row)."""
    last = -1
    for j, v in enumerate(dense_row):
        if v != 0:
            last = j
    return last + 1
