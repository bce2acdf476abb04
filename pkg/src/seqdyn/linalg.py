"""Exact rational linear algebra: elimination, rank, spans, intersections.

Everything operates on lists of lists of Fraction and is deterministic:
pivots are always the leftmost nonzero column, rows are reduced fully, and
canonical bases come out of reduced row-echelon form.  No floating point
anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def _clone(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row-echelon form with the list of pivot columns (leftmost)."""
    m = _clone(rows)
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def solve_min_support(rows: Sequence[Sequence[Fraction]],
                      rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Solve A x = b choosing the leftmost-pivot solution with free vars = 0.

    Returns None when the system is inconsistent.  The zero free variables
    make the solution support exactly the pivot columns, which keeps
    constructed blocks minimal and reproducible.
    """
    if not rows:
        return []
    n_cols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for r, c in enumerate(pivots):
        x[c] = red[r][-1]
    return x


def span_basis(vectors: Sequence[Sequence[Fraction]]) -> Matrix:
    """Canonical basis (nonzero rref rows) of the span of the given vectors."""
    red, pivots = rref(vectors)
    return [red[i] for i in range(len(pivots))]


def span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    return rank(vectors)


def span_contains(basis: Matrix, vector: Sequence[Fraction]) -> bool:
    if not basis:
        return all(v == 0 for v in vector)
    return rank(list(basis) + [list(vector)]) == len(basis)


def span_intersection(gens_a: Sequence[Sequence[Fraction]],
                      gens_b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Canonical basis of span(gens_a) ∩ span(gens_b).

    Solves alpha·A = beta·B via the nullspace of the stacked transposed
    system and returns the canonicalized intersection vectors.
    """
    a = [list(v) for v in gens_a if any(x != 0 for x in v)]
    b = [list(v) for v in gens_b if any(x != 0 for x in v)]
    if not a or not b:
        return []
    d = len(a[0])
    # columns: alpha coefficients then beta coefficients
    system = [[(a[i][k] if i < len(a) else Fraction(0)) for i in range(len(a))] +
              [(-b[j][k] if j < len(b) else Fraction(0)) for j in range(len(b))]
              for k in range(d)]
    combos = nullspace(system)
    vectors = []
    for combo in combos:
        vec = [Fraction(0)] * d
        for i, coeff in enumerate(combo[:len(a)]):
            if coeff != 0:
                for k in range(d):
                    vec[k] += coeff * a[i][k]
        vectors.append(vec)
    return span_basis(vectors)


def nullspace(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    """Canonical nullspace basis (one vector per free column)."""
    if not rows:
        return []
    n_cols = len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis
