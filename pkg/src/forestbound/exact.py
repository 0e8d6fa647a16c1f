"""Exact linear algebra over the rationals.

Rank uses fraction-free (Bareiss) elimination on integer matrices; rational
inputs are first scaled row by row to integers, which preserves rank.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Number = int | Fraction


def to_integer_rows(rows: Sequence[Sequence[Number]]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        scale = lcm(1, *(x.denominator for x in fr))
        out.append([int(x * scale) for x in fr])
    return out


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination.

    All intermediate values stay integral: each update divides exactly by the
    previous pivot.
    """
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        piv = next((r for r in range(rank, n_rows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, n_rows):
            arc = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, n_cols):
                row_r[c] = (row_r[c] * p - arc * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
    return rank


def rank(rows: Sequence[Sequence[Number]]) -> int:
    return bareiss_rank(to_integer_rows(rows))


def rref(rows: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    n_rows, n_cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(rows: Sequence[Sequence[Number]], n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``, one vector per free column."""
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    red, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def nullity(rows: Sequence[Sequence[Number]], n_cols: int | None = None) -> int:
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    return n_cols - rank(rows)


def transpose(rows: Sequence[Sequence[Number]]) -> list[list[Number]]:
    return [list(c) for c in zip(*rows)]


def matvec(rows: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Number]:
    return [sum(a * b for a, b in zip(r, v)) for r in rows]
