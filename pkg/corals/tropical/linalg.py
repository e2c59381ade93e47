"""
Exact linear algebra over Q.

Gauss-Jordan elimination on Fraction matrices with any number of right-hand
side columns carried along. Pivoting follows the tableau style: pick the first
nonzero entry in the column, normalise the row, clear the column.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple:
    """Row reduce on the first `ncols` columns.

    Columns beyond `ncols` are treated as right-hand sides and transformed
    along with the rows but never pivoted on. Returns (reduced rows, pivot
    columns).
    """
    M = to_matrix(rows)
    pivots: List[int] = []
    r = 0
    for j in range(ncols):
        if r >= len(M):
            break
        i = next((i for i in range(r, len(M)) if M[i][j] != 0), None)
        if i is None:
            continue
        M[r], M[i] = M[i], M[r]
        piv = M[r][j]
        M[r] = [v / piv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][j] != 0:
                f = M[i][j]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(j)
        r += 1
    return M, pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


@dataclass
class AffineSolution:
    """Solution set of A x = b_c for several right-hand sides b_c.

    `particular[c]` solves the system for column c with all free variables at
    zero. `conditions` lists, for every zero row of the reduced matrix, the
    transformed right-hand side values; column c is consistent iff every
    condition has a zero in position c.
    """
    nvars: int
    pivots: List[int]
    particular: List[List[Fraction]]
    conditions: List[List[Fraction]] = field(default_factory=list)
    kernel: List[List[Fraction]] = field(default_factory=list)

    @property
    def nullity(self) -> int:
        return self.nvars - len(self.pivots)

    def consistent(self, column: int = 0) -> bool:
        return all(cond[column] == 0 for cond in self.conditions)


def solve(A: Sequence[Sequence], rhs: Sequence[Sequence], nvars: Optional[int] = None) -> AffineSolution:
    """Solve A x = rhs[c] for every column c of `rhs` (given as a list of columns)."""
    n = nvars if nvars is not None else (len(A[0]) if A else 0)
    rows = [list(row) + [col[i] for col in rhs] for i, row in enumerate(A)]
    M, pivots = rref(rows, n)
    ncols = len(rhs)

    particular = []
    for c in range(ncols):
        x = [Fraction(0)] * n
        for r, j in enumerate(pivots):
            x[j] = M[r][n + c]
        particular.append(x)

    conditions = [M[r][n:] for r in range(len(pivots), len(M))]
    conditions = [cond for cond in conditions if any(v != 0 for v in cond)]

    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, j in enumerate(pivots):
            v[j] = -M[r][f]
        kernel.append(v)

    return AffineSolution(nvars=n, pivots=pivots, particular=particular,
                          conditions=conditions, kernel=kernel)


def solve2(a11, a12, a21, a22, b1, b2) -> Optional[tuple]:
    """Cramer's rule for a 2x2 system; None when singular."""
    d = Fraction(a11) * a22 - Fraction(a12) * a21
    if d == 0:
        return None
    return (Fraction(b1) * a22 - Fraction(a12) * b2) / d, (Fraction(a11) * b2 - Fraction(b1) * a21) / d
