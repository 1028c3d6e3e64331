"""Exact Gaussian elimination over Q."""

from fractions import Fraction


def solve_linear(rows, rhs):
    """One solution of rows @ x == rhs (free variables set to 0), or None.

    ``rows`` is a list of equal-length lists of Fractions.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        if pv != 1:
            aug[row] = [v / pv for v in aug[row]]
        for i in range(m):
            if i != row and aug[i][col]:
                f = aug[i][col]
                ri = aug[i]
                rr = aug[row]
                for j in range(col, n + 1):
                    if rr[j]:
                        ri[j] -= f * rr[j]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return x
