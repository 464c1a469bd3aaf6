"""Exact Gaussian elimination over Q(i)."""

from __future__ import annotations

from collections.abc import Sequence

from sugra_bv_verifier.errors import NonInvertibleError
from sugra_bv_verifier.exact_scalars import ONE, ZERO, GaussianRational, Number

type Matrix = list[list[GaussianRational]]


def as_matrix(rows: Sequence[Sequence[Number]]) -> Matrix:
    """Copy a nested sequence into a fresh matrix of GaussianRationals."""
    return [[GaussianRational.coerce(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    """Return the n x n identity matrix."""
    return [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]


def zeros(n_rows: int, n_cols: int) -> Matrix:
    """Return an n_rows x n_cols zero matrix."""
    return [[ZERO] * n_cols for _ in range(n_rows)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product ``a @ b``."""
    n_inner = len(b)
    n_cols = len(b[0]) if b else 0
    out = zeros(len(a), n_cols)
    for r, row in enumerate(a):
        target = out[r]
        for k in range(n_inner):
            x = row[k]
            if x.is_zero():
                continue
            for c, y in enumerate(b[k]):
                if not y.is_zero():
                    target[c] = target[c] + x * y
    return out


def matvec(a: Matrix, v: Sequence[GaussianRational]) -> list[GaussianRational]:
    """Matrix-vector product."""
    out = []
    for row in a:
        total = ZERO
        for x, y in zip(row, v, strict=True):
            if not x.is_zero() and not y.is_zero():
                total = total + x * y
        out.append(total)
    return out


def transpose(a: Matrix) -> Matrix:
    """Return the transpose."""
    return [list(col) for col in zip(*a, strict=True)] if a else []


def row_echelon(m: Matrix, t: Matrix | None = None) -> list[int]:
    """Reduce ``m`` in place to row echelon form, applying the same row operations to ``t``.

    Args:
        m: Matrix to reduce; modified in place.
        t: Optional right-hand-side matrix with the same number of rows; modified in place.

    Returns:
        Column indices without a pivot (free variables).
    """
    free_vars: list[int] = []
    n_rows = len(m)
    if n_rows == 0:
        return free_vars
    n_cols = len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            free_vars.append(piv_c)
            continue
        for i_row in range(piv_r, n_rows):
            if not m[i_row][piv_c].is_zero():
                break
        else:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        inv_pivot = m[piv_r][piv_c].inverse()
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if fr.is_zero():
                continue
            frp = fr * inv_pivot
            pivot_row = m[piv_r]
            row = m[r]
            for c in range(piv_c, n_cols):
                if not pivot_row[c].is_zero():
                    row[c] = row[c] - pivot_row[c] * frp
            if t is not None:
                t_row = t[r]
                for c, x in enumerate(t[piv_r]):
                    if not x.is_zero():
                        t_row[c] = t_row[c] - x * frp
        piv_r += 1
    return free_vars


def rank(m: Matrix) -> int:
    """Exact rank of a matrix."""
    if not m or not m[0]:
        return 0
    work = [list(row) for row in m]
    free_vars = row_echelon(work)
    return len(m[0]) - len(free_vars)


def nullspace(m: Matrix) -> Matrix:
    """Basis of the right null space, one vector per free variable.

    Args:
        m: Matrix of shape (rows, cols).

    Returns:
        List of column vectors ``v`` with ``m v = 0``; each has a 1 at its free variable.
    """
    if not m:
        return []
    n_cols = len(m[0])
    work = [list(row) for row in m]
    free_vars = row_echelon(work)
    pivots = [c for c in range(n_cols) if c not in set(free_vars)]
    basis: Matrix = []
    for free in free_vars:
        sol = [ZERO] * n_cols
        sol[free] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            piv_c = pivots[r]
            s = ZERO
            for c in range(piv_c + 1, n_cols):
                if not work[r][c].is_zero() and not sol[c].is_zero():
                    s = s + work[r][c] * sol[c]
            sol[piv_c] = -s / work[r][piv_c]
        basis.append(sol)
    return basis


def solve(m: Matrix, rhs: Matrix) -> Matrix:
    """Solve ``m X = rhs`` for square invertible ``m``.

    Args:
        m: Square matrix.
        rhs: Right-hand sides as columns of a matrix with ``len(m)`` rows.

    Returns:
        The unique solution matrix.

    Raises:
        NonInvertibleError: If ``m`` is singular.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        msg = f"Expected a square matrix with {n} columns"
        raise NonInvertibleError(msg)
    work = [list(row) for row in m]
    t = [list(row) for row in rhs]
    free_vars = row_echelon(work, t)
    if free_vars:
        msg = f"Matrix of size {n} is singular (rank {n - len(free_vars)})"
        raise NonInvertibleError(msg)
    n_rhs = len(t[0]) if t else 0
    out = zeros(n, n_rhs)
    for k in range(n_rhs):
        for r in range(n - 1, -1, -1):
            s = t[r][k]
            for c in range(r + 1, n):
                if not work[r][c].is_zero():
                    s = s - work[r][c] * out[c][k]
            out[r][k] = s / work[r][r]
    return out


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix.

    Raises:
        NonInvertibleError: If ``m`` is singular.
    """
    return solve(m, identity(len(m)))


def determinant(m: Matrix) -> GaussianRational:
    """Exact determinant by elimination."""
    n = len(m)
    work = [list(row) for row in m]
    det = ONE
    for c in range(n):
        pivot = next((r for r in range(c, n) if not work[r][c].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        det = det * work[c][c]
        inv_pivot = work[c][c].inverse()
        for r in range(c + 1, n):
            f = work[r][c]
            if f.is_zero():
                continue
            f = f * inv_pivot
            for k in range(c, n):
                work[r][k] = work[r][k] - work[c][k] * f
    return det
