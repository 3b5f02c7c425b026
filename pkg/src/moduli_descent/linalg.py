"""Dense exact linear algebra over Q and over Q(zeta_m).

Matrices are plain lists of rows.  Entries only need field operations, so the
same routines serve ``Fraction`` matrices and ``CyclotomicNumber`` matrices.
"""

from fractions import Fraction
from itertools import permutations


def matmul(a, b):
    n, k, p = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise ValueError("shape mismatch in matmul")
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def det(a):
    """Determinant by Gaussian elimination with exact division."""
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    rows = [list(r) for r in a]
    sign = 1
    result = None
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return rows[0][0] * 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        p = rows[col][col]
        result = p if result is None else result * p
        inv = Fraction(1) / p if isinstance(p, (int, Fraction)) else p.inverse()
        for r in range(col + 1, n):
            f = rows[r][col]
            if f:
                f = f * inv
                for c in range(col, n):
                    rows[r][c] = rows[r][c] - f * rows[col][c]
    return result if sign == 1 else -result


def det_leibniz(a, one):
    """Determinant by the permutation expansion; works over any commutative ring."""
    n = len(a)
    total = None
    for perm in permutations(range(n)):
        term = one
        for i, j in enumerate(perm):
            term = term * a[i][j]
        if _parity(perm):
            term = -term
        total = term if total is None else total + term
    return total


def _parity(perm):
    seen = [False] * len(perm)
    odd = 0
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            odd ^= (length - 1) & 1
    return odd


def minor(a, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]


def adjugate(a, one):
    """Classical adjoint: adj(a) * a = det(a) * I."""
    n = len(a)
    if n == 1:
        return [[one]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = det_leibniz(minor(a, i, j), one) if n <= 4 else det(minor(a, i, j))
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return out


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return mat, []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows, ncols):
    """Basis of {x in Q^ncols : rows * x = 0}, one vector per free column."""
    mat, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(mat, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
