"""Small exact linear algebra: Smith normal form over Z and elimination over GF(2).

GF(2) vectors are Python ints used as bitsets (bit j = column j).
"""

from __future__ import annotations


# ---------------------------------------------------------------------------
# GF(2)


def gf2_rank(rows):
    work = [r for r in rows if r]
    rank = 0
    while work:
        pivot = work.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
        work = [r for r in work if r]
    return rank


def gf2_solve(rows, rhs, ncols):
    """Solve A x = b over GF(2).

    rows: list of int bitmasks (row i of A), rhs: list of bits.
    Pivots are taken in column order; free variables are set to 0.
    Returns a list of ncols bits, or None if the system is inconsistent.
    """
    aug = [(r, b & 1) for r, b in zip(rows, rhs)]
    pivots = []
    row_idx = 0
    for col in range(ncols):
        bit = 1 << col
        piv = next((i for i in range(row_idx, len(aug)) if aug[i][0] & bit), None)
        if piv is None:
            continue
        aug[row_idx], aug[piv] = aug[piv], aug[row_idx]
        pr, pb = aug[row_idx]
        for i in range(len(aug)):
            if i != row_idx and aug[i][0] & bit:
                aug[i] = (aug[i][0] ^ pr, aug[i][1] ^ pb)
        pivots.append(col)
        row_idx += 1
    for r, b in aug[row_idx:]:
        if b and not r:
            return None
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][1]
    return x


def gf2_matvec(rows, x):
    xv = sum(bit << j for j, bit in enumerate(x))
    return [bin(r & xv).count("1") & 1 for r in rows]


def bits_to_int(bits):
    return sum((b & 1) << j for j, b in enumerate(bits))


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return (D, U, V) with U*A*V = D diagonal, U, V unimodular.

    A is a list of rows (m x n).  Diagonal entries are nonnegative and each
    divides the next.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility condition
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return D, U, V


def mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def integer_kernel(A):
    """Z-basis (list of vectors) of {x in Z^n : A x = 0} for an m x n matrix A."""
    if not A:
        return []
    n = len(A[0])
    D, U, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[r][c] for r in range(n)] for c in range(rank, n)]


def row_basis(vectors, n):
    """Z-basis (echelon form) of the lattice spanned by integer vectors of length n."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        dead = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    dead.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = dead
        col += 1
    return basis
