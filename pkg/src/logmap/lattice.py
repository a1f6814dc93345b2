"""Exact integer linear algebra on plain Python lists.

Matrices are lists of rows, vectors are tuples (or lists) of ``int``.
Everything is arbitrary precision; nothing here touches floating point.
"""

from math import gcd

__all__ = [
    "identity",
    "transpose",
    "matmul",
    "dot",
    "primitive",
    "determinant",
    "rank",
    "smith_normal_form",
    "hermite_normal_form",
    "solve_integer",
    "saturated_span",
]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B, inner=None):
    """Product of an ``m x k`` and a ``k x n`` matrix."""
    if not A:
        return []
    if not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def primitive(v):
    """Divide ``v`` by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def determinant(A):
    """Bareiss fraction-free determinant of a square matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            Mi = M[i]
            Mk = M[k]
            f = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pivot - f * Mk[j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def rank(rows):
    """Rank over Q via fraction-free elimination."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        p = pr[c]
        for i in range(r + 1, len(M)):
            f = M[i][c]
            if f:
                Mi = M[i]
                M[i] = [p * x - f * y for x, y in zip(Mi, pr)]
        r += 1
        if r == len(M):
            break
    return r


def _min_abs_position(D, t, m, n):
    best = None
    pos = None
    for i in range(t, m):
        row = D[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = -x if x < 0 else x
                if best is None or ax < best:
                    best = ax
                    pos = (i, j)
                    if ax == 1:
                        return pos
    return pos


def smith_normal_form(A, ncols=None, want_u=True, want_v_inverse=False):
    """Smith normal form ``U A V = D``.

    ``A`` is an ``m x n`` integer matrix given as a list of rows (pass
    ``ncols`` when ``m == 0``). Returns ``(U, D, V)``, or ``(U, D, V, Vinv)``
    with ``want_v_inverse``. ``U`` and ``V`` are unimodular, ``D`` is diagonal
    with non-negative entries, each dividing the next. The pivot at every
    step is the entry of least absolute value in the active block.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    D = [list(r) for r in A]
    U = identity(m) if want_u else None
    V = identity(n)
    Vinv = identity(n) if want_v_inverse else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        if Vinv is not None:
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Dd, Ds = D[dst], D[src]
        for k in range(n):
            if Ds[k]:
                Dd[k] += q * Ds[k]
        if U is not None:
            Ud, Us = U[dst], U[src]
            for k in range(m):
                if Us[k]:
                    Ud[k] += q * Us[k]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        if Vinv is not None:
            # inverse operation acts on rows of Vinv: row_src -= q * row_dst
            Rs, Rd = Vinv[src], Vinv[dst]
            for k in range(n):
                if Rd[k]:
                    Rs[k] -= q * Rd[k]

    t = 0
    while t < min(m, n):
        pos = _min_abs_position(D, t, m, n)
        if pos is None:
            break
        i, j = pos
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = D[i][t]
                if x:
                    q = x // p
                    if q:
                        add_row(i, t, -q)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = D[t][j]
                if x:
                    q = x // p
                    if q:
                        add_col(j, t, -q)
                    if D[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover of row/column t into the pivot
                best, where = abs(p), None
                for i in range(t + 1, m):
                    x = abs(D[i][t])
                    if x and x < best:
                        best, where = x, ("r", i)
                for j in range(t + 1, n):
                    x = abs(D[t][j])
                    if x and x < best:
                        best, where = x, ("c", j)
                if where is not None:
                    if where[0] == "r":
                        swap_rows(t, where[1])
                    else:
                        swap_cols(t, where[1])
                continue
            # row and column t are clear; enforce divisibility
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    if want_v_inverse:
        return U, D, V, Vinv
    return U, D, V


def hermite_normal_form(A, ncols=None):
    """Row-style Hermite normal form ``U A = H``.

    ``H`` is in row echelon form with positive pivots, every entry above a
    pivot reduced into ``[0, pivot)``, and zero rows at the bottom. ``U`` is
    unimodular. The result depends only on the row lattice of ``A``.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    H = [list(r) for r in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine column c of rows r.. into row r
        while True:
            piv = None
            best = None
            for i in range(r, m):
                x = H[i][c]
                if x and (best is None or abs(x) < best):
                    best, piv = abs(x), i
            if piv is None:
                break
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            p = H[r][c]
            done = True
            for i in range(r + 1, m):
                x = H[i][c]
                if x:
                    q = x // p
                    Hi, Hr, Ui, Ur = H[i], H[r], U[i], U[r]
                    for k in range(n):
                        Hi[k] -= q * Hr[k]
                    for k in range(m):
                        Ui[k] -= q * Ur[k]
                    if Hi[c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            x = H[i][c]
            q = x // p
            if q:
                Hi, Hr, Ui, Ur = H[i], H[r], U[i], U[r]
                for k in range(n):
                    Hi[k] -= q * Hr[k]
                for k in range(m):
                    Ui[k] -= q * Ur[k]
        r += 1
    return H, U


def solve_integer(A, B, ncols=None):
    """Integer matrix ``X`` with ``A X = B``, or ``None`` if there is none.

    ``A`` is ``m x n``, ``B`` is ``m x k``. When ``A`` has a kernel the
    returned solution sets the free coordinates (in Smith basis) to zero.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    k = len(B[0]) if B else 0
    U, D, V = smith_normal_form(A, ncols=n)
    UB = matmul(U, B) if m else []
    Z = [[0] * k for _ in range(n)]
    for i in range(m):
        d = D[i][i] if i < n else 0
        row = UB[i]
        if d == 0:
            if any(row):
                return None
            continue
        for j in range(k):
            q, rem = divmod(row[j], d)
            if rem:
                return None
            Z[i][j] = q
    return matmul(V, Z) if n else []


def saturated_span(rows, ncols):
    """Basis of ``span_Q(rows) ∩ Z^n`` and a coordinate map onto it.

    Returns ``(B, C)`` where ``B`` is ``d x n`` with primitive rows spanning
    the saturated sublattice, and ``C`` is ``n x d`` with ``B C = I``; so for
    ``x`` in the sublattice ``x C`` are its coordinates in ``B``.
    """
    _, D, V, Vinv = smith_normal_form(
        rows, ncols=ncols, want_u=False, want_v_inverse=True
    )
    d = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    B = [list(Vinv[i]) for i in range(d)]
    C = [list(row[:d]) for row in V]
    return B, C
