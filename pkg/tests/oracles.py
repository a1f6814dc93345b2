"""Independent reference computations used to certify the library.

Nothing here imports the code under test. Cone membership is decided by
Carathéodory: a point lies in ``cone(G)`` iff it is a non-negative
combination of some linearly independent subset of ``G``, tested exactly
with integer adjugates.
"""

import itertools
from math import gcd

import numpy as np
import sympy


def _int_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


class ConeOracle:
    """Exact vectorized membership test for ``cone(generators)``."""

    def __init__(self, generators, dim):
        self.dim = dim
        gens = [tuple(g) for g in generators if any(g)]
        self.gens = gens
        d = _int_rank(gens)
        self.span_dim = d
        self.pieces = []
        if d == 0:
            return
        for S in itertools.combinations(gens, d):
            Sm = sympy.Matrix(S)
            if Sm.rank() < d:
                continue
            # pick d coordinates on which S is invertible
            for cols in itertools.combinations(range(dim), d):
                sub = Sm[:, list(cols)]
                det = sub.det()
                if det != 0:
                    adj = np.array(sub.adjugate().tolist(), dtype=np.int64)
                    self.pieces.append(
                        (list(cols), adj, int(det), np.array(S, dtype=np.int64))
                    )
                    break

    def contains(self, X):
        """Boolean mask over the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        if self.span_dim == 0:
            return ~X.any(axis=1)
        out = np.zeros(len(X), dtype=bool)
        for cols, adj, det, S in self.pieces:
            # lam * det = X[:, cols] @ adj
            lam = X[:, cols] @ adj
            ok = ((lam * np.sign(det)) >= 0).all(axis=1)
            ok &= (lam @ S == det * X).all(axis=1)
            out |= ok
        return out


def positive_functional(generators, dim):
    """Integer ``w`` with ``<w, g> > 0`` for every nonzero generator, or ``None``.

    A feasible point of ``G w >= 1`` from a floating-point LP is scaled and
    rounded; the inequalities are then re-checked exactly.
    """
    from scipy.optimize import linprog

    G = np.array([g for g in generators if any(g)], dtype=np.int64).reshape(-1, dim)
    if len(G) == 0:
        return tuple([0] * dim)
    res = linprog(np.zeros(dim), A_ub=-G, b_ub=-np.ones(len(G)), bounds=[(None, None)] * dim)
    if res.status != 0:
        return None
    for scale in (1, 10, 100, 1000, 10**6):
        w = np.rint(res.x * scale).astype(np.int64)
        if (G @ w > 0).all():
            return tuple(int(t) for t in w)
    return None


def box_hilbert_basis(generators, dim, bound=12):
    """Hilbert basis of ``cone(generators) ∩ Z^dim`` by scanning ``[-bound, bound]^dim``.

    The cone must be pointed. Irreducibility is tested against every
    already-found irreducible element of smaller degree.
    """
    oracle = ConeOracle(generators, dim)
    if dim == 0:
        return []
    w = positive_functional(generators, dim)
    if w is None:
        if not oracle.gens:
            return []
        raise ValueError("cone is not pointed (or needs a larger functional search)")
    w = np.array(w, dtype=np.int64)
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    box = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    box = box[box.any(axis=1)]
    points = box[oracle.contains(box)]
    order = np.lexsort(points.T[::-1])
    points = points[order]
    degree = points @ w
    points = points[np.argsort(degree, kind="stable")]
    basis = []
    for x in points:
        if basis:
            B = np.array(basis, dtype=np.int64)
            if oracle.contains(x - B).any():
                continue
        basis.append(x)
    return sorted(tuple(int(t) for t in b) for b in basis)


def determinantal_invariants(rows, ncols):
    """Rank and torsion invariants of ``Z^ncols / rowspace(rows)`` from gcds of minors."""
    M = sympy.Matrix(rows) if rows else sympy.zeros(0, ncols)
    r = M.rank()
    divisors = [1]
    for k in range(1, r + 1):
        g = 0
        for R in itertools.combinations(range(M.rows), k):
            for C in itertools.combinations(range(ncols), k):
                g = gcd(g, int(M.extract(list(R), list(C)).det()))
        divisors.append(g)
    invariants = [divisors[k] // divisors[k - 1] for k in range(1, r + 1)]
    return ncols - r, [d for d in invariants if d > 1]


def sympy_invariant_factors(A):
    from sympy.matrices.normalforms import invariant_factors
    from sympy.polys.domains import ZZ

    return [int(x) for x in invariant_factors(sympy.Matrix(A), domain=ZZ) if x != 0]


def brute_force_decorations(vertices, edges, legs, bound):
    """Every orientation/contact assignment satisfying the degree balance.

    ``vertices`` are ``(id, nondegenerate, d)``, ``edges`` ``(id, a, b)``,
    ``legs`` ``(vertex, c)``. Yields dicts ``edge id -> (orientation, c)``.
    Validity and admissibility are left to the caller.
    """
    need = {v: d + sum(c for u, c in legs if u == v) for v, _, d in vertices}
    options = []
    for eid, a, b in edges:
        opts = [(None, 0)]
        if a != b:
            opts += [((a, b), c) for c in range(1, bound + 1)]
            opts += [((b, a), c) for c in range(1, bound + 1)]
        options.append(opts)
    for choice in itertools.product(*options):
        net = dict.fromkeys(need, 0)
        for orient, c in choice:
            if orient:
                net[orient[1]] += c
                net[orient[0]] -= c
        if net == need:
            yield {eid: ch for (eid, _, _), ch in zip(edges, choice)}
