"""Rational polyhedral cones with exact integer arithmetic.

Cones are given by generators in ``Z^d``. The dual (inequality)
description is computed by the double description method; Hilbert bases
of pointed full-dimensional cones come from a placing triangulation and
the lattice points of each half-open fundamental parallelepiped.
"""

from .lattice import determinant, dot, hermite_normal_form, primitive, rank, smith_normal_form


def _axpy(a, u, b, v):
    return primitive([a * x + b * y for x, y in zip(u, v)])


def dual_description(generators, dim):
    """Primitive normals ``h`` with ``cone(generators) = {x : <h, x> >= 0}``.

    If the cone is not full-dimensional the result contains each equation
    of its linear span as a pair ``h, -h``. The list is sorted.
    """
    lineality = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays = []  # (vector, bitmask of tight constraints)
    seen = 0
    for idx, g in enumerate(generators):
        if not any(g):
            continue
        bit = 1 << idx
        pick = None
        for k, v in enumerate(lineality):
            if dot(v, g):
                pick = k
                break
        if pick is not None:
            l0 = lineality.pop(pick)
            a = dot(l0, g)
            if a < 0:
                l0 = tuple(-x for x in l0)
                a = -a
            new_lin = []
            for v in lineality:
                b = dot(v, g)
                new_lin.append(_axpy(a, v, -b, l0) if b else v)
            new_rays = []
            for v, z in rays:
                b = dot(v, g)
                new_rays.append((_axpy(a, v, -b, l0) if b else v, z | bit))
            new_rays.append((l0, seen))
            lineality, rays = new_lin, new_rays
        else:
            pos, neg, out = [], [], []
            for k, (v, z) in enumerate(rays):
                s = dot(v, g)
                if s > 0:
                    pos.append((k, v, z, s))
                    out.append((v, z))
                elif s < 0:
                    neg.append((k, v, z, s))
                else:
                    out.append((v, z | bit))
            if neg:
                masks = [z for _, z in rays]
                for kp, p, zp, sp in pos:
                    for kq, q, zq, sq in neg:
                        common = zp & zq
                        adjacent = True
                        for k, z in enumerate(masks):
                            if z & common == common and k != kp and k != kq:
                                adjacent = False
                                break
                        if adjacent:
                            out.append((_axpy(sp, q, -sq, p), common | bit))
            rays = out
        seen |= bit
    normals = {v for v, _ in rays}
    if lineality:
        H, _ = hermite_normal_form([list(v) for v in lineality], ncols=dim)
        for row in H:
            if any(row):
                v = primitive(row)
                normals.add(v)
                normals.add(tuple(-x for x in v))
    return sorted(normals)


def tight_mask(x, normals):
    m = 0
    for i, h in enumerate(normals):
        if dot(h, x) == 0:
            m |= 1 << i
    return m


def in_cone(x, normals):
    for h in normals:
        if dot(h, x) < 0:
            return False
    return True


def extremal_directions(generators, normals):
    """Primitive generators of the extremal rays of a pointed cone."""
    dirs = sorted({primitive(g) for g in generators if any(g)})
    masks = [tight_mask(v, normals) for v in dirs]
    out = []
    for i, v in enumerate(dirs):
        zi = masks[i]
        if all(j == i or masks[j] & zi != zi for j in range(len(dirs))):
            out.append(v)
    return out


def is_pointed(normals, dim):
    return rank(normals) == dim if dim else True


def _facet_normal(vectors, dim):
    # generalized cross product: <h, x> = det([vectors; x])
    h = []
    for j in range(dim):
        minor = [[row[k] for k in range(dim) if k != j] for row in vectors]
        sign = -1 if (dim - 1 + j) % 2 else 1
        h.append(sign * determinant(minor))
    return primitive(h)


def placing_triangulation(rays, dim):
    """Simplicial cones (tuples of ray indices) covering ``cone(rays)``.

    ``rays`` must span ``Q^dim`` and be the extremal rays of a pointed cone.
    Rays are placed in the given order.
    """
    n = len(rays)
    if n == dim:
        return [tuple(range(n))]
    start = []
    for i in range(n):
        if rank([rays[j] for j in start] + [rays[i]]) > len(start):
            start.append(i)
            if len(start) == dim:
                break
    simplices = [tuple(start)]
    placed = list(start)
    cache = {}

    def normal(facet):
        h = cache.get(facet)
        if h is None:
            h = _facet_normal([rays[j] for j in facet], dim)
            cache[facet] = h
        return h

    for i in range(n):
        if i in placed:
            continue
        v = rays[i]
        new = []
        for s in simplices:
            for k in range(dim):
                facet = s[:k] + s[k + 1:]
                h = normal(facet)
                if dot(h, rays[s[k]]) < 0:
                    h = tuple(-x for x in h)
                if dot(h, v) < 0 and all(dot(h, rays[p]) >= 0 for p in placed):
                    new.append(tuple(sorted(facet + (i,))))
        simplices.extend(new)
        placed.append(i)
    return simplices


def parallelepiped_points(R):
    """Lattice points of ``{sum t_i R_i : 0 <= t_i < 1}`` for a square
    nonsingular integer matrix ``R`` (rows are the cone generators)."""
    d = len(R)
    U, D, _ = smith_normal_form(R)
    diag = [D[i][i] for i in range(d)]
    N = 1
    for x in diag:
        N *= x
    if N == 1:
        return [tuple([0] * d)]
    # lambda * N = sum_i k_i * (N / d_i) * U[i]
    scaled = [[(N // diag[i]) * u for u in U[i]] for i in range(d)]
    active = [i for i in range(d) if diag[i] > 1]
    points = []

    def walk(pos, acc):
        if pos == len(active):
            mu = [x % N for x in acc]
            p = tuple(sum(mu[j] * R[j][c] for j in range(d)) // N for c in range(d))
            points.append(p)
            return
        i = active[pos]
        row = scaled[i]
        for k in range(diag[i]):
            walk(pos + 1, [a + k * r for a, r in zip(acc, row)])

    walk(0, [0] * d)
    return points


def pointed_hilbert_basis(generators, normals, dim):
    """Hilbert basis of ``cone(generators) ∩ Z^dim``.

    The cone must be pointed and full-dimensional with facet normals
    ``normals``. Returned sorted lexicographically.
    """
    rays = extremal_directions(generators, normals)
    if not rays:
        return []
    candidates = set(rays)
    for simplex in placing_triangulation(rays, dim):
        R = [list(rays[j]) for j in simplex]
        for p in parallelepiped_points(R):
            if any(p):
                candidates.add(p)
    grading = [sum(col) for col in zip(*normals)]
    ordered = sorted(candidates, key=lambda x: (dot(grading, x), x))
    basis = []
    for x in ordered:
        gx = dot(grading, x)
        reducible = False
        for b in basis:
            if dot(grading, b) >= gx:
                break
            diff = [u - v for u, v in zip(x, b)]
            if in_cone(diff, normals):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return sorted(basis)
