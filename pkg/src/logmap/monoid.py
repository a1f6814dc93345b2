"""Finitely generated commutative monoids.

A monoid is either given by a presentation (generators and additive
relations) or embedded as an :class:`AffineMonoid` in a lattice ``Z^r``.
``groupify`` passes from the first to the group ``M^gp``, ``affine_image``
to the torsion-free image, and ``saturate`` to ``cone ∩ Z^r``.
"""

from collections import namedtuple
from dataclasses import dataclass, field

from . import cone as _cone
from .errors import CapExceeded, NotAFace, NotSharp
from .lattice import (
    determinant,
    dot,
    hermite_normal_form,
    matmul,
    saturated_span,
    smith_normal_form,
    solve_integer,
    transpose,
)

__all__ = [
    "MonoidPresentation",
    "GroupData",
    "AffineMonoid",
    "MonoidMorphism",
    "Membership",
    "groupify",
    "affine_image",
    "dual_description",
    "is_sharp",
    "saturate",
    "hilbert_basis",
    "extremal_rays",
    "contains",
    "multiple_in_unsaturated",
    "face_quotient",
    "is_isomorphism",
    "compose",
    "monoid_to_json",
]

DEFAULT_CAP = 256

Membership = namedtuple("Membership", "found certificate")
Membership.__bool__ = lambda self: self.found


@dataclass(frozen=True)
class MonoidPresentation:
    """Generators plus relations ``lhs = rhs`` with non-negative coefficients."""

    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise ValueError("duplicate generator names")
        rels = []
        for lhs, rhs in self.relations:
            lhs, rhs = tuple(lhs), tuple(rhs)
            if len(lhs) != n or len(rhs) != n:
                raise ValueError("relation length does not match generator count")
            if any(c < 0 for c in lhs + rhs):
                raise ValueError("relation coefficients must be non-negative")
            rels.append((lhs, rhs))
        object.__setattr__(self, "relations", tuple(rels))

    def relation_matrix(self):
        return [[a - b for a, b in zip(lhs, rhs)] for lhs, rhs in self.relations]


@dataclass(frozen=True)
class GroupData:
    """``M^gp ≅ Z^r ⊕ T`` together with the images of the generators.

    ``projection[j]`` is the image of generator ``j`` in ``M^gp / T``, in a
    basis fixed by the Hermite normal form of the projection matrix.
    ``torsion_part[j]`` lists its residues modulo each torsion invariant.
    """

    generators: tuple
    free_rank: int
    torsion_invariants: tuple
    projection: tuple
    torsion_part: tuple

    def image(self, name):
        return self.projection[self.generators.index(name)]


def _canonical_columns(P, r):
    # fix the basis of Z^r by the HNF of the column lattice of P
    if r == 0:
        return [() for _ in P]
    H, _ = hermite_normal_form(transpose(P, r), ncols=len(P))
    return [tuple(row) for row in transpose(H[:r], len(P))]


def groupify(presentation):
    n = len(presentation.generators)
    R = presentation.relation_matrix()
    _, D, V = smith_normal_form(R, ncols=n, want_u=False)
    diag = [D[i][i] for i in range(min(len(D), n))]
    rk = sum(1 for d in diag if d)
    tors_idx = [i for i, d in enumerate(diag) if d > 1]
    r = n - rk
    P = [row[rk:] for row in V]
    projection = _canonical_columns(P, r)
    torsion_part = tuple(tuple(V[j][i] % diag[i] for i in tors_idx) for j in range(n))
    return GroupData(
        generators=presentation.generators,
        free_rank=r,
        torsion_invariants=tuple(diag[i] for i in tors_idx),
        projection=tuple(projection),
        torsion_part=torsion_part,
    )


@dataclass(frozen=True, eq=False)
class AffineMonoid:
    """Submonoid of ``Z^rank`` generated by ``generators``.

    Cone data (``normals``, ``sharp``, ``rays``) is computed on construction.
    ``saturated`` is set only by :func:`saturate`; a saturated sharp monoid
    keeps its Hilbert basis, sorted, as ``generators``.
    """

    rank: int
    generators: tuple
    names: tuple = None
    saturated: bool = False
    normals: tuple = field(init=False)
    sharp: bool = field(init=False)
    rays: tuple = field(init=False)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        if any(len(g) != self.rank for g in gens):
            raise ValueError("generator length does not match rank")
        if self.names is not None and len(self.names) != len(gens):
            raise ValueError("one name per generator required")
        object.__setattr__(self, "generators", gens)
        nonzero = [g for g in gens if any(g)]
        normals = tuple(_cone.dual_description(nonzero, self.rank))
        sharp = _cone.is_pointed(normals, self.rank)
        rays = tuple(_cone.extremal_directions(nonzero, normals)) if sharp else None
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "sharp", sharp)
        object.__setattr__(self, "rays", rays)

    def __eq__(self, other):
        if not isinstance(other, AffineMonoid):
            return NotImplemented
        return (self.rank, set(self.generators)) == (other.rank, set(other.generators))

    def __hash__(self):
        return hash((self.rank, frozenset(self.generators)))

    @property
    def generator_images(self):
        if self.names is None:
            return {}
        return dict(zip(self.names, self.generators))

    def in_cone(self, x):
        return _cone.in_cone(x, self.normals)

    def grading(self):
        """A linear form, strictly positive on the monoid minus zero when sharp."""
        return tuple(sum(col) for col in zip(*self.normals)) if self.normals else ()


@dataclass(frozen=True)
class MonoidMorphism:
    """Homomorphism ``source -> target`` given by ``x -> x @ matrix``."""

    source: AffineMonoid
    target: AffineMonoid
    matrix: tuple
    generator_images: dict = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))

    def __call__(self, x):
        if not self.matrix:
            return tuple([0] * self.target.rank)
        return tuple(dot(x, col) for col in zip(*self.matrix)) if self.target.rank else ()

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))


def affine_image(presentation, group=None):
    """The monoid ``N``: image of the presented monoid in ``M^gp / T``."""
    if group is None:
        group = groupify(presentation)
    return AffineMonoid(
        rank=group.free_rank,
        generators=group.projection,
        names=presentation.generators,
    )


def dual_description(N):
    return list(N.normals)


def is_sharp(N):
    return N.sharp


def _kernel_rows(rows, dim):
    # basis (as rows) of {x in Z^dim : <h, x> = 0 for h in rows}
    _, D, V = smith_normal_form(rows, ncols=dim, want_u=False)
    rk = sum(1 for i in range(min(len(D), dim)) if D[i][i])
    return [tuple(V[i][j] for i in range(dim)) for j in range(rk, dim)]


def saturate(N):
    """``cone(N) ∩ Z^r``; for sharp ``N`` the generators are its Hilbert basis."""
    if N.saturated:
        return N
    r = N.rank
    gens = sorted({g for g in N.generators if any(g)})
    if not gens:
        return AffineMonoid(r, (), saturated=True)
    B, C = saturated_span(gens, r)
    d = len(B)
    coords = [tuple(x) for x in matmul(gens, C)]
    normals = _cone.dual_description(coords, d)
    if _cone.is_pointed(normals, d):
        basis_d = _cone.pointed_hilbert_basis(coords, normals, d)
        out = [tuple(x) for x in matmul(basis_d, B)] if basis_d else []
    else:
        # split off the lineality lattice, compute in the pointed quotient, lift back
        lin = _kernel_rows(normals, d)
        _, _, V, Vinv = smith_normal_form(
            [list(v) for v in lin], ncols=d, want_u=False, want_v_inverse=True
        )
        ell = len(lin)
        to_q = [row[ell:] for row in V]
        section = [Vinv[i] for i in range(ell, d)]
        q_coords = [tuple(x) for x in matmul(coords, to_q)]
        q_dim = d - ell
        q_normals = _cone.dual_description(q_coords, q_dim)
        q_basis = _cone.pointed_hilbert_basis(q_coords, q_normals, q_dim)
        lifted = [tuple(x) for x in matmul(q_basis, section)] if q_basis else []
        lin_gens = [tuple(v) for v in lin] + [tuple(-x for x in v) for v in lin]
        out = [tuple(x) for x in matmul(lifted + lin_gens, B)]
    return AffineMonoid(r, tuple(sorted(set(out))), saturated=True)


def hilbert_basis(N):
    if not N.sharp:
        raise NotSharp("Hilbert basis is not unique for a monoid with units")
    return list(saturate(N).generators)


def extremal_rays(N):
    if not N.sharp:
        raise NotSharp("cone is not strongly convex")
    return list(N.rays)


def contains(N, x):
    """Decide ``x ∈ N``; the certificate gives one coefficient per generator."""
    if not N.sharp:
        raise NotSharp("membership search needs a positive grading")
    x = tuple(x)
    if len(x) != N.rank:
        raise ValueError("vector length does not match rank")
    n = len(N.generators)
    if not any(x):
        return Membership(True, (0,) * n)
    if not N.in_cone(x):
        return Membership(False, None)
    w = N.grading()
    slots = {}
    for i, g in enumerate(N.generators):
        if any(g) and g not in slots:
            slots[g] = i
    order = sorted(slots, key=lambda g: (-dot(w, g), g))
    weights = [dot(w, g) for g in order]
    normals = N.normals
    failed = set()

    def search(i, rem):
        if not any(rem):
            return []
        if i == len(order):
            return None
        key = (i, rem)
        if key in failed:
            return None
        g = order[i]
        for k in range(dot(w, rem) // weights[i], -1, -1):
            nxt = tuple(a - k * b for a, b in zip(rem, g)) if k else rem
            if k and not _cone.in_cone(nxt, normals):
                continue
            tail = search(i + 1, nxt)
            if tail is not None:
                return [k] + tail
        failed.add(key)
        return None

    found = search(0, x)
    if found is None:
        return Membership(False, None)
    cert = [0] * n
    for g, k in zip(order, found):
        cert[slots[g]] = k
    return Membership(True, tuple(cert))


def multiple_in_unsaturated(N, a, cap=DEFAULT_CAP):
    """Least ``m >= 1`` with ``m a ∈ N``, returned as ``(m, certificate)``."""
    a = tuple(a)
    if not N.in_cone(a):
        raise ValueError("vector is not in the saturation of the monoid")
    for m in range(1, cap + 1):
        hit = contains(N, tuple(m * t for t in a))
        if hit.found:
            return m, hit.certificate
    raise CapExceeded(cap)


def face_quotient(N, face_generators):
    """Kill the face spanned by ``face_generators`` (Hilbert basis elements).

    Returns ``(Q, q)``: the saturated image of ``N`` in ``Z^r / <face>`` with
    torsion removed, and the quotient morphism ``q: N -> Q``.
    """
    M = saturate(N)
    if not M.sharp:
        raise NotSharp("face quotient needs a sharp monoid")
    basis = M.generators
    face = sorted({tuple(f) for f in face_generators})
    if any(f not in basis for f in face):
        raise NotAFace("face generators must be Hilbert basis elements")
    tight = [h for h in M.normals if all(dot(h, f) == 0 for f in face)]
    closure = sorted(g for g in basis if all(dot(h, g) == 0 for h in tight))
    if closure != face:
        raise NotAFace(
            "smallest face through the given elements also contains "
            + ", ".join(str(list(g)) for g in closure if g not in face)
        )
    r = M.rank
    if face:
        _, D, V = smith_normal_form([list(f) for f in face], ncols=r, want_u=False)
        k = sum(1 for i in range(min(len(D), r)) if D[i][i])
        proj = [row[k:] for row in V]
    else:
        proj = [[int(i == j) for j in range(r)] for i in range(r)]
        k = 0
    s = r - k
    # canonical basis of the quotient: HNF of the column lattice
    proj = [list(row) for row in _canonical_columns(proj, s)]
    images = [tuple(x) for x in matmul(list(basis), proj)] if s else [() for _ in basis]
    Q = saturate(AffineMonoid(s, tuple(images)))
    q = MonoidMorphism(M, Q, proj, generator_images=dict(zip(basis, images)))
    return Q, q


def is_isomorphism(phi):
    s, t = saturate(phi.source), saturate(phi.target)
    # embedded monoids have torsion-free groups, so only the ranks can differ
    if s.rank != t.rank:
        return False
    if not (s.sharp and t.sharp):
        raise NotSharp("isomorphism test needs sharp monoids")
    if s.rank and abs(determinant([list(r) for r in phi.matrix])) != 1:
        return False
    return sorted(phi(h) for h in s.generators) == sorted(t.generators)


def compose(phi, psi):
    """``psi ∘ phi``."""
    if phi.target.rank != psi.source.rank:
        raise ValueError("morphisms are not composable")
    if phi.source.rank == 0 or psi.target.rank == 0:
        matrix = [[0] * psi.target.rank for _ in range(phi.source.rank)]
    elif phi.target.rank == 0:
        matrix = [[0] * psi.target.rank for _ in range(phi.source.rank)]
    else:
        matrix = matmul([list(r) for r in phi.matrix], [list(r) for r in psi.matrix])
    return MonoidMorphism(phi.source, psi.target, matrix)


def morphism_from_images(source, target, images):
    """The group map sending each generator of ``source`` to ``images[i]``.

    ``source.generators`` must generate ``Z^rank`` as a group (true for
    monoids built by :func:`affine_image`). Returns ``None`` when no integer
    matrix realises the assignment.
    """
    P = [list(g) for g in source.generators]
    Y = [list(y) for y in images]
    if source.rank == 0:
        if any(any(y) for y in Y):
            return None
        return MonoidMorphism(source, target, [], dict(zip(source.names or (), images)))
    if target.rank == 0:
        F = [[] for _ in range(source.rank)]
    else:
        F = solve_integer(P, Y, ncols=source.rank)
        if F is None or matmul(P, F) != Y:
            return None
    names = source.names or tuple(source.generators)
    return MonoidMorphism(source, target, F, dict(zip(names, map(tuple, images))))


def monoid_to_json(N, generator_images=None, torsion=()):
    """JSON-ready dict; keys and vectors are emitted in a canonical order."""
    if generator_images is None:
        generator_images = N.generator_images
    sharp = N.sharp
    return {
        "rank": N.rank,
        "torsion": list(torsion),
        "hilbert_basis": [list(v) for v in hilbert_basis(N)] if sharp else None,
        "extremal_rays": [list(v) for v in sorted(N.rays)] if sharp else None,
        "sharp": sharp,
        "generator_images": {k: list(v) for k, v in sorted(generator_images.items())},
    }
