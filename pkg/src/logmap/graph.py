"""Marked graphs of log maps and their associated monoids.

A marked graph is the dual graph of a nodal curve where every vertex is
flagged degenerate or not, every edge carries a contact order, and edges
with positive contact order point from the lower to the upper component.
"""

from collections import defaultdict, namedtuple
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .errors import (
    InternalInvariantError,
    InvalidGraph,
    InvalidSpec,
    NotAdmissible,
    NotAFace,
    RelationViolated,
    ResultInvalid,
)
from .lattice import dot, solve_integer, matmul
from .monoid import (
    AffineMonoid,
    MonoidMorphism,
    MonoidPresentation,
    affine_image,
    contains,
    face_quotient,
    groupify,
    is_isomorphism,
    monoid_to_json,
    morphism_from_images,
    saturate,
)

__all__ = [
    "Vertex",
    "Edge",
    "Leg",
    "MarkedGraph",
    "Diagnostic",
    "Admissibility",
    "AssociatedMonoid",
    "SpecializationSpec",
    "Specialization",
    "validate",
    "ensure_valid",
    "has_strict_cycle",
    "presentation",
    "associated_monoid",
    "is_admissible",
    "degeneracies",
    "specialize",
    "minimality_check",
    "vertex_name",
    "edge_name",
]


@dataclass(frozen=True)
class Vertex:
    id: str
    nondegenerate: bool = False
    multidegree: int = None


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple
    contact_order: int = 0
    orientation: tuple = None  # (initial, end) or None

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))
        if self.orientation is not None:
            object.__setattr__(self, "orientation", tuple(self.orientation))

    @property
    def is_loop(self):
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class Leg:
    id: str
    vertex: str
    contact_order: int = 0


@dataclass(frozen=True)
class MarkedGraph:
    vertices: tuple
    edges: tuple = ()
    legs: tuple = ()

    def __post_init__(self):
        for name in ("vertices", "edges", "legs"):
            items = tuple(sorted(getattr(self, name), key=lambda x: x.id))
            object.__setattr__(self, name, items)

    def vertex(self, vid):
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def edge(self, eid):
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    @property
    def nondegenerate_ids(self):
        return {v.id for v in self.vertices if v.nondegenerate}

    def oriented_edges(self):
        return [e for e in self.edges if e.orientation is not None]

    def minimal_vertices(self):
        """Vertices that are not the end of any oriented edge."""
        ends = {e.orientation[1] for e in self.oriented_edges()}
        return [v.id for v in self.vertices if v.id not in ends]

    def canonical_form(self):
        return tuple(
            (e.id, e.orientation or (), e.contact_order) for e in self.edges
        )


def vertex_name(vid):
    return "v:" + vid


def edge_name(eid):
    return "l:" + eid


Diagnostic = namedtuple("Diagnostic", "code message ids")
Diagnostic.__str__ = lambda d: f"{d.code}: {d.message}"


def _components(vertex_ids, pairs):
    parent = {v: v for v in vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    return {v: find(v) for v in vertex_ids}


def validate(graph):
    """Every violated marked-graph condition, as a list of diagnostics."""
    out = []
    ids = [v.id for v in graph.vertices]
    known = set(ids)
    for kind, items in (("vertex", graph.vertices), ("edge", graph.edges), ("leg", graph.legs)):
        seen = set()
        for x in items:
            if not isinstance(x.id, str) or not x.id:
                out.append(Diagnostic("BadId", f"{kind} id must be a nonempty string", (x.id,)))
            elif x.id in seen:
                out.append(Diagnostic("DuplicateId", f"{kind} id {x.id!r} repeated", (x.id,)))
            seen.add(x.id)
    if not graph.vertices:
        out.append(Diagnostic("Disconnected", "graph has no vertices", ()))
        return out
    nondeg = graph.nondegenerate_ids
    for e in graph.edges:
        if len(e.ends) != 2 or any(u not in known for u in e.ends):
            out.append(Diagnostic("UnknownVertex", f"edge {e.id} has unknown endpoints", (e.id,)))
            continue
        if e.contact_order < 0:
            out.append(Diagnostic("NegativeContact", f"edge {e.id} has negative contact order", (e.id,)))
        if e.is_loop and e.contact_order != 0:
            out.append(
                Diagnostic("LoopWithContact", f"loop {e.id} has contact order {e.contact_order}", (e.id,))
            )
        if (e.orientation is None) != (e.contact_order == 0):
            out.append(
                Diagnostic(
                    "OrientationContactMismatch",
                    f"edge {e.id} must be non-oriented exactly when its contact order is 0",
                    (e.id,),
                )
            )
        if e.orientation is not None:
            if sorted(e.orientation) != sorted(e.ends):
                out.append(
                    Diagnostic("BadOrientation", f"orientation of {e.id} does not match its ends", (e.id,))
                )
            elif e.orientation[1] in nondeg:
                out.append(
                    Diagnostic(
                        "OrientedIntoNondegenerate",
                        f"edge {e.id} ends at nondegenerate vertex {e.orientation[1]}",
                        (e.id, e.orientation[1]),
                    )
                )
    for leg in graph.legs:
        if leg.vertex not in known:
            out.append(Diagnostic("UnknownVertex", f"leg {leg.id} sits on an unknown vertex", (leg.id,)))
        if leg.contact_order < 0:
            out.append(Diagnostic("NegativeContact", f"leg {leg.id} has negative contact order", (leg.id,)))
    pairs = [e.ends for e in graph.edges if len(e.ends) == 2 and all(u in known for u in e.ends)]
    comp = _components(ids, pairs)
    if len(set(comp.values())) > 1:
        root = comp[ids[0]]
        away = tuple(v for v in ids if comp[v] != root)
        out.append(Diagnostic("Disconnected", "graph is not connected", away))
    return out


def ensure_valid(graph):
    diagnostics = validate(graph)
    if diagnostics:
        raise InvalidGraph(diagnostics)
    return graph


def has_strict_cycle(graph):
    """True iff a closed walk follows every oriented edge forwards and uses one.

    Non-oriented edges are contracted first; the answer is whether the
    oriented edges then form a directed cycle (a self-loop counts).
    """
    comp = _components(
        [v.id for v in graph.vertices],
        [e.ends for e in graph.edges if e.orientation is None],
    )
    succ = defaultdict(set)
    for e in graph.oriented_edges():
        a, b = comp[e.orientation[0]], comp[e.orientation[1]]
        if a == b:
            return True
        succ[a].add(b)
    state = {}
    for start in list(succ):
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return True
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def presentation(graph):
    """Generators ``v:<id>`` then ``l:<id>`` with the vertex and edge relations."""
    names = [vertex_name(v.id) for v in graph.vertices] + [edge_name(e.id) for e in graph.edges]
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    relations = []
    for v in graph.vertices:
        if v.nondegenerate:
            lhs = [0] * n
            lhs[index[vertex_name(v.id)]] = 1
            relations.append((lhs, [0] * n))
    for e in graph.edges:
        lhs, rhs = [0] * n, [0] * n
        if e.orientation is None:
            a, b = e.ends
            lhs[index[vertex_name(a)]] += 1
            rhs[index[vertex_name(b)]] += 1
        else:
            a, b = e.orientation
            lhs[index[vertex_name(b)]] += 1
            rhs[index[vertex_name(a)]] += 1
            rhs[index[edge_name(e.id)]] += e.contact_order
        relations.append((lhs, rhs))
    return MonoidPresentation(tuple(names), tuple(relations))


def _unsaturated(graph):
    # legs and multidegrees do not enter the monoid, so leave them out of the cache key
    key = (tuple((v.id, v.nondegenerate) for v in graph.vertices), graph.edges)
    return _unsaturated_cached(key)


@lru_cache(maxsize=8192)
def _unsaturated_cached(key):
    vertices, edges = key
    pres = presentation(MarkedGraph(tuple(Vertex(v, nd) for v, nd in vertices), edges))
    group = groupify(pres)
    return pres, group, affine_image(pres, group)


@dataclass(frozen=True)
class AssociatedMonoid:
    """The monoid of a marked graph at every stage of its construction."""

    graph: MarkedGraph
    presentation: MonoidPresentation
    group: object
    unsaturated: AffineMonoid
    saturated: AffineMonoid
    images: dict = field(repr=False)

    def vertex_image(self, vid):
        return self.images[vertex_name(vid)]

    def edge_image(self, eid):
        return self.images[edge_name(eid)]

    def to_json(self):
        return monoid_to_json(self.saturated, self.images, torsion=self.group.torsion_invariants)


@lru_cache(maxsize=4096)
def associated_monoid(graph):
    ensure_valid(graph)
    pres, group, N = _unsaturated(graph)
    return AssociatedMonoid(
        graph=graph,
        presentation=pres,
        group=group,
        unsaturated=N,
        saturated=saturate(N),
        images=dict(zip(pres.generators, group.projection)),
    )


Admissibility = namedtuple("Admissibility", "admissible reason")
Admissibility.__bool__ = lambda self: self.admissible


def is_admissible(graph, strict_degeneracy=False, check=True):
    """Sharpness of the associated monoid plus non-vanishing of every edge element.

    Only cone data is needed, so the saturation is never computed here.
    With ``strict_degeneracy`` degenerate vertices must also have nonzero
    images.
    """
    if check:
        ensure_valid(graph)
    pres, group, N = _unsaturated(graph)
    if not N.sharp:
        return Admissibility(False, "NotSharp")
    images = dict(zip(pres.generators, group.projection))
    dead = [e.id for e in graph.edges if not any(images[edge_name(e.id)])]
    if dead:
        return Admissibility(False, "EdgeVanishes: " + ", ".join(dead))
    if strict_degeneracy:
        flat = [
            v.id
            for v in graph.vertices
            if not v.nondegenerate and not any(images[vertex_name(v.id)])
        ]
        if flat:
            return Admissibility(False, "DegenerateVertexVanishes: " + ", ".join(flat))
    return Admissibility(True, "Admissible")


def degeneracies(graph):
    """Image of every vertex element in the associated monoid."""
    ensure_valid(graph)
    _, group, _ = _unsaturated(graph)
    return {v.id: group.image(vertex_name(v.id)) for v in graph.vertices}


@dataclass(frozen=True)
class SpecializationSpec:
    contracted_edges: frozenset = frozenset()
    newly_nondegenerate: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "contracted_edges", frozenset(self.contracted_edges))
        object.__setattr__(self, "newly_nondegenerate", frozenset(self.newly_nondegenerate))


@dataclass(frozen=True)
class Specialization:
    """Result of :func:`specialize`.

    ``morphism`` is the induced map from the monoid of the original graph to
    that of ``graph``. ``comparison`` maps the face quotient ``quotient``
    onto the same target; ``coherent`` says whether it is an isomorphism.
    """

    graph: MarkedGraph
    morphism: MonoidMorphism
    face: tuple
    quotient: AffineMonoid
    comparison: MonoidMorphism
    coherent: bool

    def __iter__(self):
        return iter((self.graph, self.morphism))


def _zero_set(graph, spec, classes):
    nondeg = graph.nondegenerate_ids | spec.newly_nondegenerate
    dead_roots = {classes[v] for v in nondeg}
    names = {edge_name(e) for e in spec.contracted_edges}
    names |= {vertex_name(v.id) for v in graph.vertices if classes[v.id] in dead_roots}
    return names, dead_roots


def specialize(graph, spec):
    """Contract ``spec.contracted_edges`` and flag ``spec.newly_nondegenerate``.

    The elements sent to zero must cut out a face of the associated monoid;
    the result also records the face quotient and whether it agrees with the
    monoid of the new graph.
    """
    ensure_valid(graph)
    edge_ids = {e.id for e in graph.edges}
    vertex_ids = {v.id for v in graph.vertices}
    unknown = sorted((spec.contracted_edges - edge_ids) | (spec.newly_nondegenerate - vertex_ids))
    if unknown:
        raise InvalidSpec("unknown ids: " + ", ".join(unknown))
    already = sorted(spec.newly_nondegenerate & graph.nondegenerate_ids)
    if already:
        raise InvalidSpec("already nondegenerate: " + ", ".join(already))
    verdict = is_admissible(graph, check=False)
    if not verdict:
        raise NotAdmissible(verdict.reason)

    A = associated_monoid(graph)
    M = A.saturated
    contracted = [graph.edge(e) for e in sorted(spec.contracted_edges)]
    classes = _components(sorted(vertex_ids), [e.ends for e in contracted])
    zero_names, dead_roots = _zero_set(graph, spec, classes)

    # smallest face through the zero set; it may contain no other generator
    zero_vectors = [A.images[n] for n in zero_names]
    tight = [h for h in M.normals if all(dot(h, z) == 0 for z in zero_vectors)]
    extra = sorted(
        name
        for name, img in A.images.items()
        if name not in zero_names and any(img) and all(dot(h, img) == 0 for h in tight)
    )
    if extra:
        raise NotAFace("the smallest face through the vanishing elements also contains " + ", ".join(extra))

    rep = {}
    for v in sorted(vertex_ids):
        rep.setdefault(classes[v], v)
    nondeg = graph.nondegenerate_ids | spec.newly_nondegenerate
    members = defaultdict(list)
    for v in graph.vertices:
        members[classes[v.id]].append(v)
    new_vertices = []
    for root, group in members.items():
        degrees = [v.multidegree for v in group]
        new_vertices.append(
            Vertex(
                rep[root],
                nondegenerate=any(v.id in nondeg for v in group),
                multidegree=None if None in degrees else sum(degrees),
            )
        )
    new_edges = []
    for e in graph.edges:
        if e.id in spec.contracted_edges:
            continue
        ends = tuple(rep[classes[u]] for u in e.ends)
        orient = None if e.orientation is None else tuple(rep[classes[u]] for u in e.orientation)
        new_edges.append(replace(e, ends=ends, orientation=orient))
    new_legs = [replace(leg, vertex=rep[classes[leg.vertex]]) for leg in graph.legs]
    G2 = MarkedGraph(tuple(new_vertices), tuple(new_edges), tuple(new_legs))
    diagnostics = validate(G2)
    if diagnostics:
        raise ResultInvalid(diagnostics)

    A2 = associated_monoid(G2)
    images = []
    for name in A.presentation.generators:
        kind, ident = name.split(":", 1)
        if kind == "v":
            images.append(A2.images[vertex_name(rep[classes[ident]])])
        elif ident in spec.contracted_edges:
            images.append(tuple([0] * A2.saturated.rank))
        else:
            images.append(A2.images[name])
    q_prime = morphism_from_images(A.unsaturated, A2.saturated, images)
    if q_prime is None:
        raise InternalInvariantError("specialization does not respect the graph relations")
    q_prime = MonoidMorphism(M, A2.saturated, q_prime.matrix, q_prime.generator_images)

    face = tuple(h for h in M.generators if all(dot(t, h) == 0 for t in tight))
    Q, q = face_quotient(M, face)
    comparison = _factor_through(q, q_prime, Q, A2.saturated)
    return Specialization(
        graph=G2,
        morphism=q_prime,
        face=face,
        quotient=Q,
        comparison=comparison,
        coherent=comparison is not None and is_isomorphism(comparison),
    )


def _factor_through(q, q_prime, Q, target):
    # psi with q ; psi = q_prime on lattices, or None if q_prime does not factor
    if Q.rank == 0:
        if any(any(row) for row in q_prime.matrix):
            return None
        return MonoidMorphism(Q, target, [])
    if target.rank == 0:
        return MonoidMorphism(Q, target, [[] for _ in range(Q.rank)])
    Mq = [list(r) for r in q.matrix]
    Mp = [list(r) for r in q_prime.matrix]
    psi = solve_integer(Mq, Mp, ncols=Q.rank)
    if psi is None or matmul(Mq, psi) != Mp:
        return None
    return MonoidMorphism(Q, target, psi)


def minimality_check(graph, target, assignment):
    """Is the canonical map from the associated monoid to ``target`` an isomorphism?

    ``assignment`` sends every generator name (``v:<id>``, ``l:<id>``) to a
    vector of ``target``. Raises :class:`RelationViolated` when the
    assignment does not define a morphism.
    """
    ensure_valid(graph)
    pres, group, N = _unsaturated(graph)
    missing = [n for n in pres.generators if n not in assignment]
    if missing:
        raise RelationViolated("assignment misses " + ", ".join(missing))
    r = target.rank
    Y = {}
    for name in pres.generators:
        vec = tuple(assignment[name])
        if len(vec) != r:
            raise RelationViolated(f"image of {name} has length {len(vec)}, target rank is {r}")
        if not target.in_cone(vec) or (not target.saturated and not contains(target, vec)):
            raise RelationViolated(f"image of {name} is not in the target monoid")
        Y[name] = vec
    for v in graph.vertices:
        if v.nondegenerate and any(Y[vertex_name(v.id)]):
            raise RelationViolated(f"h_v for {v.id}: nondegenerate vertex must map to 0")
    for e in graph.edges:
        if e.orientation is None:
            a, b = e.ends
            if Y[vertex_name(a)] != Y[vertex_name(b)]:
                raise RelationViolated(f"h_l for {e.id}: endpoints {a} and {b} must have equal images")
        else:
            a, b = e.orientation
            want = tuple(x + e.contact_order * y for x, y in zip(Y[vertex_name(a)], Y[edge_name(e.id)]))
            if Y[vertex_name(b)] != want:
                raise RelationViolated(
                    f"h_l for {e.id}: image of {b} must equal image of {a} plus "
                    f"{e.contact_order} times image of {e.id}"
                )
    T = saturate(target)
    phi = morphism_from_images(N, T, [Y[n] for n in pres.generators])
    if phi is None:
        raise InternalInvariantError("relations hold but no lattice map realises the assignment")
    M = associated_monoid(graph).saturated
    return is_isomorphism(MonoidMorphism(M, T, phi.matrix, phi.generator_images))
