"""Admissible marked graphs over a fixed dual graph with multidegrees.

Given the undecorated dual graph, which components are nondegenerate, the
degree ``d_v`` of the line bundle on every component and the leg contact
orders, :func:`enumerate` lists every decoration (edge orientations and
contact orders) that is valid, admissible and balanced at every vertex:

    d_v = sum of c_l over oriented edges ending at v
          - sum of c_l over oriented edges starting at v
          - sum of c_i over legs at v
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegreeMismatch, InvalidGraph, LimitExceeded
from .graph import (
    Diagnostic,
    Edge,
    MarkedGraph,
    Vertex,
    has_strict_cycle,
    is_admissible,
    validate,
)

__all__ = [
    "DualGraphInput",
    "EnumerationLimits",
    "EnumerationResult",
    "check_input",
    "distinguished_partition",
    "degree_balance",
    "enumerate",
    "brute_force_enumerate",
]

_builtin_enumerate = enumerate


@dataclass(frozen=True)
class DualGraphInput:
    """Vertices carry ``multidegree``; edges carry only their ends."""

    vertices: tuple
    edges: tuple = ()
    legs: tuple = ()

    def __post_init__(self):
        for name in ("vertices", "edges", "legs"):
            object.__setattr__(self, name, tuple(sorted(getattr(self, name), key=lambda x: x.id)))

    def degree(self, vid):
        for v in self.vertices:
            if v.id == vid:
                return v.multidegree or 0
        raise KeyError(vid)

    def leg_sum(self, vid):
        return sum(leg.contact_order for leg in self.legs if leg.vertex == vid)

    def leg_sum_total(self):
        return sum(leg.contact_order for leg in self.legs)

    def as_graph(self):
        return MarkedGraph(self.vertices, self.edges, self.legs)


@dataclass(frozen=True)
class EnumerationLimits:
    max_solutions: int = 10000
    max_contact: int = None  # None: sum |d_v| + sum c_i + 1

    def __post_init__(self):
        if self.max_solutions < 1 or (self.max_contact is not None and self.max_contact < 1):
            raise ValueError("limits must be at least 1")

    def contact_cap(self, data):
        if self.max_contact is not None:
            return self.max_contact
        return (
            sum(abs(v.multidegree or 0) for v in data.vertices)
            + sum(leg.contact_order for leg in data.legs)
            + 1
        )


@dataclass(frozen=True)
class EnumerationResult:
    graphs: tuple
    complete: bool = True
    reason: str = None

    def __iter__(self):
        return iter(self.graphs)

    def __len__(self):
        return len(self.graphs)


def check_input(data):
    """Diagnostics for connectivity, decoration-free edges and the global degree sum."""
    out = []
    for e in data.edges:
        if e.contact_order or e.orientation is not None:
            out.append(Diagnostic("DecoratedEdge", f"edge {e.id} must not carry contact data", (e.id,)))
    for d in validate(data.as_graph()):
        if d.code not in ("LoopWithContact", "OrientationContactMismatch"):
            out.append(d)
    degree_sum = sum(v.multidegree or 0 for v in data.vertices)
    contact_sum = sum(leg.contact_order for leg in data.legs)
    if degree_sum + contact_sum != 0:
        out.append(
            Diagnostic(
                "DegreeMismatch",
                f"sum of multidegrees {degree_sum} != -(sum of leg contact orders {contact_sum})",
                (degree_sum, contact_sum),
            )
        )
    return out


def _ensure_input(data):
    diagnostics = check_input(data)
    for d in diagnostics:
        if d.code == "DegreeMismatch":
            raise DegreeMismatch(*d.ids)
    if diagnostics:
        raise InvalidGraph(diagnostics)


def distinguished_partition(graph, vid):
    """``(lower, upper)``: oriented edges ending at ``vid``; oriented edges
    leaving it together with its legs of positive contact order."""
    low = frozenset(e.id for e in graph.oriented_edges() if e.orientation[1] == vid)
    up = frozenset(e.id for e in graph.oriented_edges() if e.orientation[0] == vid)
    up |= {leg.id for leg in graph.legs if leg.vertex == vid and leg.contact_order > 0}
    return low, up


def degree_balance(graph, vid, d):
    total = 0
    for e in graph.oriented_edges():
        if e.orientation[1] == vid:
            total += e.contact_order
        if e.orientation[0] == vid:
            total -= e.contact_order
    total -= sum(leg.contact_order for leg in graph.legs if leg.vertex == vid)
    return total == d


def _decorate(data, decoration):
    # decoration: edge id -> (orientation or None, c)
    edges = []
    for e in data.edges:
        orient, c = decoration.get(e.id, (None, 0))
        edges.append(Edge(e.id, e.ends, c, orient))
    return MarkedGraph(data.vertices, tuple(edges), data.legs)


def _compositions(total, parts, cap):
    """Tuples of ``parts`` integers in ``[1, cap]`` summing to ``total``.

    Yields ``None`` once if some composition was dropped by the cap.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    clipped = total - (parts - 1) > cap
    lo = max(1, total - cap * (parts - 1))
    for first in range(lo, min(cap, total - (parts - 1)) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            if rest is None:
                clipped = True
                continue
            yield (first,) + rest
    if clipped:
        yield None


class _Search:
    def __init__(self, data, limits):
        self.data = data
        self.cap = limits.contact_cap(data)
        # every contact order of a solution is at most this (cut at the up-set of its end)
        self.bound = sum(abs(v.multidegree or 0) for v in data.vertices) + data.leg_sum_total()
        self.max_solutions = limits.max_solutions
        self.nondeg = {v.id for v in data.vertices if v.nondegenerate}
        self.vids = [v.id for v in data.vertices]
        self.target = {v.id: (v.multidegree or 0) + data.leg_sum(v.id) for v in data.vertices}
        self.free = [e for e in data.edges if not e.is_loop]
        self.found = {}
        self.clipped = False
        self.overflow = False

    def statuses(self, e):
        a, b = e.ends
        out = [None]
        if b not in self.nondeg:
            out.append((a, b))
        if a not in self.nondeg:
            out.append((b, a))
        return out

    def has_cycle(self, orient):
        vertices = tuple(Vertex(v) for v in self.vids)
        edges = tuple(
            Edge(e.id, e.ends, 1 if orient[e.id] else 0, orient[e.id]) for e in self.free if e.id in orient
        )
        return has_strict_cycle(MarkedGraph(vertices, edges))

    def run(self, prefix=None):
        orient = dict(prefix or {})
        self.branch(len(orient), orient)
        return self

    def branch(self, k, orient):
        if self.overflow:
            return
        if k == len(self.free):
            self.solve(orient)
            return
        e = self.free[k]
        for status in self.statuses(e):
            orient[e.id] = status
            if status is None or not self.has_cycle(orient):
                self.branch(k + 1, orient)
            del orient[e.id]

    def solve(self, orient):
        out_edges = {v: [] for v in self.vids}
        in_edges = {v: [] for v in self.vids}
        for eid, o in orient.items():
            if o is not None:
                out_edges[o[0]].append(eid)
                in_edges[o[1]].append(eid)
        # sinks first: a vertex is ready once all its outgoing contact orders are known
        order, pending = [], {v: len(out_edges[v]) for v in self.vids}
        heads = {eid: o[0] for eid, o in orient.items() if o is not None}
        ready = sorted(v for v in self.vids if pending[v] == 0)
        while ready:
            v = ready.pop(0)
            order.append(v)
            for eid in in_edges[v]:
                u = heads[eid]
                pending[u] -= 1
                if pending[u] == 0:
                    ready.append(u)
                    ready.sort()
        if len(order) != len(self.vids):
            return
        self.assign(order, 0, in_edges, out_edges, {}, orient)

    def assign(self, order, i, in_edges, out_edges, contact, orient):
        if self.overflow:
            return
        if i == len(order):
            self.accept(orient, contact)
            return
        v = order[i]
        need = self.target[v] + sum(contact[eid] for eid in out_edges[v])
        ins = in_edges[v]
        for parts in _compositions(need, len(ins), self.cap):
            if parts is None:
                self.clipped |= self.cap < self.bound
                continue
            for eid, c in zip(ins, parts):
                contact[eid] = c
            self.assign(order, i + 1, in_edges, out_edges, contact, orient)
        for eid in ins:
            contact.pop(eid, None)

    def accept(self, orient, contact):
        decoration = {eid: (o, contact[eid]) for eid, o in orient.items() if o is not None}
        G = _decorate(self.data, decoration)
        if validate(G) or not is_admissible(G, check=False):
            return
        key = G.canonical_form()
        if key not in self.found:
            if len(self.found) >= self.max_solutions:
                self.overflow = True
                return
            self.found[key] = G


def _worker(args):
    data, limits, prefix = args
    s = _Search(data, limits).run(prefix)
    return list(s.found.items()), s.clipped, s.overflow


def _workers():
    try:
        n = int(os.environ.get("LOGMAP_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def enumerate(data, limits=None, workers=None):
    """All valid, admissible, balanced decorations of ``data``, canonically sorted.

    The result is flagged incomplete when a contact order would exceed
    ``limits.max_contact`` or more than ``limits.max_solutions`` graphs exist.
    ``workers`` (default: ``LOGMAP_THREADS`` or 1) splits the top of the
    branch tree over processes.
    """
    limits = limits or EnumerationLimits()
    _ensure_input(data)
    workers = workers or _workers()
    root = _Search(data, limits)
    if workers == 1 or not root.free:
        root.run()
        items, clipped, overflow = list(root.found.items()), root.clipped, root.overflow
    else:
        depth, prefixes = 0, [{}]
        while len(prefixes) < 4 * workers and depth < len(root.free):
            e = root.free[depth]
            grown = []
            for p in prefixes:
                for status in root.statuses(e):
                    q = dict(p, **{e.id: status})
                    if status is None or not root.has_cycle(q):
                        grown.append(q)
            prefixes, depth = grown, depth + 1
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_worker, [(data, limits, p) for p in prefixes]))
        merged, clipped, overflow = {}, False, False
        for found, c, o in parts:
            merged.update(found)
            clipped |= c
            overflow |= o
        items = list(merged.items())
        if len(items) > limits.max_solutions:
            overflow = True
            items = sorted(items)[: limits.max_solutions]
    graphs = tuple(G for _, G in sorted(items, key=lambda kv: kv[0]))
    reason = None
    if overflow:
        reason = f"more than {limits.max_solutions} solutions"
    elif clipped:
        reason = f"a contact order above {root.cap} was required"
    return EnumerationResult(graphs, complete=reason is None, reason=reason)


def enumerate_or_raise(data, limits=None):
    result = enumerate(data, limits)
    if not result.complete:
        raise LimitExceeded(result.reason)
    return list(result.graphs)


def brute_force_enumerate(data, contact_bound):
    """Scan every orientation and contact order up to ``contact_bound``.

    Balance is tested for all assignments at once with numpy; survivors are
    decorated and filtered by validity and admissibility. Returns a
    canonically sorted list; an input failing the global degree check has
    no solutions.
    """
    if check_input(data):
        return []
    vids = [v.id for v in data.vertices]
    pos = {v: i for i, v in _builtin_enumerate(vids)}
    n = len(vids)
    target = np.array([(v.multidegree or 0) + data.leg_sum(v.id) for v in data.vertices], dtype=np.int64)
    free = [e for e in data.edges if not e.is_loop]
    nondeg = {v.id for v in data.vertices if v.nondegenerate}
    options = []
    for e in free:
        a, b = e.ends
        opts = [(None, 0)]
        for orient in ((a, b), (b, a)):
            # an oriented edge into a nondegenerate vertex never validates
            if orient[1] not in nondeg:
                opts += [(orient, c) for c in range(1, contact_bound + 1)]
        options.append(opts)
    k = len(free)
    net = np.zeros((1,) * k + (n,), dtype=np.int64)
    for j, opts in _builtin_enumerate(options):
        m = np.zeros((len(opts), n), dtype=np.int64)
        for row, (orient, c) in _builtin_enumerate(opts):
            if orient is not None:
                m[row, pos[orient[1]]] += c
                m[row, pos[orient[0]]] -= c
        shape = [1] * k + [n]
        shape[j] = len(opts)
        net = net + m.reshape(shape)
    hits = np.argwhere((net == target).all(axis=-1))
    candidates = [tuple(int(x) for x in h) for h in hits]
    out = {}
    for choice in candidates:
        decoration = {e.id: options[j][k] for j, (e, k) in _builtin_enumerate(zip(free, choice))}
        G = _decorate(data, decoration)
        if validate(G):
            continue
        if not all(degree_balance(G, v.id, v.multidegree or 0) for v in data.vertices):
            continue
        if is_admissible(G, check=False):
            out[G.canonical_form()] = G
    return [out[k] for k in sorted(out)]
