"""Strict JSON reading and canonical JSON writing."""

import json

from .enumeration import DualGraphInput
from .errors import SchemaError
from .graph import Edge, Leg, MarkedGraph, Vertex
from .monoid import AffineMonoid

__all__ = [
    "load_json",
    "dumps",
    "graph_from_json",
    "graph_to_json",
    "dual_graph_from_json",
    "monoid_from_json",
    "assignment_from_json",
]


def load_json(text, source="input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            field=None,
        ) from None


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _object(obj, where, required, optional=()):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object", field=where)
    for key in obj:
        if key not in required and key not in optional:
            raise SchemaError(f"unknown key {key!r} in {where}", field=f"{where}.{key}")
    for key in required:
        if key not in obj:
            raise SchemaError(f"missing key {key!r} in {where}", field=f"{where}.{key}")
    return obj


def _list(obj, where):
    if not isinstance(obj, list):
        raise SchemaError(f"{where} must be an array", field=where)
    return obj


def _int(obj, where, minimum=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(f"{where} must be an integer", field=where)
    if minimum is not None and obj < minimum:
        raise SchemaError(f"{where} must be at least {minimum}", field=where)
    return obj


def _bool(obj, where):
    if not isinstance(obj, bool):
        raise SchemaError(f"{where} must be a boolean", field=where)
    return obj


def _ident(obj, where):
    if not isinstance(obj, str) or not obj or not obj.isascii():
        raise SchemaError(f"{where} must be a nonempty ASCII string", field=where)
    return obj


def _vector(obj, where):
    return tuple(_int(x, f"{where}[{k}]") for k, x in enumerate(_list(obj, where)))


def _vertices(doc, need_degree):
    out = []
    for k, v in enumerate(_list(doc["vertices"], "vertices")):
        where = f"vertices[{k}]"
        keys = ("id", "nondegenerate", "multidegree") if need_degree else ("id", "nondegenerate")
        _object(v, where, keys, () if need_degree else ("multidegree",))
        d = v.get("multidegree")
        out.append(
            Vertex(
                _ident(v["id"], f"{where}.id"),
                _bool(v["nondegenerate"], f"{where}.nondegenerate"),
                None if d is None else _int(d, f"{where}.multidegree"),
            )
        )
    return tuple(out)


def _ends(e, where):
    ends = _list(e["ends"], f"{where}.ends")
    if len(ends) != 2:
        raise SchemaError(f"{where}.ends must have two entries", field=f"{where}.ends")
    return tuple(_ident(u, f"{where}.ends[{i}]") for i, u in enumerate(ends))


def _orientation(text, ends, where):
    if not isinstance(text, str):
        raise SchemaError(f"{where} must be a string", field=where)
    if text == "none":
        return None
    a, b = ends
    if text == f"{a}->{b}":
        return (a, b)
    if text == f"{b}->{a}":
        return (b, a)
    raise SchemaError(f"{where} must be 'none' or '<end>-><end>' over the edge ends", field=where)


def _legs(doc):
    out = []
    for k, leg in enumerate(_list(doc.get("legs", []), "legs")):
        where = f"legs[{k}]"
        _object(leg, where, ("id", "vertex", "contact_order"))
        out.append(
            Leg(
                _ident(leg["id"], f"{where}.id"),
                _ident(leg["vertex"], f"{where}.vertex"),
                _int(leg["contact_order"], f"{where}.contact_order", minimum=0),
            )
        )
    return tuple(out)


def graph_from_json(doc):
    _object(doc, "graph", ("vertices",), ("edges", "legs"))
    edges = []
    for k, e in enumerate(_list(doc.get("edges", []), "edges")):
        where = f"edges[{k}]"
        _object(e, where, ("id", "ends", "contact_order", "orientation"))
        ends = _ends(e, where)
        edges.append(
            Edge(
                _ident(e["id"], f"{where}.id"),
                ends,
                _int(e["contact_order"], f"{where}.contact_order", minimum=0),
                _orientation(e["orientation"], ends, f"{where}.orientation"),
            )
        )
    return MarkedGraph(_vertices(doc, False), tuple(edges), _legs(doc))


def dual_graph_from_json(doc):
    _object(doc, "input", ("vertices",), ("edges", "legs"))
    edges = []
    for k, e in enumerate(_list(doc.get("edges", []), "edges")):
        where = f"edges[{k}]"
        for key in ("contact_order", "orientation"):
            if isinstance(e, dict) and key in e:
                raise SchemaError(
                    f"{where}.{key} is not allowed in enumeration input", field=f"{where}.{key}"
                )
        _object(e, where, ("id", "ends"))
        edges.append(Edge(_ident(e["id"], f"{where}.id"), _ends(e, where)))
    return DualGraphInput(_vertices(doc, True), tuple(edges), _legs(doc))


def _orientation_text(e):
    return "none" if e.orientation is None else f"{e.orientation[0]}->{e.orientation[1]}"


def graph_to_json(graph):
    vertices = []
    for v in graph.vertices:
        item = {"id": v.id, "nondegenerate": v.nondegenerate}
        if v.multidegree is not None:
            item["multidegree"] = v.multidegree
        vertices.append(item)
    return {
        "vertices": vertices,
        "edges": [
            {
                "id": e.id,
                "ends": list(e.ends),
                "contact_order": e.contact_order,
                "orientation": _orientation_text(e),
            }
            for e in graph.edges
        ],
        "legs": [
            {"id": leg.id, "vertex": leg.vertex, "contact_order": leg.contact_order}
            for leg in graph.legs
        ],
    }


def monoid_from_json(doc):
    """``{"rank": r, "generators": [[...], ...]}``."""
    _object(doc, "target", ("rank", "generators"))
    r = _int(doc["rank"], "target.rank", minimum=0)
    gens = []
    for k, g in enumerate(_list(doc["generators"], "target.generators")):
        vec = _vector(g, f"target.generators[{k}]")
        if len(vec) != r:
            raise SchemaError(f"target.generators[{k}] must have length {r}", field=f"target.generators[{k}]")
        gens.append(vec)
    return AffineMonoid(r, tuple(gens))


def assignment_from_json(doc):
    """``{"vertices": {id: vector}, "edges": {id: vector}}`` to generator names."""
    _object(doc, "assignment", ("vertices",), ("edges",))
    out = {}
    for section, prefix in (("vertices", "v:"), ("edges", "l:")):
        block = doc.get(section, {})
        if not isinstance(block, dict):
            raise SchemaError(f"assignment.{section} must be an object", field=f"assignment.{section}")
        for ident, vec in block.items():
            where = f"assignment.{section}.{ident}"
            out[prefix + _ident(ident, where)] = _vector(vec, where)
    return out
