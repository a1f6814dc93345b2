"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal error.
"""

import argparse
import sys

from . import enumeration
from .errors import InternalInvariantError, LogMapError
from .graph import (
    SpecializationSpec,
    associated_monoid,
    is_admissible,
    minimality_check,
    specialize,
)
from .io import (
    assignment_from_json,
    dual_graph_from_json,
    dumps,
    graph_from_json,
    graph_to_json,
    load_json,
    monoid_from_json,
)

OK, NEGATIVE, INPUT_ERROR, INTERNAL_ERROR = 0, 1, 2, 3


def _read(path, label):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {label} {path}: {exc.strerror}") from None
    return load_json(text, source=path)


class _InputError(LogMapError):
    code = "InputError"


def _id_list(text):
    return frozenset(x.strip() for x in text.split(",") if x.strip()) if text else frozenset()


def cmd_monoid(args):
    A = associated_monoid(graph_from_json(_read(args.input, "input")))
    return OK, A.to_json()


def cmd_admissible(args):
    G = graph_from_json(_read(args.input, "input"))
    verdict = is_admissible(G, strict_degeneracy=args.strict_degeneracy)
    report = {"admissible": verdict.admissible, "reason": verdict.reason}
    return (OK if verdict else NEGATIVE), report


def cmd_enumerate(args):
    data = dual_graph_from_json(_read(args.input, "input"))
    limits = enumeration.EnumerationLimits(args.max_solutions, args.max_contact)
    result = enumeration.enumerate(data, limits)
    report = {
        "solutions": [graph_to_json(G) for G in result.graphs],
        "count": len(result.graphs),
        "complete": result.complete,
        "reason": result.reason,
    }
    return (OK if result.complete else NEGATIVE), report


def cmd_specialize(args):
    G = graph_from_json(_read(args.input, "input"))
    spec = SpecializationSpec(_id_list(args.contract), _id_list(args.vanish))
    s = specialize(G, spec)
    images = {name: list(vec) for name, vec in s.morphism.generator_images.items()}
    report = {
        "graph": graph_to_json(s.graph),
        "monoid": associated_monoid(s.graph).to_json(),
        "morphism": {
            "matrix": [list(row) for row in s.morphism.matrix],
            "generator_images": images,
        },
        "coherent": s.coherent,
    }
    if not s.coherent:
        raise InternalInvariantError(
            "the face quotient is not isomorphic to the monoid of the specialized graph"
        )
    return OK, report


def cmd_minimal(args):
    G = graph_from_json(_read(args.input, "input"))
    target = monoid_from_json(_read(args.target, "target"))
    assignment = assignment_from_json(_read(args.assignment, "assignment"))
    minimal = minimality_check(G, target, assignment)
    return (OK if minimal else NEGATIVE), {"minimal": minimal}


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="logmap",
        description="Monoids, admissibility, specialization and enumeration of marked graphs.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-i", "--input", default="-", help="input JSON file (default: stdin)")
        p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")
        p.set_defaults(func=func)
        return p

    verb("monoid", cmd_monoid, "associated monoid of a marked graph")
    p = verb("admissible", cmd_admissible, "admissibility verdict with reason")
    p.add_argument("--strict-degeneracy", action="store_true",
                   help="also require nonzero degeneracy at every degenerate vertex")
    p = verb("enumerate", cmd_enumerate, "all admissible marked graphs over a dual graph")
    p.add_argument("--max-solutions", type=_positive, default=10000)
    p.add_argument("--max-contact", type=_positive, default=None)
    p = verb("specialize", cmd_specialize, "contract edges and mark vertices nondegenerate")
    p.add_argument("--contract", default="", help="comma-separated edge ids")
    p.add_argument("--vanish", default="", help="comma-separated vertex ids")
    p = verb("minimal", cmd_minimal, "is the canonical map to a target monoid an isomorphism")
    p.add_argument("--target", required=True, help='JSON {"rank": r, "generators": [...]}')
    p.add_argument("--assignment", required=True,
                   help='JSON {"vertices": {id: vector}, "edges": {id: vector}}')
    return parser


def _emit(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, report = args.func(args)
    except InternalInvariantError as exc:
        print(f"logmap: internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except LogMapError as exc:
        print(f"logmap: {exc.code}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except Exception as exc:  # anything unexpected is a bug, not bad input
        print(f"logmap: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    try:
        _emit(dumps(report), args.output)
    except OSError as exc:
        print(f"logmap: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
        return INPUT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
