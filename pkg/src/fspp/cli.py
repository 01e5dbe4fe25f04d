"""Command-line interface."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .calculus import Granularity, Point, classify
from .csp import consistent, network_from, propagate_path, refine, unary_closure
from .errors import FsppError, MissingConstraintError, ScenarioError
from .grid import Connectivity, contour, fill_relation
from .io import parse_relation, parse_scenario, render_ascii, serialize_relation
from .reasoning import UnaryOp, compose, compose_bordered, neighbors, unary
from .relation import FsppRelation

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _granularity(args) -> Granularity:
    return Granularity(args.orientations, args.distances, args.base_length, args.ratio)


def _load_relation(g: Granularity, source: str) -> FsppRelation:
    """Read a relation from a JSON file path or an inline JSON string."""
    text = source
    path = Path(source)
    if not source.lstrip().startswith(("{", "[")) and path.exists():
        text = path.read_text()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, exc.lineno, exc.colno) from None
    return parse_relation(g, spec)


def _point(text: str) -> Point:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"points are given as x,y, got {text!r}") from None
    return Point(x, y)


def _emit(r: FsppRelation, title: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(serialize_relation(r)))
    else:
        print(render_ascii(r, title), end="")
        if r.flags:
            print(" flags: " + " ".join(r.flags))


# -- subcommands ---------------------------------------------------------------


def cmd_classify(args, g: Granularity) -> int:
    a, b, c = (_point(p) for p in (args.origin, args.relatum, args.referent))
    cl = classify(g, a, b, c)
    r = FsppRelation.from_classification(g, cl)
    _emit(r, "classification", args.json)
    return EXIT_OK


def cmd_compose(args, g: Granularity) -> int:
    r1, r2 = _load_relation(g, args.first), _load_relation(g, args.second)
    full = compose(r1, r2)
    if args.bordered:
        result = compose_bordered(r1, r2)
        _emit(result, "composition (bordered)", args.json)
        equal = result == full
        print(f"equal: {str(equal).lower()}")
        return EXIT_OK if equal else EXIT_VIOLATION
    _emit(full, "composition", args.json)
    return EXIT_OK


def cmd_unary(args, g: Granularity) -> int:
    r = _load_relation(g, args.relation)
    _emit(unary(UnaryOp(args.op), r), f"result of {args.op.upper()}", args.json)
    return EXIT_OK


def cmd_neighbors(args, g: Granularity) -> int:
    for c in sorted(neighbors(g, (args.dist, args.orient))):
        print(f"{c.dist} {c.orient}")
    return EXIT_OK


def cmd_trace(args, g: Granularity) -> int:
    r = _load_relation(g, args.relation)
    conn = Connectivity.FOUR if args.four else Connectivity.EIGHT
    _emit(contour(r, conn), "contour", args.json)
    return EXIT_OK


def cmd_fill(args, g: Granularity) -> int:
    r = _load_relation(g, args.relation)
    _emit(fill_relation(r), "filled", args.json)
    return EXIT_OK


def cmd_render(args, g: Granularity) -> int:
    r = _load_relation(g, args.relation)
    print(render_ascii(r, args.title), end="")
    return EXIT_OK


def cmd_propagate(args, g: Granularity) -> int:
    scenario = parse_scenario(Path(args.scenario).read_bytes(), default=g)
    net = network_from(scenario.granularity, scenario.constraints)
    net = refine(unary_closure(net))
    ok = consistent(net)
    print(f"constraints: {len(net.constraints)}")
    print(f"sweeps: {net.sweeps}")
    print(f"consistent: {str(ok).lower()}")
    for t in sorted(net.constraints, key=repr):
        r = net.constraints[t]
        if r.cell_count() < scenario.granularity.size:
            print(f"{' '.join(map(str, t))}: {r.cell_count()} cells {' '.join(r.flags)}".rstrip())
    for q in scenario.queries:
        path = q.get("path") if isinstance(q, dict) else None
        if not path:
            continue
        try:
            r = propagate_path(net, path)
        except MissingConstraintError as exc:
            print(f"path {' '.join(path)}: {exc}", file=sys.stderr)
            return EXIT_VIOLATION
        print(render_ascii(r, "path " + " ".join(path)), end="")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_oracle(args, g: Granularity) -> int:
    reports = oracle.run_all(g, args.samples, args.seed)
    for rep in reports:
        print(rep.line())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATION


def demo_relations(g: Granularity) -> dict[str, FsppRelation]:
    return {
        "a": FsppRelation.from_cells(g, [(3, 5), (3, 6), (4, 6)]),
        "b": FsppRelation.from_cells(g, [(15, 4)]),
        "c": FsppRelation(g, (1 << 58) | (1 << 59)),
    }


def demo_output(g: Granularity) -> str:
    """The fixture program: SC, composition, contour and bordered composition."""
    rel = demo_relations(g)
    a, b, c = rel["a"], rel["b"], rel["c"]
    parts = [render_ascii(a, "FSPP a"), render_ascii(b, "FSPP b"), render_ascii(c, "FSPP c")]
    parts.append("\n\n" + render_ascii(unary(UnaryOp.SC, b), "result of SC b"))
    d = compose(a, b)
    parts.append("\n\n" + render_ascii(d, "composition result 1"))
    e = compose(a, d)
    d_contour = contour(d)
    parts.append("\n\n" + render_ascii(d_contour, "contour of composition"))
    f = fill_relation(compose(a, d_contour))
    parts.append("\n\n" + render_ascii(e, "composition 2 (calculated without contour)"))
    parts.append("\n\n" + render_ascii(f, "composition 2 (calculated with contour)"))
    parts.append(f"\n e and f equal ? {int(e == f)}\n")
    parts.append("\n\n" + render_ascii(contour(f), "contour of composition"))
    return "".join(parts)


def cmd_demo(args, g: Granularity) -> int:
    print(demo_output(g), end="")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    def default(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--orientations", type=int, default=default(18), help="orientation sectors (even, >= 4)")
    p.add_argument("--distances", type=int, default=default(20), help="distance bands (>= 2)")
    p.add_argument("--base-length", type=float, default=default(0.10), help="base length L in meters")
    p.add_argument("--ratio", type=float, default=default(1.25), help="band growth ratio")
    p.add_argument("--seed", type=int, default=default(0), help="seed for all randomness")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fspp", description="Fine-grained qualitative point positions.")
    _global_flags(p, defaults=True)
    # the same flags are accepted after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def relation_cmd(name, func, help_text):
        sp = add(name, help=help_text)
        sp.add_argument("relation", help="relation JSON file or inline JSON")
        sp.add_argument("--json", action="store_true", help="print JSON instead of a grid")
        sp.set_defaults(func=func)
        return sp

    sp = add("classify", help="classify three points given as x,y")
    sp.add_argument("origin")
    sp.add_argument("relatum")
    sp.add_argument("referent")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = add("compose", help="compose two relations")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--bordered", action="store_true", help="compose borders only, then fill")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_compose)

    sp = relation_cmd("unary", cmd_unary, "apply a unary transformation")
    sp.add_argument("--op", required=True, choices=[op.value for op in UnaryOp])

    sp = add("neighbors", help="conceptual neighbours of a cell")
    sp.add_argument("dist", type=int)
    sp.add_argument("orient", type=int)
    sp.set_defaults(func=cmd_neighbors)

    sp = relation_cmd("trace", cmd_trace, "contour of a relation")
    sp.add_argument("--four", action="store_true", help="4-connected tracing")
    relation_cmd("fill", cmd_fill, "fill enclosed holes")
    sp = relation_cmd("render", cmd_render, "print the ASCII grid")
    sp.add_argument("--title", default="relation")

    sp = add("propagate", help="refine a JSON scenario network")
    sp.add_argument("scenario")
    sp.set_defaults(func=cmd_propagate)

    sp = add("oracle", help="run the sampling soundness suites")
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_oracle)

    sp = add("demo", help="run the fixture program")
    sp.set_defaults(func=cmd_demo)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        g = _granularity(args)
        return args.func(args, g)
    except (UsageError, ScenarioError, FsppError, IndexError, ValueError, OSError) as exc:
        print(f"fspp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
