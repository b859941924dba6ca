"""Command-line interface.

Exit codes: 0 embeddable (or success), 1 not embeddable, 2 invalid input or
usage, 3 internal error or decider/oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

from .decider import InternalError, decide
from .generators import clustered_instance, parse_shape, random_instance, toroidal_instance
from .instance import Instance, InstanceFormatError, InvalidInstance, require_valid
from .operations import OperationError, Rewriter
from .oracle import OracleLimits, Overflow, neuwirth_check, oracle_decide
from .reductions import (
    ClusteredInstance,
    Polyhedron,
    ReductionError,
    from_cplanarity,
    from_thickenability,
    load_any,
    to_thickenability,
)

EXIT_YES, EXIT_NO, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own; raising keeps main() the single exit point.
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_doc(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not JSON ({exc})") from exc


def _load_instance(path: str) -> Instance:
    inst = Instance.from_dict(_load_doc(path))
    return require_valid(inst)


def _limits(args) -> OracleLimits:
    n = getattr(args, "limit_combinations", None)
    return OracleLimits(max_combinations=n) if n else OracleLimits()


def _dot(inst: Instance) -> str:
    chunks = []
    for lg in inst.local_graphs():
        g = lg.graph
        lines = [f'graph "{lg.atom}" {{']
        for v in g.vertices():
            shape = "box" if v.is_virtual else "circle"
            lines.append(f'  "{v.kind}:{v.ref}" [shape={shape}];')
        for e in g.edges():
            a, b = g.ends(e)
            lines.append(f'  "{a.kind}:{a.ref}" -- "{b.kind}:{b.ref}" [label="{e}"];')
        lines.append("}")
        chunks.append("\n".join(lines) + "\n")
    return "".join(chunks)


def _emit_instance(inst: Instance, fmt: str) -> None:
    sys.stdout.write(_dot(inst) if fmt == "dot" else inst.to_json())


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_decide(args) -> int:
    inst = _load_instance(args.instance)
    result = decide(inst)
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(result.witness_jsonl())
    out = result.to_dict()
    code = EXIT_YES if result.embeddable else EXIT_NO
    if args.oracle:
        verdict = oracle_decide(inst, _limits(args))
        if isinstance(verdict, Overflow):
            out["oracle"] = {"overflow": verdict.reason}
        else:
            out["oracle"] = {"embeddable": verdict}
            if verdict != result.embeddable:
                code = EXIT_INTERNAL
    print(json.dumps(out, sort_keys=True))
    return code


def cmd_oracle(args) -> int:
    doc = _load_doc(args.instance)
    if load_any(doc) == "polyhedron":
        verdict = neuwirth_check(Polyhedron.from_dict(doc), _limits(args))
    else:
        verdict = oracle_decide(require_valid(Instance.from_dict(doc)), _limits(args))
    if isinstance(verdict, Overflow):
        print(json.dumps({"overflow": verdict.reason}, sort_keys=True))
        return EXIT_INTERNAL
    print(json.dumps({"embeddable": verdict}, sort_keys=True))
    return EXIT_YES if verdict else EXIT_NO


def cmd_normalize(args) -> int:
    inst = _load_instance(args.instance)
    _emit_instance(Rewriter(inst).normalize(), args.format)
    return EXIT_YES


def cmd_reduce(args) -> int:
    doc = _load_doc(args.instance)
    if args.direction == "to-thick":
        sys.stdout.write(to_thickenability(require_valid(Instance.from_dict(doc))).to_json())
    elif args.direction == "from-thick":
        _emit_instance(require_valid(from_thickenability(Polyhedron.from_dict(doc))), args.format)
    else:
        _emit_instance(require_valid(from_cplanarity(ClusteredInstance.from_dict(doc))), args.format)
    return EXIT_YES


def cmd_gen(args) -> int:
    if args.kind == "random":
        inst = random_instance(args.seed, vertices=args.vertices, atoms=args.atoms, density=args.density)
        _emit_instance(require_valid(inst), args.format)
    elif args.kind == "toroidal":
        _emit_instance(require_valid(toroidal_instance(args.windings, atoms=args.atoms)), args.format)
    else:
        ci = clustered_instance(args.seed, parse_shape(args.shape), vertices=args.vertices, density=args.density)
        ci.validate()
        sys.stdout.write(ci.to_json())
    return EXIT_YES


def cmd_export_dot(args) -> int:
    sys.stdout.write(_dot(_load_instance(args.instance)))
    return EXIT_YES


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="atomembed", description="Decide atomic embeddability of graph maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="run the polynomial-time decider")
    p.add_argument("instance", help="instance JSON file, or - for stdin")
    p.add_argument("--witness", metavar="PATH", help="write the rewrite trace as JSON lines")
    p.add_argument("--oracle", action="store_true", help="cross-check with the exhaustive oracle")
    p.add_argument("--limit-combinations", type=int, metavar="N")
    p.set_defaults(run=cmd_decide)

    p = sub.add_parser("oracle", help="exhaustive check of an instance or a polyhedron")
    p.add_argument("instance")
    p.add_argument("--limit-combinations", type=int, metavar="N")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("normalize", help="apply the automatic hooks and print the result")
    p.add_argument("instance")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("reduce", help="convert between problem formats")
    p.add_argument("direction", choices=("to-thick", "from-thick", "from-cplan"))
    p.add_argument("instance")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("gen", help="generate seeded instances")
    p.add_argument("kind", choices=("random", "cplan", "toroidal"))
    p.add_argument("windings", nargs="*", type=int, help="winding numbers (toroidal only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=int, default=6)
    p.add_argument("--atoms", type=int, default=3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--shape", default="_,0,0", help="cluster tree as parent indices, '_' for the root")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("export-dot", help="print one DOT graph per local graph")
    p.add_argument("instance")
    p.set_defaults(run=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen" and args.kind == "toroidal" and not args.windings:
            parser.error("gen toroidal needs at least one winding number")
        if args.command == "gen" and args.kind != "toroidal" and args.windings:
            parser.error("winding numbers are only accepted by gen toroidal")
        return args.run(args)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (InstanceFormatError, InvalidInstance, ReductionError, ValueError, OSError) as exc:
        if isinstance(exc, (InternalError, OperationError)):
            print(f"internal error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InternalError, OperationError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
