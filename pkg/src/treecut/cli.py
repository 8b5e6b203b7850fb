"""
Command-line front end.

Exit codes: 0 yes / success, 1 no, 2 input or usage error, 3 resource
limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cuts import ResourceLimitExceeded
from .display import build_display_graph
from .elig import build_elig
from .oracle import OracleLimitExceeded, oracle_agreement, oracle_compatible
from .solver import DEFAULT_LIMIT, SCHEMA_VERSION, decide_agreement, decide_compatibility
from .tree import NewickError, Profile, parse_newick_many, serialize_newick

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2, 3
LIMIT_ENV = "TREECUT_LIMIT"


class UsageError(Exception):
    pass


def read_profile(paths) -> Profile:
    trees = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"{path}: {exc.strerror}") from None
        try:
            trees += parse_newick_many(text)
        except NewickError as exc:
            raise UsageError(f"{path}: {exc}") from None
    return Profile(tuple(trees))


def _limit(args) -> int:
    limit = args.limit
    if limit is None:
        env = os.environ.get(LIMIT_ENV)
        if env:
            try:
                limit = int(env)
            except ValueError:
                raise UsageError(f"{LIMIT_ENV} must be an integer, got {env!r}") from None
        else:
            limit = DEFAULT_LIMIT
    if limit < 4:
        raise UsageError("limit must be at least 4")
    return limit


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _decide(args, mode):
    profile = read_profile(args.inputs)
    if args.oracle:
        if args.witness:
            raise UsageError("--witness needs the cut solver; drop --oracle")
        find = oracle_agreement if mode == "agreement" else oracle_compatible
        return None, find(profile)
    find = decide_agreement if mode == "agreement" else decide_compatibility
    witness = find(profile, limit=_limit(args))
    return witness, witness.supertree if witness else None


def cmd_decide(args, mode) -> int:
    witness, tree = _decide(args, mode)
    answer = "YES" if tree is not None else "NO"
    if args.json:
        out = {"schema": SCHEMA_VERSION, "question": mode, "answer": answer}
        if tree is not None:
            out["supertree"] = serialize_newick(tree)
        if witness is not None:
            out["witness"] = witness.to_dict()
        print(json.dumps(out, indent=2))
    else:
        print(answer)
    if args.witness:
        if witness is not None:
            _write(args.witness, witness.to_json())
        else:
            print("no witness written: answer is NO", file=sys.stderr)
    return EXIT_YES if tree is not None else EXIT_NO


def cmd_supertree(args) -> int:
    mode = "agreement" if args.mode == "agree" else "compatibility"
    _, tree = _decide(args, mode)
    if tree is None:
        print(f"no {mode} supertree exists", file=sys.stderr)
        return EXIT_NO
    _write(args.output, serialize_newick(tree) + "\n")
    return EXIT_YES


def cmd_dot(args) -> int:
    g = build_display_graph(read_profile(args.inputs))
    text = g.to_dot()
    if args.elig:
        text += build_elig(g).to_dot()
    _write(args.output, text)
    return EXIT_YES


def cmd_selftest(args) -> int:
    from . import selftest

    return EXIT_YES if selftest.run(seed=args.seed, count=args.count) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treecut",
        description="Compatibility and agreement supertrees via minimal cuts of the display graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def inputs(p):
        p.add_argument("inputs", nargs="+", help="Newick files (one tree per file or several per file)")

    def solver_opts(p):
        p.add_argument("--oracle", action="store_true", help="use the brute-force oracle (<= 7 labels)")
        p.add_argument("--limit", type=int, default=None, help=f"max display-graph vertices (default {DEFAULT_LIMIT}, env {LIMIT_ENV})")

    for name, help_ in (("compat", "is the profile compatible?"), ("agree", "does the profile have an agreement supertree?")):
        p = sub.add_parser(name, help=help_)
        inputs(p)
        solver_opts(p)
        p.add_argument("--witness", metavar="PATH", help="write the witness JSON here")
        p.add_argument("--json", action="store_true", help="print a JSON result instead of YES/NO")

    p = sub.add_parser("supertree", help="print a compatible or agreement supertree in Newick")
    inputs(p)
    solver_opts(p)
    p.add_argument("--mode", choices=("compat", "agree"), default="compat")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(witness=None)

    p = sub.add_parser("dot", help="DOT rendering of the display graph")
    inputs(p)
    p.add_argument("--elig", action="store_true", help="also emit the edge label intersection graph")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("selftest", help="run the reference checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compat":
            return cmd_decide(args, "compatibility")
        if args.command == "agree":
            return cmd_decide(args, "agreement")
        if args.command == "supertree":
            return cmd_supertree(args)
        if args.command == "dot":
            return cmd_dot(args)
        return cmd_selftest(args)
    except UsageError as exc:
        print(f"treecut: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OracleLimitExceeded as exc:
        print(f"treecut: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ResourceLimitExceeded as exc:
        print(f"treecut: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
