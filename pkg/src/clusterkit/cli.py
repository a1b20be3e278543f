"""Command line interface.

Exit status is 0 on success, 1 on a domain error (any :class:`ClusterError`
or a failed ``verify``) and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import acceptance
from .associahedron import build_polytope
from .dbc import b_from_word, frozen_set, minor_text, minors, parse_word, tp_test
from .errors import ClusterError, MalformedInput
from .exchange import Seed, dumps_seed, find_symmetrizer, loads_seed, mutate_along, rank2_seed, validate_seed_matrix
from .graph import classify_finite_type, explore, graph_to_dict, graph_to_dot
from .polygon import b_from_triangulation, flip, flip_graph, parse_triangulation, snake
from .roots import RootSystem, count_clusters


def _json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{what} is not valid JSON: {exc}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise MalformedInput(f"expected a comma-separated list of integers, got {text!r}") from None


def _matrix(text: str) -> list[list[int]]:
    rows = _json(text, "matrix")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("matrix must be a JSON list of rows")
    try:
        return [[int(v) for v in r] for r in rows]
    except (TypeError, ValueError):
        raise MalformedInput("matrix entries must be integers") from None


def _start_seed(args) -> Seed:
    if args.seed:
        return loads_seed(_read(args.seed), require_full_rank=False)
    if args.matrix:
        rows = _matrix(args.matrix)
        n = len(rows[0]) if rows else 0
        return Seed.initial(validate_seed_matrix(rows, range(n), require_full_rank=False))
    if args.type:
        rs = RootSystem(args.type)
        return Seed.initial(validate_seed_matrix(rs.b_matrix(), range(rs.rank), require_full_rank=False))
    if args.rank2:
        b, c = _int_list(args.rank2)
        return rank2_seed(b, c)
    raise MalformedInput("give one of --seed, --matrix, --type or --rank2")


def cmd_mutate(args) -> int:
    seed = _start_seed(args)
    dirs = [k - 1 for k in _int_list(args.dirs)]
    bad = [k + 1 for k in dirs if k not in seed.ex]
    if bad:
        raise MalformedInput(f"directions {bad} are not exchangeable rows {[k + 1 for k in seed.ex]}")
    print(dumps_seed(mutate_along(seed, dirs), indent=None if args.format == "text" else 2))
    return 0


def cmd_explore(args) -> int:
    g = explore(_start_seed(args), max_seeds=args.max_seeds, max_depth=args.max_depth, jobs=args.jobs)
    if args.format == "dot":
        sys.stdout.write(graph_to_dot(g))
    elif args.format == "json":
        print(json.dumps(graph_to_dict(g), indent=2))
    else:
        print(f"seeds {len(g)}")
        print(f"edges {len(g.edges)}")
        print(f"complete {str(g.complete).lower()}")
    return 0


def cmd_classify(args) -> int:
    rows = _matrix(args.matrix)
    if any(len(r) != len(rows) for r in rows):
        raise MalformedInput("classify takes a square principal matrix")
    find_symmetrizer(rows)
    res = classify_finite_type(rows, max_matrices=args.max_matrices)
    print(json.dumps(res.to_dict(), indent=2) if args.format == "json" else str(res))
    return 0


def cmd_count(args) -> int:
    print(count_clusters(RootSystem(args.type_label)))
    return 0


def cmd_clusters(args) -> int:
    rs = RootSystem(args.type_label)
    clusters = rs.clusters()
    if args.format == "json":
        print(json.dumps([[list(a) for a in c] for c in clusters]))
    else:
        for c in clusters:
            print(" ".join("(" + ",".join(map(str, a)) + ")" for a in c))
    return 0


def cmd_polytope(args) -> int:
    poly = build_polytope(RootSystem(args.type_label))
    if args.format == "json":
        print(json.dumps(poly.to_dict(), indent=2))
    elif args.format == "dot":
        sys.stdout.write(poly.to_dot())
    else:
        print("H-representation")
        sys.stdout.write(poly.h_rep())
        print("V-representation")
        sys.stdout.write(poly.v_rep())
    return 0


def cmd_triangulate(args) -> int:
    if args.catalan is not None:
        nodes, edges = flip_graph(args.catalan)
        print(f"triangulations {len(nodes)}")
        print(f"flips {len(edges)}")
        return 0
    t = parse_triangulation(args.triangulation) if args.triangulation else snake(args.snake or 1)
    for k in _int_list(args.flip or ""):
        t = flip(t, k - 1)
    b = b_from_triangulation(t)
    if args.format == "json":
        print(json.dumps({"triangulation": t.to_text(), "matrix": b.rows()}))
    else:
        print(t.to_text())
        for row in b.rows():
            print(" ".join(f"{v:2d}" for v in row))
    return 0


def cmd_dbc(args) -> int:
    w = parse_word(args.word, args.rank)
    fs = [minor_text(m) for m in minors(w)]
    frozen = sorted(minor_text(m) for m in frozen_set(w))
    b = b_from_word(w)
    if args.format == "json":
        print(json.dumps({"minors": fs, "ex": list(w.ex), "frozen": frozen, "matrix": b.rows()}))
    else:
        print("minors " + " ".join(fs))
        print("ex " + " ".join(map(str, w.ex)))
        print("frozen " + " ".join(frozen))
        print("matrix " + json.dumps(b.rows()))
    return 0


def cmd_tp_check(args) -> int:
    rows = _json(args.matrix, "matrix")
    try:
        x = [[Fraction(str(v)) for v in r] for r in rows]
    except (TypeError, ValueError, ZeroDivisionError):
        raise MalformedInput("matrix entries must be rationals such as 3 or \"1/2\"") from None
    print(str(tp_test(parse_word(args.word, args.rank), x)).lower())
    return 0


def cmd_verify(args) -> int:
    numbers = _int_list(args.criteria) if args.criteria else None
    ok = acceptance.run(numbers, out=lambda line: print(line, flush=True), rand_seed=args.rand_seed)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--rand-seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for exploration")

    start = argparse.ArgumentParser(add_help=False)
    start.add_argument("--seed", help="JSON seed file ('-' for stdin)")
    start.add_argument("--matrix", help="JSON matrix; its first n rows are exchangeable")
    start.add_argument("--type", help="distinguished seed of a finite type, e.g. D4")
    start.add_argument("--rank2", help="b,c for the matrix [[0,b],[-c,0]]")

    p = argparse.ArgumentParser(prog="clusterkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mutate", parents=[common, start], help="mutate a seed along directions")
    s.add_argument("--dirs", required=True, help="comma-separated 1-based directions")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("explore", parents=[common, start], help="exchange graph")
    s.add_argument("--max-seeds", type=int)
    s.add_argument("--max-depth", type=int)
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("classify", parents=[common], help="finite type test for a principal matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--max-matrices", type=int, default=20000)
    s.set_defaults(func=cmd_classify)

    for name, func, help_ in [("count", cmd_count, "number of clusters"),
                              ("clusters", cmd_clusters, "list clusters of almost positive roots"),
                              ("polytope", cmd_polytope, "generalized associahedron")]:
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("type_label", metavar="TYPE")
        s.set_defaults(func=func)

    s = sub.add_parser("triangulate", parents=[common], help="polygon model")
    s.add_argument("triangulation", nargs="?", help='e.g. "3; d1=[1,5]; d2=[1,4]; d3=[2,4]"')
    s.add_argument("--snake", type=int, help="start from the snake triangulation of rank n")
    s.add_argument("--flip", help="comma-separated diagonal labels to flip in order")
    s.add_argument("--catalan", type=int, metavar="N", help="count triangulations and flips of the (N+3)-gon")
    s.set_defaults(func=cmd_triangulate)

    s = sub.add_parser("dbc", parents=[common], help="seed of a double Bruhat cell from a word")
    s.add_argument("word", help="comma-separated letters, e.g. 1,2,1,2,1,-1,-2,-1")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_dbc)

    s = sub.add_parser("tp-check", parents=[common], help="total positivity test by the minors of a word")
    s.add_argument("--word", required=True)
    s.add_argument("--matrix", required=True, help="JSON rows of rationals")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_tp_check)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.rand_seed)
    try:
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ClusterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
