"""Command-line entry point.

Subcommands: free-cat, free-monad, laws, check-universal, compose.
Exit codes: 0 all requested checks passed, 1 a law suite failed,
2 input error (bad file, bad flags, unknown reference).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import lawcheck, mnd
from .finset import FinSet
from .poly import ParseError as PolyParseError
from .poly import PolyInstance, Polynomial, compose_polys, free_poly_monad, parse_poly
from .span import Graph, ParseError as GraphParseError
from .span import Span, SpanInstance, compose_spans, free_category, parse_graph
from .span import _path_edges


class InputError(Exception):
    pass


def _load(path: str):
    """Read a fixture file; dispatch on the header line to the graph or
    polynomial parser.  Returns ("graph", Graph) or ("poly", Polynomial)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}")
    header = ""
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            header = line
            break
    try:
        if header == "graph":
            return "graph", parse_graph(text)
        if header == "poly":
            return "poly", parse_poly(text)
    except (GraphParseError, PolyParseError) as exc:
        raise InputError(f"{path}: {exc}")
    raise InputError(f"{path}: expected a 'graph' or 'poly' header, got {header!r}")


def _print_span(f: Span, out):
    for x in f.apex:
        print(f"  {x}: {f.left(x)} -> {f.right(x)}", file=out)


def _print_poly(p: Polynomial, out):
    for b in p.ops:
        slots = [e for e in p.slots if p.theta(e) == b]
        ins = " ".join(p.sigma(e) for e in slots)
        print(f"  op {b} [{ins}] -> {p.tau(b)}", file=out)


def _bool(b: bool) -> str:
    return "true" if b else "false"


# ---------------------------------------------------------------------------
# Subcommands


def cmd_free_cat(args, out) -> int:
    kind, g = _load(args.file)
    if kind != "graph":
        raise InputError(f"{args.file}: free-cat expects a graph file")
    cat, iota, exact = free_category(g, args.max_length)
    print("objects:", " ".join(g.nodes.elements), file=out)
    for p in cat.morphisms.apex:
        edges = _path_edges(p)
        seq = " ".join(edges) if edges else "(empty)"
        print(
            f"morphism {p}: {cat.morphisms.left(p)} -> {cat.morphisms.right(p)}"
            f"  [{seq}]",
            file=out,
        )
    if cat.mult is not None:
        from .span import _comp_projections

        two = cat.mult.top
        p1, p2 = _comp_projections(two)
        for x in two.apex:
            print(f"compose {p1(x)} ; {p2(x)} = {cat.mult.mid(x)}", file=out)
    else:
        lhs, rhs = cat.overflow
        print(f"composition: partial (overflow at {lhs!r} ; {rhs!r})", file=out)
    print(f"exact: {_bool(exact)}", file=out)
    return 0


def cmd_free_monad(args, out) -> int:
    kind, p = _load(args.file)
    if kind != "poly":
        raise InputError(f"{args.file}: free-monad expects a poly file")
    fm = free_poly_monad(p, args.max_depth)
    for b in fm.star.ops:
        print(f"tree {b}: arity {fm.star.arity(b)} -> {fm.star.tau(b)}", file=out)
    if fm.mult is not None:
        sample = _sample_graft(fm)
        if sample:
            comp, res = sample
            print(f"mu: {comp} -> {res}", file=out)
    else:
        print(f"multiplication: partial (overflow at {fm.overflow!r})", file=out)
    print(f"exact: {_bool(fm.exact)}", file=out)
    return 0


def _sample_graft(fm):
    """A nontrivial multiplication entry to display: prefer a composite
    whose result differs from both factors."""
    best = None
    for x in fm.mult.top.ops:
        res = fm.mult.phi(x)
        best = best or (x, res)
        if res not in x:
            return x, res
    return best


def cmd_laws(args, out) -> int:
    instance = SpanInstance() if args.instance == "span" else PolyInstance()
    sampler = lawcheck.sampler_for(instance, seed=args.seed, max_obj=args.size)
    reports = [
        lawcheck.check_double_axioms(sampler, trials=args.trials),
        lawcheck.check_framed(
            instance, args.size if args.instance == "span" else min(args.size, 2),
            seed=args.seed,
        ),
    ]
    code = 0
    for r in reports:
        print(r.render(), file=out)
        if not r.passed:
            code = 1
    return code


def cmd_check_universal(args, out) -> int:
    kind, payload = _load(args.file)
    s = args.target_size
    if kind == "graph":
        c = SpanInstance()
        e = mnd.Endomorphism(payload.nodes, payload.edges)
        targets = []
        for n in (1, 2):
            targets.extend(
                lawcheck.enumerate_span_monads(
                    FinSet(f"t{i}" for i in range(n)), max(s, n)
                )
            )
    else:
        c = PolyInstance()
        e = mnd.Endomorphism(payload.src, payload)
        targets = list(
            lawcheck.enumerate_poly_monads(c, payload.src, min(s, 2), 1)
        )
    try:
        bundle = mnd.free_monad_adjunction(c, e)
    except Exception as exc:
        raise InputError(f"{args.file}: free monad unavailable ({exc})")
    reports = [lawcheck.check_universal_property(c, bundle, targets, seed=args.seed)]
    alpha = mnd.identity_scenario(c, e, bundle.monad, bundle.unit_map)
    reports.append(
        lawcheck.check_theorem_pipeline(c, bundle, bundle, alpha, seed=args.seed)
    )
    code = 0
    for r in reports:
        print(r.render(), file=out)
        if not r.passed:
            code = 1
    return code


def cmd_compose(args, out) -> int:
    k1, f1 = _load(args.file1)
    k2, f2 = _load(args.file2)
    if k1 != k2:
        raise InputError("compose needs two files of the same kind")
    if k1 == "graph":
        a, b = f1.edges, f2.edges
        if a.tgt != b.src:
            raise InputError("node sets do not match for composition")
        comp = compose_spans(b, a)
        print(f"span: {comp.src.elements} -> {comp.tgt.elements}", file=out)
        _print_span(comp, out)
    else:
        if f1.tgt != f2.src:
            raise InputError(
                f"cannot compose: first target {f1.tgt} != second source {f2.src}"
            )
        comp = compose_polys(f2, f1)
        print(f"poly: {comp.src.elements} -> {comp.tgt.elements}", file=out)
        _print_poly(comp, out)
    return 0


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dblcat")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free-cat", help="free category on a graph")
    p.add_argument("file")
    p.add_argument("--max-length", type=int, default=16)
    p.set_defaults(fn=cmd_free_cat)

    p = sub.add_parser("free-monad", help="free monad on a polynomial")
    p.add_argument("file")
    p.add_argument("--max-depth", type=int, default=8)
    p.set_defaults(fn=cmd_free_monad)

    p = sub.add_parser("laws", help="double-category and framed law suites")
    p.add_argument("instance", choices=["span", "poly"])
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_laws)

    p = sub.add_parser("check-universal", help="free monad universal property")
    p.add_argument("file")
    p.add_argument("--target-size", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_check_universal)

    p = sub.add_parser("compose", help="composite of two spans/polynomials")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(fn=cmd_compose)
    return ap


def run(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
