"""Command-line front end. Exit codes: 0 success, 1 negative result, 2 usage/IO, 3 budget."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import formats
from .constructions import (
    CATALOG_NAMES,
    ConstructionError,
    block_semiring,
    catalog,
    flat_extension,
    hypergraph_semiring,
    word_semiring,
)
from .hypergraphs import (
    DEFAULT_HOM_BUDGET,
    HypergraphError,
    find_hom,
    kneser,
    recognize_block,
    strong_chromatic_number,
    strong_colouring,
    two_colourable,
    two_in_three_satisfiable,
)
from .semiring import (
    Exhausted,
    SemiringError,
    ValidationError,
    find_homomorphism,
    is_subdirect_embedding,
    is_subdirectly_irreducible,
)
from .terms import DEFAULT_VAR_CAP, ParseError, delta, parse_identity, parse_term, s7_satisfies, satisfies
from . import verify

OK, NEGATIVE, USAGE, EXHAUSTED = 0, 1, 2, 3


def _emit(obj, out: Optional[str] = None):
    text = formats.dump(obj, out)
    if out is None:
        print(text)


def _semiring(arg: str):
    """A catalog name or a path to a semiring JSON file."""
    if not os.path.exists(arg) and arg.lower() in {n.lower() for n in CATALOG_NAMES}:
        return catalog(arg)
    return formats.semiring_from_json(arg)


def _set_text(sets) -> str:
    inner = sorted((sorted(s) for s in sets), key=lambda s: (len(s), s))
    return "{" + ",".join("{" + ",".join(s) + "}" for s in inner) + "}"


# ---------------------------------------------------------------------------


def cmd_validate(args):
    try:
        S = formats.semiring_from_json(args.semiring)
    except ValidationError as exc:
        print(f"invalid: {exc}")
        return NEGATIVE
    print(f"valid ai-semiring with {S.size} elements")
    return OK


def cmd_check_id(args):
    S = _semiring(args.semiring)
    idt = parse_identity(args.identity)
    r = satisfies(S, idt, cap=args.cap, budget=args.budget)
    if r.holds:
        print("holds")
        return OK
    print("fails at " + json.dumps(r.witness, ensure_ascii=False))
    return NEGATIVE


def cmd_delta(args):
    print(_set_text(delta(parse_term(args.term))))
    return OK


def cmd_s7_check(args):
    holds = s7_satisfies(parse_identity(args.identity))
    print("holds" if holds else "fails")
    return OK if holds else NEGATIVE


def cmd_build(args):
    kind = args.kind
    if kind in ("sc", "mc"):
        if not args.inputs:
            raise _Usage("build sc|mc needs at least one word")
        S = word_semiring(args.inputs, commutative=not args.noncommutative, with_identity=kind == "mc")
        _emit(formats.semiring_to_json(S), args.output)
    elif kind == "kneser":
        if None in (args.r, args.n, args.k):
            raise _Usage("build kneser needs --r, --n and --k")
        _emit(formats.hypergraph_to_json(kneser(args.r, args.n, args.k)), args.output)
    else:
        if len(args.inputs) != 1:
            raise _Usage(f"build {kind} takes exactly one input file")
        path = args.inputs[0]
        if kind == "block":
            S = block_semiring(formats.system_from_json(path))
        elif kind == "hsr":
            S = hypergraph_semiring(formats.hypergraph_from_json(path))
        else:
            S = flat_extension(formats.groupoid_from_json(path))
        _emit(formats.semiring_to_json(S), args.output)
    return OK


def cmd_hom(args):
    G = formats.hypergraph_from_json(args.G)
    H = formats.hypergraph_from_json(args.H)
    phi = find_hom(G, H, args.budget, injective=args.injective)
    if phi is None:
        print("no homomorphism")
        return NEGATIVE
    _emit(phi)
    return OK


def cmd_colour(args):
    H = formats.hypergraph_from_json(args.H)
    if args.kind == "2col":
        col = two_colourable(H, args.budget)
    elif args.kind == "2in3":
        col = two_in_three_satisfiable(H, args.budget)
    elif args.colours is not None:
        col = strong_colouring(H, args.colours, args.budget)
    else:
        k = strong_chromatic_number(H, cap=H.n, budget=args.budget)
        col = strong_colouring(H, k, args.budget)
        print(f"strong chromatic number {k}", file=sys.stderr)
    if col is None:
        print("no colouring")
        return NEGATIVE
    _emit(col)
    return OK


def cmd_recognize_block(args):
    H = formats.hypergraph_from_json(args.H)
    rec = recognize_block(H, budget=args.budget)
    if not rec:
        print(f"not a block hypergraph: {rec.reason}")
        return NEGATIVE
    _emit(formats.system_to_json(rec.system), args.output)
    return OK


def cmd_si(args):
    S = _semiring(args.semiring)
    r = is_subdirectly_irreducible(S)
    if not r.irreducible:
        print("not subdirectly irreducible")
        return NEGATIVE
    _emit({"monolith": r.monolith.named_blocks(S)})
    return OK


def cmd_embed(args):
    A, B = _semiring(args.A), _semiring(args.B)
    f = find_homomorphism(A, B, require_injective=True, budget=args.budget)
    if f is None:
        print("no embedding")
        return NEGATIVE
    _emit(f.as_names())
    return OK


def cmd_subdirect(args):
    S, A, B = _semiring(args.S), _semiring(args.A), _semiring(args.B)
    f = is_subdirect_embedding(S, A, B, args.budget)
    if f is None:
        print("no subdirect embedding")
        return NEGATIVE
    _emit(f.as_names())
    return OK


def cmd_verify(args):
    names = [args.check] if args.check else verify.list_checks()
    if args.check and args.check not in verify.CHECKS:
        raise _Usage(f"unknown check {args.check!r}; known: {', '.join(verify.list_checks())}")
    results = [verify.run_check(n, args.budget, args.seed) for n in names]
    if args.json:
        print(verify.report_to_json(results))
    else:
        for r in results:
            print(f"{r.status.upper():9} {r.name} ({r.elapsed:.2f}s)")
            if r.status != "pass":
                print("          " + json.dumps(r.details, ensure_ascii=False))
    if all(r.passed for r in results):
        return OK
    if any(r.status == "fail" for r in results):
        return NEGATIVE
    return EXHAUSTED


# ---------------------------------------------------------------------------


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aisemi", description="Finite ai-semirings, identities and hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_budget(sp, default=None):
        sp.add_argument("--budget", type=int, default=default, help="search step limit")

    sp = sub.add_parser("validate", help="check the ai-semiring axioms of a semiring file")
    sp.add_argument("semiring")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("check-id", help="brute-force an identity on a finite semiring")
    sp.add_argument("--semiring", required=True, help="catalog name or semiring JSON path")
    sp.add_argument("identity")
    sp.add_argument("--cap", type=int, default=DEFAULT_VAR_CAP, help="maximum number of variables")
    add_budget(sp)
    sp.set_defaults(func=cmd_check_id)

    sp = sub.add_parser("delta", help="print the delta-sets of a term")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("s7-check", help="decide an identity on S7 syntactically")
    sp.add_argument("identity")
    sp.set_defaults(func=cmd_s7_check)

    sp = sub.add_parser("build", help="construct a semiring or Kneser hypergraph as JSON")
    sp.add_argument("kind", choices=["sc", "mc", "kneser", "block", "hsr", "flat"])
    sp.add_argument("inputs", nargs="*", help="words (sc, mc) or one input file")
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--noncommutative", action="store_true", help="S(W)/M(W) instead of S_c/M_c")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("hom", help="search for a hypergraph homomorphism G -> H")
    sp.add_argument("G")
    sp.add_argument("H")
    sp.add_argument("--injective", action="store_true")
    add_budget(sp, DEFAULT_HOM_BUDGET)
    sp.set_defaults(func=cmd_hom)

    sp = sub.add_parser("colour", help="2-colouring, 2-in-3 assignment or strong colouring")
    sp.add_argument("kind", choices=["2col", "2in3", "strong"])
    sp.add_argument("H")
    sp.add_argument("--colours", type=int)
    add_budget(sp)
    sp.set_defaults(func=cmd_colour)

    sp = sub.add_parser("recognize-block", help="decide whether H is a block hypergraph")
    sp.add_argument("H")
    sp.add_argument("-o", "--output")
    add_budget(sp)
    sp.set_defaults(func=cmd_recognize_block)

    sp = sub.add_parser("si", help="subdirect irreducibility and monolith")
    sp.add_argument("semiring")
    sp.set_defaults(func=cmd_si)

    sp = sub.add_parser("embed", help="injective homomorphism A -> B")
    sp.add_argument("A")
    sp.add_argument("B")
    add_budget(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("subdirect", help="subdirect embedding S -> A x B")
    sp.add_argument("S")
    sp.add_argument("A")
    sp.add_argument("B")
    add_budget(sp)
    sp.set_defaults(func=cmd_subdirect)

    sp = sub.add_parser("verify-paper", help="run the reproduction checks")
    sp.add_argument("--check")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    add_budget(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except Exhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    except (_Usage, ParseError, OSError, formats.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValidationError as exc:
        print(f"invalid semiring: {exc}", file=sys.stderr)
        return USAGE
    except (ConstructionError, HypergraphError, SemiringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
