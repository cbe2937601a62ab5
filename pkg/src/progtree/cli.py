"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict (not total, not equivalent,
treeify failure), 2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus
from .equivalence import Equivalent, format_verdict, strongly_equivalent
from .executor import (
    check_totality_class, format_outcome, format_table, implemented_function, run,
)
from .oracle import ClassOracle, FamilyOracle
from .scheme import (
    SchemeValidationError, classify, export_dot, format_scheme, load_scheme,
)
from .structures import (
    FAMILIES, FormatError, StructureError, load_class, load_signature, load_structure, parse_family,
)
from .symbolic import format_path, path_of_run
from .treeify import (
    DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, counterexample_scheme, satisfiable_complete_paths, treeify,
)

FORMULA_FAMILIES = {"distinct": corpus.distinct_family}


class InputError(Exception):
    pass


def _resolve(root: Path, name: str, ext: str) -> Path:
    p = root / name
    if p.exists():
        return p
    q = root / f"{name}{ext}"
    if q.exists():
        return q
    raise InputError(f"file not found: {p} (also tried {q.name})")


def _class(args):
    if getattr(args, "family", None):
        if args.family not in FAMILIES:
            # a family spec file: 'family <name> max <bound>'
            path = _resolve(args.root, args.family, ".family")
            args.family, bound = parse_family(path.read_text(), path)
            args.bound = args.bound or bound
        if not args.bound:
            raise InputError("--family needs --bound")
        gen = FAMILIES.get(args.family)
        if gen is None:
            raise InputError(f"unknown family {args.family!r}; known: {', '.join(FAMILIES)}")
        return [gen(i) for i in range(1, args.bound + 1)], gen
    if getattr(args, "klass", None):
        return load_class(_resolve(args.root, args.klass, ".class")), None
    if getattr(args, "structure", None):
        return [load_structure(_resolve(args.root, args.structure, ".struct"))], None
    raise InputError("give --class, --structure, or --family with --bound")


def _write(root: Path, name: str | None, text: str):
    if name:
        (root / name).write_text(text)


def cmd_validate(args) -> int:
    for name in args.paths:
        path = _resolve(args.root, name, "")
        suffix = path.suffix
        if suffix == ".scheme":
            S = load_scheme(path)
            c = classify(S)
            print(f"{name}: valid scheme {S.name}, arity {S.n}, {len(S)} nodes, "
                  f"computation={str(c.is_computation).lower()} tree={str(c.is_tree).lower()} "
                  f"finite_tree={str(c.is_finite_tree).lower()}")
        elif suffix == ".struct":
            U = load_structure(path)
            print(f"{name}: valid structure {U.name}, {len(U.universe)} elements")
        elif suffix == ".class":
            K = load_class(path)
            print(f"{name}: valid class of {len(K)} structures: {', '.join(U.name for U in K)}")
        elif suffix == ".sig":
            sig = load_signature(path)
            print(f"{name}: valid signature {sig.name}")
        elif suffix == ".family":
            fam, bound = parse_family(path.read_text(), path)
            print(f"{name}: family {fam} up to {bound}")
        else:
            raise InputError(f"{name}: unknown file kind {suffix!r}")
    return 0


def cmd_run(args) -> int:
    S = load_scheme(_resolve(args.root, args.scheme, ".scheme"))
    U = load_structure(_resolve(args.root, args.structure, ".struct"))
    if args.table:
        sys.stdout.write(format_table(implemented_function(S, U)))
        return 0
    if args.input is None:
        raise InputError("--input is required unless --table is given")
    a = tuple(x.strip() for x in args.input.split(","))
    if len(a) != S.n:
        raise InputError(f"scheme takes {S.n} inputs, got {len(a)}")
    bad = [x for x in a if x not in U.universe]
    if bad:
        raise InputError(f"not in the universe of {U.name}: {', '.join(bad)}")
    out = run(S, U, a)
    if args.explain:
        sys.stdout.write(format_outcome(S, out).splitlines()[0] + "\n")
        sys.stdout.write(format_path(path_of_run(S, U, a)))
    else:
        sys.stdout.write(format_outcome(S, out))
    return 0


def cmd_totality(args) -> int:
    S = load_scheme(_resolve(args.root, args.scheme, ".scheme"))
    K, _ = _class(args)
    verdict = check_totality_class(S, K)
    if verdict:
        print(f"total over {', '.join(U.name for U in K)}")
        return 0
    print(f"not total: structure {verdict.structure}, input {','.join(verdict.witness)}")
    sys.stdout.write(format_outcome(S, verdict.outcome))
    return 1


def cmd_treeify(args) -> int:
    S = load_scheme(_resolve(args.root, args.scheme, ".scheme"))
    K, gen = _class(args)
    oracle = FamilyOracle(gen, args.bound, S.n) if gen else ClassOracle(K, S.n)
    report = treeify(S, oracle, max_nodes=args.max_nodes, max_depth=args.max_depth)
    text = report.format()
    _write(args.root, args.report, text)
    sys.stdout.write(text)
    if not report.ok:
        return 1
    out = args.out or f"{S.name}.tree.scheme"
    _write(args.root, out, format_scheme(report.result))
    _write(args.root, args.dot, export_dot(report.result))
    return 0


def cmd_equiv(args) -> int:
    A = load_scheme(_resolve(args.root, args.a, ".scheme"))
    B = load_scheme(_resolve(args.root, args.b, ".scheme"))
    K, _ = _class(args)
    verdict = strongly_equivalent(A, B, K)
    sys.stdout.write(format_verdict(verdict))
    return 0 if isinstance(verdict, Equivalent) else 1


def cmd_counterexample(args) -> int:
    K, _ = _class(args)
    make = FORMULA_FAMILIES.get(args.formulas)
    if make is None:
        raise InputError(f"unknown formula family {args.formulas!r}")
    sig = K[0].signature
    chain = counterexample_scheme(make(args.arity), args.prefix_len, args.arity, sig,
                                  name=f"{args.formulas}_chain{args.prefix_len}")
    total = check_totality_class(chain, K)
    report = treeify(chain, ClassOracle(K, chain.n), max_nodes=args.max_nodes, max_depth=args.max_depth)
    sat_paths = len(satisfiable_complete_paths(chain, K, 2 * args.prefix_len + 2))
    lines = [
        f"class: {', '.join(U.name for U in K)}",
        f"prefix_len: {args.prefix_len}",
        f"total: {'yes' if total else 'no'}",
        f"satisfiable_paths: {sat_paths}",
    ] + report.format().splitlines()
    text = "\n".join(lines) + "\n"
    out = args.out or f"{chain.name}.scheme"
    _write(args.root, out, format_scheme(chain))
    _write(args.root, args.dot, export_dot(chain))
    _write(args.root, args.report, text)
    if report.ok and args.tree_out:
        _write(args.root, args.tree_out, format_scheme(report.result))
    sys.stdout.write(text)
    return 0 if (total and report.ok) else 1


def cmd_export_dot(args) -> int:
    S = load_scheme(_resolve(args.root, args.scheme, ".scheme"))
    text = export_dot(S)
    if args.out:
        _write(args.root, args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="progtree", description=__doc__.splitlines()[0])
    parser.add_argument("--root", type=Path, default=Path("."), help="directory all paths are relative to")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized tooling")
    parser.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    parser.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    sub = parser.add_subparsers(dest="command", required=True)

    def class_flags(p):
        p.add_argument("--class", dest="klass", help="class manifest")
        p.add_argument("--structure", help="single structure file")
        p.add_argument("--family", help="structure family name (e.g. cyclic)")
        p.add_argument("--bound", type=int, help="number of family members to generate")

    p = sub.add_parser("validate", help="parse and validate files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a program on one input")
    p.add_argument("--scheme", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--input")
    p.add_argument("--explain", action="store_true", help="print the symbolic path record")
    p.add_argument("--table", action="store_true", help="print the implemented function as TSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("totality", help="decide totality over a finite class")
    p.add_argument("--scheme", required=True)
    class_flags(p)
    p.set_defaults(func=cmd_totality)

    p = sub.add_parser("treeify", help="build the pruned finite tree-scheme")
    p.add_argument("--scheme", required=True)
    class_flags(p)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.add_argument("--report")
    p.set_defaults(func=cmd_treeify)

    p = sub.add_parser("equiv", help="decide strong equivalence over a finite class")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    class_flags(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("counterexample", help="build and treeify a predicate chain")
    p.add_argument("--formulas", default="distinct", help="formula family (distinct)")
    p.add_argument("--prefix-len", type=int, required=True)
    p.add_argument("--arity", type=int, default=1)
    class_flags(p)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.add_argument("--report")
    p.add_argument("--tree-out")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("export-dot", help="render a scheme as DOT")
    p.add_argument("--scheme", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("max_nodes", "max_depth"):
        if getattr(args, flag) < 1:
            parser.error(f"--{flag.replace('_', '-')} must be positive")
    try:
        return args.func(args)
    except (InputError, FormatError, StructureError, SchemeValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
