"""Command-line front end.

Exit codes: 0 ok, 1 semantic negative (counterexample found, sentence
false or not settled), 2 usage error, 3 validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import suites
from .products import FilterError, is_filter, is_ultrafilter, principal_filter, \
    reduced_product, direct_product, trivial_filter, ultraproduct
from .semantics import (NotTotalError, SearchLimitExceeded, eval_kleene, eval_total,
                        quasi_consequence_bounded, quasi_witness)
from .structures import PartialStructure, StructureError, relationalize, unknown_count
from .syntax import FormulaError, parse_sentence, render
from .textio import (FormatError, detect_kind, dump_structure, load_family, load_manifest,
                     load_sentences, load_structure)

OK, NEGATIVE, USAGE, INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg: str):
    print(f"error: {msg}", file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read file: {e.strerror}", path=path) from None


def _relational(s: PartialStructure) -> PartialStructure:
    return s if s.signature.is_relational else relationalize(s)[0]


def cmd_check(args) -> int:
    status = OK
    for path in args.paths:
        try:
            kind = detect_kind(_read(path))
            if kind == "structure":
                s = load_structure(path)
                _relational(s)
                print(f"{path}: ok: 1 structure, u={unknown_count(s)}")
            elif kind == "family":
                m = load_manifest(path)
                fam = load_family(m)
                for name, f in m.filters.items():
                    if not is_filter(f):
                        raise FormatError(f"filter {name} is not a filter", path=path)
                for name, u in m.ultrafilters.items():
                    if not is_ultrafilter(u):
                        raise FormatError(f"ultrafilter {name} is not an ultrafilter", path=path)
                print(f"{path}: ok: family of {len(fam.index)} factors, "
                      f"{len(m.filters)} filter(s), {len(m.ultrafilters)} ultrafilter(s)")
            else:
                sentences, sig = load_sentences(path)
                print(f"{path}: ok: {len(sentences)} sentence(s) over {sig}")
        except (FormatError, StructureError) as e:
            msg = str(e) if isinstance(e, FormatError) else f"{path}: {e}"
            print(msg, file=sys.stderr)
            status = INVALID
    return status


def cmd_eval(args) -> int:
    s = _relational(load_structure(args.structure))
    try:
        f = parse_sentence(args.sentence, s.signature)
    except FormulaError as e:
        raise UsageError(f"sentence: {e}") from None
    if args.mode == "total":
        try:
            verdict = eval_total(s, f)
        except NotTotalError:
            raise UsageError("mode 'total' needs a total structure") from None
        print("true" if verdict else "false")
        return OK if verdict else NEGATIVE
    if args.mode == "kleene":
        v = eval_kleene(s, f)
        print(v.value)
        return OK if v.value == "true" else NEGATIVE
    try:
        witness = quasi_witness(s, f, max_unknowns=args.max_unknowns)
    except SearchLimitExceeded as e:
        raise UsageError(f"{e}; raise --max-unknowns to search anyway") from None
    print("quasi-true" if witness is not None else "quasi-false")
    if witness is not None and args.witness:
        print("witness:")
        sys.stdout.write(dump_structure(witness))
    return OK if witness is not None else NEGATIVE


def _summary(s: PartialStructure) -> str:
    lines = [f"universe: {len(s.universe)} element(s)"]
    for name, r in s.relations.items():
        lines.append(f"{name}: +{len(r.pos)} -{len(r.neg)} 0{len(r.unk)}")
    return "\n".join(lines)


def cmd_product(args) -> int:
    m = load_manifest(args.manifest)
    fam = load_family(m)
    if args.filter and args.ultrafilter:
        raise UsageError("give at most one of --filter and --ultrafilter")
    try:
        if args.filter:
            if args.filter in m.filters:
                f = m.filters[args.filter]
            elif args.filter == "trivial":
                f = trivial_filter(fam.index)
            else:
                raise UsageError(f"no filter named {args.filter}")
            result = reduced_product(fam, f)
        elif args.ultrafilter:
            if args.ultrafilter in m.ultrafilters:
                u = m.ultrafilters[args.ultrafilter]
            elif args.ultrafilter in fam.index:
                u = principal_filter(fam.index, {args.ultrafilter})
            else:
                raise UsageError(f"no ultrafilter or index named {args.ultrafilter}")
            result = ultraproduct(fam, u)
        else:
            result = direct_product(fam)
    except FilterError as e:
        print(f"{args.manifest}: {e}", file=sys.stderr)
        return INVALID
    text = dump_structure(result)
    if args.output:
        Path(args.output).write_text(text)
        print(_summary(result))
    else:
        sys.stdout.write(text)
        print(_summary(result), file=sys.stderr)
    return OK


def cmd_consequence(args) -> int:
    gamma, sig = load_sentences(args.gamma)
    try:
        alpha = parse_sentence(args.alpha, sig)
    except FormulaError as e:
        raise UsageError(f"alpha: {e}") from None
    if args.max_size < 1:
        raise UsageError("--max-size must be at least 1")
    report = quasi_consequence_bounded(gamma, alpha, args.max_size, sig)
    if report is None:
        print(f"no counterexample up to size {args.max_size}")
        return OK
    print(report.describe())
    sys.stdout.write(dump_structure(report.structure))
    return NEGATIVE


def cmd_suite(args) -> int:
    results = suites.run_suite(args.name, cases=args.cases, seed=args.seed,
                               report=lambda r: print(r.line(), flush=True))
    failed = sum(not r.ok for r in results)
    print(f"{len(results)} checks, {failed} failed (seed {args.seed}, {args.cases} cases each)")
    return OK if failed == 0 else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partialmt",
                                description="Partial structures, quasi-truth and ultraproducts.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and validate structure, family or sentence files")
    c.add_argument("paths", nargs="+")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("eval", help="evaluate a sentence in a structure")
    e.add_argument("structure")
    e.add_argument("sentence")
    e.add_argument("--mode", choices=("total", "kleene", "quasi"), default="quasi")
    e.add_argument("--witness", action="store_true",
                   help="print a satisfying normal completion (quasi mode)")
    e.add_argument("--max-unknowns", type=int, default=20,
                   help="refuse quasi searches over more unknown atoms than this (default 20)")
    e.set_defaults(func=cmd_eval)

    pr = sub.add_parser("product", help="direct, reduced or ultra product of a family")
    pr.add_argument("manifest")
    pr.add_argument("--filter", help="filter name from the manifest, or 'trivial'")
    pr.add_argument("--ultrafilter", help="ultrafilter name from the manifest, or an index "
                                          "(principal ultrafilter)")
    pr.add_argument("-o", "--output", help="write the structure here instead of stdout")
    pr.set_defaults(func=cmd_product)

    q = sub.add_parser("consequence", help="bounded search for a quasi-consequence counterexample")
    q.add_argument("gamma", help="sentence file")
    q.add_argument("alpha", help="target sentence")
    q.add_argument("--max-size", type=int, default=2)
    q.set_defaults(func=cmd_consequence)

    s = sub.add_parser("suite", help="run the randomized metatheorem checks")
    s.add_argument("name", choices=suites.SUITES + ("all",))
    s.add_argument("--seed", default=suites.DEFAULT_SEED)
    s.add_argument("--cases", type=int, default=suites.DEFAULT_CASES)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        _err(str(e))
        return USAGE
    except (FormatError, StructureError) as e:
        print(str(e), file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
