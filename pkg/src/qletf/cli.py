"""Command-line interface: ``qletf check|eval|valuations|refute``.

Exit codes: 0 success (or valid so far), 1 negative verdict, 2 usage,
parse or validation error.
"""

import argparse
import sys

from .proof import PROFILES, check_derivation, get_profile, parse_proof
from .search import CapHit, Countermodel, SearchConfig, find_countermodel
from .semantics import (
    CapExceeded, EvaluationError, Evaluator, StructureError, choices_to_text, closure,
    enumerate_valuations, ground, is_consistent, parse_choices, parse_structure,
    structure_to_text,
)
from .sexpr import ParseError
from .syntax import parse_formula_list, parse_sentence, parse_signature, to_sexpr

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"{path}: cannot read file: {e.strerror or e}") from None


def _sentence(text, what):
    return parse_sentence(text, None, arities={}, source=what)


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="qletf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    c = sub.add_parser("check", help="check a natural-deduction proof file")
    c.add_argument("--proof", required=True, metavar="FILE")
    c.add_argument("--profile", default="qletf", choices=sorted(PROFILES))
    c.add_argument("--sig", metavar="FILE", help="signature file (default: inferred)")
    c.add_argument("--porcelain", action="store_true")

    e = sub.add_parser("eval", help="evaluate a sentence in a finite structure")
    e.add_argument("--structure", required=True, metavar="FILE")
    e.add_argument("--formula", required=True, metavar="SENTENCE")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--choices", metavar="FILE")
    g.add_argument("--all", action="store_true", help="evaluate under every valuation")
    e.add_argument("--max-choice-atoms", type=_positive, default=16, metavar="N")
    e.add_argument("--porcelain", action="store_true")

    v = sub.add_parser("valuations", help="list the valuations of a structure")
    v.add_argument("--structure", required=True, metavar="FILE")
    v.add_argument("--sentences", required=True, metavar="FILE")
    v.add_argument("--limit", type=_positive, default=None, metavar="N",
                   help="print at most N valuations")
    v.add_argument("--max-choice-atoms", type=_positive, default=16, metavar="N")
    v.add_argument("--porcelain", action="store_true")

    r = sub.add_parser("refute", help="search for a countermodel")
    r.add_argument("--premises", metavar="FILE", help="sentence-list file (default: none)")
    r.add_argument("--conclusion", required=True, metavar="SENTENCE")
    r.add_argument("--profile", default="qletf", choices=sorted(PROFILES))
    r.add_argument("--max-domain", type=_positive, default=2, metavar="N")
    r.add_argument("--max-structures", type=_positive, default=10_000_000, metavar="N")
    r.add_argument("--max-choice-atoms", type=_positive, default=16, metavar="N")
    r.add_argument("--jobs", type=_positive, default=1, metavar="N")
    r.add_argument("--porcelain", action="store_true")
    return p


def cmd_check(args, out):
    sig = parse_signature(_read(args.sig), source=args.sig) if args.sig else None
    d, sig = parse_proof(_read(args.proof), sig, source=args.proof)
    report = check_derivation(d, get_profile(args.profile), sig)
    print(report.porcelain() if args.porcelain else report.text(), file=out)
    return OK if report.accepted else NEGATIVE


def _structure(path):
    return parse_structure(_read(path), source=path)


def cmd_eval(args, out):
    s = _structure(args.structure)
    f = _sentence(args.formula, "--formula")
    g = ground(s, f)
    if args.all:
        rows = []
        for choices in enumerate_valuations(s, [f], args.max_choice_atoms):
            rows.append((choices, Evaluator(s, choices).value(g)))
        values = {v for _, v in rows}
        if len(values) == 1:
            v = values.pop()
            print(f"value:{v}\tforced:yes" if args.porcelain else f"forced {v}", file=out)
        else:
            for choices, v in rows:
                if args.porcelain:
                    print(f"value:{v}\tchoices:{choices_to_text(choices)}", file=out)
                else:
                    print(f"{v}  {choices_to_text(choices)}", file=out)
        return OK
    if args.choices:
        choices = parse_choices(_read(args.choices), source=args.choices)
        if not is_consistent(s, choices):
            raise UsageError(f"{args.choices}: choice assignment violates the classicality constraint")
    else:
        atoms = closure([f], s)
        if atoms:
            raise UsageError(f"--formula: value depends on {len(atoms)} choice atom(s); "
                             "pass --choices FILE or --all")
        choices = {}
    v = Evaluator(s, choices).value(g)
    print(f"value:{v}" if args.porcelain else str(v), file=out)
    return OK


def cmd_valuations(args, out):
    s = _structure(args.structure)
    sentences = parse_formula_list(_read(args.sentences), None, arities={}, source=args.sentences)
    n = 0
    truncated = False
    for choices in enumerate_valuations(s, sentences, args.max_choice_atoms):
        if args.limit is not None and n == args.limit:
            truncated = True
            break
        text = choices_to_text(choices)
        print(f"choices:{text}" if args.porcelain else text, file=out)
        n += 1
    if args.porcelain:
        print(f"count:{n}\ttruncated:{'yes' if truncated else 'no'}", file=out)
    else:
        print(f"{n} valuation(s)" + (" (limit reached)" if truncated else ""), file=out)
    return OK


def cmd_refute(args, out):
    arities = {}
    premises = []
    if args.premises:
        premises = parse_formula_list(_read(args.premises), None, arities=arities,
                                      source=args.premises)
    conclusion = parse_sentence(args.conclusion, None, arities=arities, source="--conclusion")
    cfg = SearchConfig(args.max_domain, args.max_structures, args.max_choice_atoms, args.profile)
    result = find_countermodel(premises, conclusion, cfg, jobs=args.jobs)
    if isinstance(result, Countermodel):
        _print_countermodel(result, premises, conclusion, args.porcelain, out)
        return NEGATIVE
    if isinstance(result, CapHit):
        if args.porcelain:
            print(f"verdict:cap\tcap:{result.cap}\tdomain:{result.domain_size}"
                  f"\tstructures:{result.structures_tried}", file=out)
        else:
            print(f"no countermodel found before the {result.cap} cap "
                  f"(domain size {result.domain_size}, {result.structures_tried} structures; "
                  f"{result.detail})", file=out)
        return OK
    if args.porcelain:
        print(f"verdict:exhausted\tdomain:{result.domains_tried}"
              f"\tstructures:{result.structures_tried}", file=out)
    else:
        print(f"no countermodel up to {result.domains_tried}", file=out)
    return OK


def _print_countermodel(cm, premises, conclusion, porcelain, out):
    st = structure_to_text(cm.structure)
    ch = choices_to_text(cm.choices)
    if porcelain:
        print(f"verdict:countermodel\tdomain:{cm.domain_size}\tindex:{cm.index}", file=out)
        print("structure:" + " ".join(st.split()), file=out)
        print("choices:" + ch, file=out)
        for p, v in zip(premises, cm.premise_values):
            print(f"premise:{to_sexpr(p)}\tvalue:{v}", file=out)
        print(f"conclusion:{to_sexpr(conclusion)}\tvalue:{cm.conclusion_value}", file=out)
        return
    print(f"countermodel at domain size {cm.domain_size} (structure {cm.index})", file=out)
    print(st, file=out)
    print(ch, file=out)
    for p, v in zip(premises, cm.premise_values):
        print(f"premise {to_sexpr(p)} = {v}", file=out)
    print(f"conclusion {to_sexpr(conclusion)} = {cm.conclusion_value}", file=out)


COMMANDS = {"check": cmd_check, "eval": cmd_eval, "valuations": cmd_valuations,
            "refute": cmd_refute}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, StructureError, EvaluationError, CapExceeded, UsageError,
            ValueError) as e:
        print(f"qletf {args.command}: error: {e}", file=err)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
