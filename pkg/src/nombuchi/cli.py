"""Command-line driver.

Exit codes: 0 = success / property holds, 1 = property fails (the report
carries a counterexample when there is one), 2 = usage, parse, or
validation errors.  Reports are byte-deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from nombuchi.decide import (
    bar_equivalence,
    bar_inclusion,
    bar_member,
    data_inclusion,
    data_member_global,
    data_member_local,
    render_inclusion_report,
)
from nombuchi.nominal import NameTable, parse_word, print_word
from nombuchi.restriction import (
    choose_name_set,
    print_finite,
    restrict_literal,
    restrict_name_dropped,
)
from nombuchi.rnna import (
    MullerRegisterAutomaton,
    accepts_literal_lasso,
    degree,
    muller_to_buchi,
    parse_automaton,
    print_automaton,
    validate,
)


class _Failure(Exception):
    """An input problem that should surface as exit status 2."""


def _load_automaton(path: str, table: NameTable):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise _Failure(f"{path}: {e.strerror or e}")
    try:
        return parse_automaton(text, table)
    except ValueError as e:
        raise _Failure(f"{path}: {e}")


def _load_checked(path: str, table: NameTable):
    A = _load_automaton(path, table)
    problems = validate(A)
    if problems:
        raise _Failure("\n".join(f"{path}: {p}" for p in problems))
    return A


def _load_word(args, table: NameTable):
    if args.word_file is not None:
        if args.word is not None:
            raise _Failure("pass the word inline or via --word-file, not both")
        try:
            text = Path(args.word_file).read_text()
        except OSError as e:
            raise _Failure(f"{args.word_file}: {e.strerror or e}")
    elif args.word is not None:
        text = args.word
    else:
        raise _Failure("no word given (inline argument or --word-file)")
    try:
        return parse_word(text, table)
    except ValueError as e:
        raise _Failure(f"bad word: {e}")


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    table = NameTable()
    A = _load_automaton(args.automaton, table)
    problems = validate(A)
    if problems:
        for p in problems:
            print(f"{args.automaton}: {p}")
        return 2
    print("ok")
    return 0


def _cmd_degree(args) -> int:
    A = _load_checked(args.automaton, NameTable())
    print(f"degree: {degree(A)}")
    print(f"controls: {len(A.controls)}")
    return 0


def _cmd_member(args) -> int:
    table = NameTable()
    A = _load_checked(args.automaton, table)
    w = _load_word(args, table)
    check = {
        "literal": accepts_literal_lasso,
        "bar": bar_member,
        "data-local": data_member_local,
        "data-global": data_member_global,
    }[args.semantics]
    try:
        verdict = check(A, w)
    except ValueError as e:
        raise _Failure(str(e))
    print(f"{args.semantics} member: {'yes' if verdict else 'no'}")
    print(f"word: {print_word(w, table)}")
    return 0 if verdict else 1


def _cmd_include(args) -> int:
    table = NameTable()
    A = _load_checked(args.left, table)
    B = _load_checked(args.right, table)
    run = bar_inclusion if args.semantics == "bar" else data_inclusion
    v = run(A, B, table)
    print(render_inclusion_report(v, table))
    return 0 if v.holds else 1


def _cmd_equiv(args) -> int:
    table = NameTable()
    A = _load_checked(args.left, table)
    B = _load_checked(args.right, table)
    holds, direction, verdict = bar_equivalence(A, B, table)
    print(f"bar equivalence: {'holds' if holds else 'fails'}")
    if holds:
        return 0
    print(f"failing direction: {direction}")
    print(render_inclusion_report(verdict, table))
    return 1


def _cmd_muller2buchi(args) -> int:
    table = NameTable()
    M = _load_checked(args.automaton, table)
    if not isinstance(M, MullerRegisterAutomaton):
        raise _Failure(f"{args.automaton}: no accept {{ ... }} family to convert")
    _emit(args, print_automaton(muller_to_buchi(M), table))
    return 0


def _cmd_emit_finite(args) -> int:
    table = NameTable()
    A = _load_checked(args.automaton, table)
    S = choose_name_set(A)
    build = restrict_literal if args.semantics == "literal" else restrict_name_dropped
    try:
        B = build(A, S, table)
    except ValueError as e:
        raise _Failure(str(e))
    _emit(args, print_finite(B, table))
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nombuchi",
        description="Register automata over infinite words with binding letters.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an automaton file")
    p.add_argument("automaton")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("degree", help="report the register degree")
    p.add_argument("automaton")
    p.set_defaults(fn=_cmd_degree)

    p = sub.add_parser("member", help="test one ultimately periodic word")
    p.add_argument(
        "--semantics",
        choices=["literal", "bar", "data-local", "data-global"],
        default="literal",
    )
    p.add_argument("automaton")
    p.add_argument("word", nargs="?", help="inline word, e.g. '|a ; a'")
    p.add_argument("--word-file", help="file holding the word instead")
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("include", help="decide language inclusion")
    p.add_argument("--semantics", choices=["bar", "data"], default="bar")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=_cmd_include)

    p = sub.add_parser("equiv", help="decide language equivalence")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("muller2buchi", help="expand an accept-family automaton")
    p.add_argument("automaton")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_muller2buchi)

    p = sub.add_parser("emit-finite", help="write the finite restriction")
    p.add_argument("--semantics", choices=["literal", "bar"], default="literal")
    p.add_argument("automaton")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_emit_finite)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except _Failure as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
