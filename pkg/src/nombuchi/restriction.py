"""Finite Büchi automata over a pinned name budget.

A register automaton holding at most m names at a time can be compared to
others on words drawn from just m+1 concrete names; this module builds the
classical finite automata for that restricted alphabet, both for the literal
language and for the lossy (alpha-closed) one, plus the downward closure
used for data-language comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from nombuchi.dropping import initial_dropped, label, nd_final, nd_successors
from nombuchi.nominal import BarLetter, Name, NameTable, fresh_name, parse_letter, print_letter
from nombuchi.rnna import (
    ParseError,
    RegisterAutomaton,
    concrete_successors,
    degree,
    validate,
)


@dataclass(frozen=True)
class FiniteBuchi:
    """States are 0..n-1; `labels` gives a printable unique id per state."""

    labels: tuple[str, ...]
    alphabet: tuple[BarLetter, ...]
    transitions: tuple[tuple[int, BarLetter, int], ...]
    initial: int
    finals: frozenset[int]

    @property
    def num_states(self) -> int:
        return len(self.labels)

    @cached_property
    def _succ(self):
        out: dict = {}
        for (p, l, q) in self.transitions:
            out.setdefault((p, l), set()).add(q)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    def succ(self, state: int, letter: BarLetter) -> tuple[int, ...]:
        return self._succ.get((state, letter), ())


def make_finite(labels, alphabet, transitions, initial, finals) -> FiniteBuchi:
    """Normalize field order so equal automata compare equal."""
    return FiniteBuchi(
        tuple(labels),
        tuple(sorted(set(alphabet))),
        tuple(sorted(set(transitions))),
        initial,
        frozenset(finals),
    )


def choose_name_set(A: RegisterAutomaton) -> tuple[Name, ...]:
    """The initial support (in register order) padded with least unused
    names up to degree+1 members."""
    S = list(A.initial_assignment)
    while len(S) < degree(A) + 1:
        S.append(fresh_name(set(S)))
    return tuple(S)


def _state_key(q):
    return (q.control, tuple(-1 if n is None else n.id for n in q.assignment))


def _restrict(A, S, table, start, step, final):
    problems = validate(A)
    if problems:
        raise ValueError("invalid automaton: " + "; ".join(problems))
    if not set(A.initial_assignment) <= set(S):
        raise ValueError("initial support not contained in the chosen name set")
    if table is None:
        table = NameTable()
    alphabet = tuple(sorted(BarLetter(bar, n) for n in set(S) for bar in (False, True)))
    index = {start: 0}
    order = [start]
    transitions = set()
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for letter in alphabet:
            for s in sorted(step(q, letter), key=_state_key):
                if s not in index:
                    index[s] = len(order)
                    order.append(s)
                transitions.add((index[q], letter, index[s]))
    labels = tuple(label(q, table) for q in order)
    finals = frozenset(j for j, q in enumerate(order) if final(q))
    return make_finite(labels, alphabet, transitions, 0, finals)


def restrict_literal(A: RegisterAutomaton, S, table: NameTable | None = None) -> FiniteBuchi:
    return _restrict(
        A,
        S,
        table,
        A.initial_state,
        lambda q, l: concrete_successors(A, q, l),
        lambda q: A.control(q.control).final,
    )


def restrict_name_dropped(A: RegisterAutomaton, S, table: NameTable | None = None) -> FiniteBuchi:
    return _restrict(
        A,
        S,
        table,
        initial_dropped(A),
        lambda q, l: nd_successors(A, q, l),
        lambda q: nd_final(A, q),
    )


def down_closure(B: FiniteBuchi) -> FiniteBuchi:
    """Accept everything below L(B): every bar edge also fires on the plain
    letter, so plain positions of a word may match barred positions of some
    word above it."""
    extra = {
        (p, BarLetter(False, l.name), q) for (p, l, q) in B.transitions if l.bar
    }
    alphabet = set(B.alphabet) | {l for (_, l, _) in extra}
    return make_finite(
        B.labels, alphabet, set(B.transitions) | extra, B.initial, B.finals
    )


# ---- text format ----


def print_finite(B: FiniteBuchi, table: NameTable | None = None) -> str:
    if table is None:
        table = NameTable()
    lines = ["fba"]
    if B.alphabet:
        lines.append("alphabet " + " ".join(print_letter(l, table) for l in B.alphabet))
    for i, lab in enumerate(B.labels):
        flags = ("" if i not in B.finals else " final") + ("" if i != B.initial else " initial")
        lines.append(f"state {lab}{flags}")
    for (p, l, q) in B.transitions:
        lines.append(f"edge {B.labels[p]} {print_letter(l, table)} {B.labels[q]}")
    return "\n".join(lines) + "\n"


def parse_finite(text: str, table: NameTable | None = None) -> FiniteBuchi:
    if table is None:
        table = NameTable()
    labels: list[str] = []
    index: dict[str, int] = {}
    finals = set()
    initial = None
    alphabet: set[BarLetter] = set()
    transitions = set()
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not seen_header:
            if toks != ["fba"]:
                raise ParseError(lineno, "expected the fba header line")
            seen_header = True
            continue
        head = toks[0]
        if head == "alphabet":
            for t in toks[1:]:
                alphabet.add(parse_letter(t, table))
        elif head == "state":
            if len(toks) < 2:
                raise ParseError(lineno, "want: state <id> [final] [initial]")
            sid = toks[1]
            if sid in index:
                raise ParseError(lineno, f"duplicate state {sid}")
            index[sid] = len(labels)
            labels.append(sid)
            for flag in toks[2:]:
                if flag == "final":
                    finals.add(index[sid])
                elif flag == "initial":
                    if initial is not None:
                        raise ParseError(lineno, "second initial state")
                    initial = index[sid]
                else:
                    raise ParseError(lineno, f"unknown state flag {flag}")
        elif head == "edge":
            if len(toks) != 4:
                raise ParseError(lineno, "want: edge <src> <letter> <dst>")
            if toks[1] not in index or toks[3] not in index:
                raise ParseError(lineno, "edge endpoint not declared")
            letter = parse_letter(toks[2], table)
            alphabet.add(letter)
            transitions.add((index[toks[1]], letter, index[toks[3]]))
        else:
            raise ParseError(lineno, f"unknown directive {head}")
    if not seen_header:
        raise ParseError(0, "empty input")
    if initial is None:
        raise ParseError(0, "no initial state")
    return make_finite(labels, alphabet, transitions, initial, finals)
