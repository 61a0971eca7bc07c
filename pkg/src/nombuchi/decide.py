"""Top-level decision procedures over register automata.

Inclusion questions are answered by restricting both automata to a fixed
name budget (the left automaton literally, the right one through its lossy
alpha-closure, down-closed for data comparisons) and running classical
Büchi inclusion on the finite results.  Membership questions run directly
on the lossy transition system, no finite automaton needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from nombuchi.buchi import includes
from nombuchi.dropping import initial_dropped, nd_accepts_literal_lasso, nd_final, nd_successors
from nombuchi.graphs import has_cycle_through, reachable
from nombuchi.nominal import BarLetter, LassoWord, Name, NameTable, fresh_name, names_of, print_word
from nombuchi.rnna import RegisterAutomaton, validate
from nombuchi.restriction import (
    choose_name_set,
    down_closure,
    restrict_literal,
    restrict_name_dropped,
)


@dataclass(frozen=True)
class InclusionVerdict:
    holds: bool
    counterexample: LassoWord | None
    kind: str  # "bar" or "data"
    name_set: tuple[Name, ...]
    sizes: tuple[tuple[str, int], ...]


def _validated(A: RegisterAutomaton, side: str):
    problems = validate(A)
    if problems:
        raise ValueError(f"invalid {side} automaton: " + "; ".join(problems))


def bar_inclusion(A, B, table: NameTable | None = None) -> InclusionVerdict:
    """Is every bar string (up to alpha-equivalence) of A also one of B?"""
    _validated(A, "left")
    _validated(B, "right")
    S = choose_name_set(A)
    left = restrict_literal(A, S, table)
    right = restrict_name_dropped(B, S, table)
    stats: dict = {}
    ok, wit = includes(left, right, stats)
    return InclusionVerdict(ok, wit, "bar", S, tuple(sorted(stats.items())))


def data_inclusion(A, B, table: NameTable | None = None) -> InclusionVerdict:
    """Is every data word of A also a data word of B?  Same reduction as
    bar_inclusion with the right side closed downwards (a plain letter of
    the left word may be matched by a fresh allocation on the right)."""
    _validated(A, "left")
    _validated(B, "right")
    S = choose_name_set(A)
    left = restrict_literal(A, S, table)
    right = down_closure(restrict_name_dropped(B, S, table))
    stats: dict = {}
    ok, wit = includes(left, right, stats)
    return InclusionVerdict(ok, wit, "data", S, tuple(sorted(stats.items())))


def bar_equivalence(A, B, table: NameTable | None = None):
    """(holds, failing_direction, verdict) — the failing direction is
    "left-to-right" or "right-to-left"; both None when equivalent."""
    fwd = bar_inclusion(A, B, table)
    if not fwd.holds:
        return False, "left-to-right", fwd
    back = bar_inclusion(B, A, table)
    if not back.holds:
        return False, "right-to-left", back
    return True, None, None


def bar_member(A, w: LassoWord) -> bool:
    """Is the alpha-class of w in the bar language of A?"""
    return nd_accepts_literal_lasso(A, w)


def _check_data(u: LassoWord):
    if any(l.bar for l in u.spine + u.cycle):
        raise ValueError("data lasso must not contain bar letters")


def data_member_local(A, u: LassoWord) -> bool:
    """Is the name sequence u a data word of A (letters may be locally
    fresh)?  Each position of u may be read plain or as an allocation, so
    accepting paths of this product cover every bar placement, periodic or
    not."""
    _check_data(u)
    _validated(A, "queried")
    pool = frozenset(A.initial_assignment) | names_of(u)
    P, Q = len(u.spine), len(u.cycle)

    def succ(node):
        i, q = node
        nxt = i + 1 if i + 1 < P + Q else P
        a = u.letter(i).name
        out = set()
        for letter in (BarLetter(False, a), BarLetter(True, a)):
            fresh = fresh_name(q.supp() | {a} | pool) if letter.bar else None
            out |= {(nxt, s) for s in nd_successors(A, q, letter, fresh)}
        return out

    start = (0, initial_dropped(A))
    nodes = reachable(start, succ)
    return has_cycle_through(nodes, succ, lambda n: nd_final(A, n[1]))


def data_member_global(A, u: LassoWord) -> bool:
    """Membership when every allocation must be globally fresh: only clean
    bar placements count, and a clean placement is determined by which
    names get barred at their first occurrence.  One cycle copy is unrolled
    so every name's first occurrence sits in the spine."""
    _check_data(u)
    spine = u.spine + u.cycle
    names: list[Name] = []
    for l in spine:
        if l.name not in names:
            names.append(l.name)
    for size in range(len(names) + 1):
        for chosen in combinations(names, size):
            seen: set[Name] = set()
            out = []
            for l in spine:
                if l.name in chosen and l.name not in seen:
                    out.append(BarLetter(True, l.name))
                else:
                    out.append(l)
                seen.add(l.name)
            if bar_member(A, LassoWord(tuple(out), u.cycle)):
                return True
    return False


def render_inclusion_report(v: InclusionVerdict, table: NameTable) -> str:
    lines = [f"{v.kind} inclusion: " + ("holds" if v.holds else "fails")]
    lines.append("names: " + " ".join(table.ident(n) for n in v.name_set))
    if v.counterexample is not None:
        lines.append("witness: " + print_word(v.counterexample, table))
        if v.kind == "bar":
            lines.append(
                "meaning: a bar string accepted on the left and not"
                " alpha-equivalent to anything accepted on the right"
            )
        else:
            lines.append(
                "meaning: a bar string accepted on the left whose data word"
                " is outside the right data language"
            )
    lines.append("sizes: " + " ".join(f"{k}={n}" for k, n in v.sizes))
    if v.kind == "data":
        lines.append(
            "caveat: data verdicts range over all data words; inclusion"
            " restricted to finitely supported data words is a separate,"
            " open problem"
        )
    return "\n".join(lines) + "\n"
