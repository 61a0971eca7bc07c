"""The lossy-register variant of a register automaton.

States may forget register values (partial assignments).  The transition
relation is the original one where every run may drop any subset of the
values it carries; the punchline is that the literal language of the lossy
automaton is the alpha-closure of the original's, which turns
alpha-quotiented questions into literal ones.

The lossy automaton is never materialized: `nd_successors` answers
transition queries directly, which is all the finite restrictions need.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from nombuchi.graphs import has_cycle_through, reachable
from nombuchi.nominal import BarLetter, LassoWord, Name, NameTable, fresh_name, names_of
from nombuchi.rnna import RegisterAutomaton, validate


@dataclass(frozen=True)
class DroppedState:
    control: str
    assignment: tuple[Name | None, ...]  # None marks a forgotten register

    def supp(self):
        return frozenset(n for n in self.assignment if n is not None)

    def defined(self):
        return tuple(i + 1 for i, n in enumerate(self.assignment) if n is not None)


def initial_dropped(A: RegisterAutomaton) -> DroppedState:
    return DroppedState(A.initial_control, A.initial_assignment)


def nd_final(A: RegisterAutomaton, q: DroppedState) -> bool:
    return A.control(q.control).final


def label(q, table: NameTable) -> str:
    """Render a (dropped or concrete) state as `(control,{reg:name,...})`."""
    parts = [
        f"{i + 1}:{table.ident(n)}"
        for i, n in enumerate(q.assignment)
        if n is not None
    ]
    return f"({q.control},{{{','.join(parts)}}})"


def _restrictions(pinned: dict, nd: int):
    keys = sorted(pinned)
    for size in range(len(keys) + 1):
        for kept in combinations(keys, size):
            yield tuple(pinned[y] if y in kept else None for y in range(1, nd + 1))


def nd_successors(A, q: DroppedState, letter: BarLetter, fresh: Name | None = None):
    """Successors of a lossy state.

    The defining conditions quantify over total extensions of the partial
    assignments and (for bars) over a fresh renaming witness; both collapse
    to finite checks.  A plain letter must be held in a still-defined
    register; a bar letter may always fire, with register values equal to
    the read name dropped on the way (they could only have been kept by
    renaming the binder, which is exactly what the lossy run is free to do).
    `fresh` overrides the canonical renaming witness — any name fresh for
    the state and the letter yields the same successor set.
    """
    out = set()
    if not letter.bar:
        for t in A.transitions_from(q.control):
            if t.kind != "read":
                continue
            held = q.assignment[t.reg - 1]
            if held != letter.name or held is None:
                continue
            nd = A.control(t.dst).register_count
            pinned = {
                y: q.assignment[x - 1] for (y, x) in t.copy if q.assignment[x - 1] is not None
            }
            for s in _restrictions(pinned, nd):
                out.add(DroppedState(t.dst, s))
        return out

    a = letter.name
    b = fresh if fresh is not None else fresh_name(q.supp() | {a})
    keep = q.supp() | {a}
    for t in A.transitions_from(q.control):
        if t.kind == "read":
            continue
        nd = A.control(t.dst).register_count
        pinned = {
            y: q.assignment[x - 1] for (y, x) in t.copy if q.assignment[x - 1] is not None
        }
        if b in pinned.values():
            continue  # the witness letter |b could not fire here
        if t.kind == "barstore":
            pinned[t.reg] = b
        # undo the renaming: the witness run read |b, the real run reads |a
        swapped = {y: (a if v == b else b if v == a else v) for y, v in pinned.items()}
        allowed = {y: v for y, v in swapped.items() if v in keep}
        for s in _restrictions(allowed, nd):
            out.add(DroppedState(t.dst, s))
    return out


def nd_accepts_literal_lasso(A: RegisterAutomaton, w: LassoWord) -> bool:
    """Buchi acceptance of the exact word by the lossy automaton.

    Equivalently: is the alpha-class of w in the bar language of A."""
    problems = validate(A)
    if problems:
        raise ValueError("invalid automaton: " + "; ".join(problems))
    P, Q = len(w.spine), len(w.cycle)
    pool = frozenset(A.initial_assignment) | names_of(w)

    def succ(node):
        i, q = node
        nxt = i + 1 if i + 1 < P + Q else P
        return {(nxt, s) for s in nd_successors(A, q, w.letter(i), _canonical(q, w.letter(i), pool))}

    start = (0, initial_dropped(A))
    nodes = reachable(start, succ)
    return has_cycle_through(nodes, succ, lambda n: nd_final(A, n[1]))


def _canonical(q, letter, pool):
    # least witness outside the state, the letter, and the ambient pool
    if not letter.bar:
        return None
    return fresh_name(q.supp() | {letter.name} | pool)
