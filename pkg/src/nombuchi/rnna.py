"""Register-form nondeterministic Buchi automata over names with binding.

A state is a control location plus an injective assignment of names to its
registers.  Transitions are symbolic, one per orbit, in three shapes:

  read   — consume the plain letter currently held in a source register;
  bar    — consume a binding letter |a whose name is fresh for the copied
           registers, either discarding it (no store) or storing it.

The `copy` map says which source register feeds each target register; this
makes target supports shrink along plain letters and grow by at most the
read name along bars, which is what keeps all constructions finite.

Muller variants replace the per-control final flags with a family of
control-id sets; `muller_to_buchi` compiles them away.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import combinations

from nombuchi.graphs import has_cycle_through, reachable
from nombuchi.nominal import BarLetter, LassoWord, Name, NameTable

_IDENT = re.compile(r"[A-Za-z0-9_@:+'.-]+\Z")


class ParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class ControlState:
    id: str
    register_count: int
    final: bool = False


@dataclass(frozen=True)
class SymbolicTransition:
    src: str
    dst: str
    kind: str  # "read" | "barfresh" | "barstore"
    reg: int | None  # register read from (read) / stored into (barstore)
    copy: tuple[tuple[int, int], ...]  # (target register, source register)


@dataclass(frozen=True)
class ConcreteState:
    control: str
    assignment: tuple[Name, ...]  # value of register i at index i-1

    def supp(self):
        return frozenset(self.assignment)


@dataclass(frozen=True)
class RegisterAutomaton:
    controls: tuple[ControlState, ...]
    transitions: tuple[SymbolicTransition, ...]
    initial_control: str
    initial_assignment: tuple[Name, ...]

    @cached_property
    def _by_id(self):
        return {c.id: c for c in self.controls}

    @cached_property
    def _by_src(self):
        out = {c.id: [] for c in self.controls}
        for t in self.transitions:
            out.setdefault(t.src, []).append(t)
        return out

    def control(self, cid: str) -> ControlState:
        return self._by_id[cid]

    def transitions_from(self, cid: str):
        return self._by_src.get(cid, [])

    @property
    def initial_state(self) -> ConcreteState:
        return ConcreteState(self.initial_control, self.initial_assignment)


@dataclass(frozen=True)
class MullerRegisterAutomaton(RegisterAutomaton):
    """Same shape, but acceptance is by the set of controls visited
    infinitely often being exactly one of the family members; any `final`
    flags on controls are ignored."""

    acceptance_family: tuple[frozenset[str], ...] = ()


# ---------------------------------------------------------------------------
# validation and basic measures


def validate(A: RegisterAutomaton) -> list[str]:
    """Structural diagnostics; empty list means well-formed."""
    out = []
    ids = [c.id for c in A.controls]
    if len(set(ids)) != len(ids):
        out.append("duplicate control ids")
    if not A.controls:
        out.append("automaton has no controls")
        return out
    regs = {c.id: c.register_count for c in A.controls}
    for c in A.controls:
        if c.register_count < 0:
            out.append(f"control {c.id}: negative register count")
    if A.initial_control not in regs:
        out.append(f"initial control {A.initial_control} undeclared")
    else:
        want = regs[A.initial_control]
        if len(A.initial_assignment) != want:
            out.append(
                f"initial assignment covers {len(A.initial_assignment)} of {want} registers"
            )
        if len(set(A.initial_assignment)) != len(A.initial_assignment):
            out.append("initial assignment not injective")
    for i, t in enumerate(A.transitions):
        where = f"transition {i} ({t.kind} {t.src} -> {t.dst})"
        if t.src not in regs or t.dst not in regs:
            out.append(f"{where}: undeclared control")
            continue
        ns, nd = regs[t.src], regs[t.dst]
        dsts = [y for y, _ in t.copy]
        srcs = [x for _, x in t.copy]
        if len(set(dsts)) != len(dsts):
            out.append(f"{where}: copy maps a target register twice")
        if len(set(srcs)) != len(srcs):
            out.append(f"{where}: copy not injective")
        if any(not (1 <= y <= nd) for y in dsts) or any(not (1 <= x <= ns) for x in srcs):
            out.append(f"{where}: copy register out of range")
            continue
        if t.kind == "read":
            if t.reg is None or not (1 <= t.reg <= ns):
                out.append(f"{where}: read register out of range")
            if set(dsts) != set(range(1, nd + 1)):
                out.append(f"{where}: copy must cover all target registers")
        elif t.kind == "barfresh":
            if t.reg is not None:
                out.append(f"{where}: unexpected store register")
            if set(dsts) != set(range(1, nd + 1)):
                out.append(f"{where}: copy must cover all target registers")
        elif t.kind == "barstore":
            if t.reg is None or not (1 <= t.reg <= nd):
                out.append(f"{where}: store register out of range")
            elif set(dsts) != set(range(1, nd + 1)) - {t.reg}:
                out.append(f"{where}: copy must cover exactly the non-stored registers")
        else:
            out.append(f"{where}: unknown kind")
    if isinstance(A, MullerRegisterAutomaton):
        for fam in A.acceptance_family:
            for cid in fam:
                if cid not in regs:
                    out.append(f"acceptance family references undeclared control {cid}")
    return out


def degree(A: RegisterAutomaton) -> int:
    return max((c.register_count for c in A.controls), default=0)


# ---------------------------------------------------------------------------
# concrete semantics


def concrete_successors(A, q: ConcreteState, letter: BarLetter):
    """Successor states for one concrete letter.

    read fires on the plain letter held in the watched register; the bar
    shapes fire on |a when a avoids every copied value (a may equal a value
    that is being dropped), with barstore additionally writing a.
    """
    out = set()
    for t in A.transitions_from(q.control):
        nd = A.control(t.dst).register_count
        copied = {y: q.assignment[x - 1] for (y, x) in t.copy}
        if t.kind == "read":
            if letter.bar or q.assignment[t.reg - 1] != letter.name:
                continue
        else:
            if not letter.bar or letter.name in copied.values():
                continue
            if t.kind == "barstore":
                copied[t.reg] = letter.name
        out.add(ConcreteState(t.dst, tuple(copied[y] for y in range(1, nd + 1))))
    return out


def accepts_literal_lasso(A: RegisterAutomaton, w: LassoWord) -> bool:
    """Buchi acceptance of the exact infinite word u v v v... (no renaming).

    Searched on the finite product of lasso positions with concrete states;
    every state reachable along w keeps its registers inside
    supp(q0) ∪ names(w), so the product is finite.
    """
    problems = validate(A)
    if problems:
        raise ValueError("invalid automaton: " + "; ".join(problems))
    P, Q = len(w.spine), len(w.cycle)

    def succ(node):
        i, q = node
        nxt = i + 1 if i + 1 < P + Q else P
        return {(nxt, s) for s in concrete_successors(A, q, w.letter(i))}

    nodes = reachable((0, A.initial_state), succ)
    return has_cycle_through(
        nodes, lambda n: succ(n) & nodes, lambda n: A.control(n[1].control).final
    )


# ---------------------------------------------------------------------------
# Muller acceptance -> Buchi


def _family_key(fam):
    return (len(fam), tuple(sorted(fam)))


def muller_to_buchi(M: MullerRegisterAutomaton) -> RegisterAutomaton:
    """Compile a Muller family into Buchi finals.

    Alongside the original controls (made non-final), the automaton guesses
    a family member F it will eventually stay inside and tracks the subset
    of F visited since the last full sweep; completing a sweep is the final
    event.  New controls are (c, F index, visited subset) for c in F.
    """
    problems = validate(M)
    if problems:
        raise ValueError("invalid automaton: " + "; ".join(problems))
    families = sorted(set(M.acceptance_family), key=_family_key)

    def comp_id(i, cid, visited):
        return f"{cid}@{i}:" + "+".join(sorted(visited))

    controls = [replace(c, final=False) for c in M.controls]
    regs = {c.id: c.register_count for c in M.controls}
    for i, fam in enumerate(families):
        for cid in sorted(fam):
            for size in range(len(fam) + 1):
                for visited in combinations(sorted(fam), size):
                    controls.append(
                        ControlState(
                            comp_id(i, cid, visited),
                            regs[cid],
                            final=set(visited) == set(fam),
                        )
                    )
    ids = [c.id for c in controls]
    if len(set(ids)) != len(ids):
        raise ValueError("control id collision while expanding the acceptance family")

    transitions = list(M.transitions)
    for t in M.transitions:
        for i, fam in enumerate(families):
            if t.dst in fam:
                transitions.append(replace(t, dst=comp_id(i, t.dst, ())))
            if t.src in fam and t.dst in fam:
                for size in range(len(fam)):
                    for visited in combinations(sorted(fam), size):
                        grown = tuple(sorted(set(visited) | {t.dst}))
                        transitions.append(
                            replace(t, src=comp_id(i, t.src, visited), dst=comp_id(i, t.dst, grown))
                        )
                transitions.append(
                    replace(t, src=comp_id(i, t.src, tuple(sorted(fam))), dst=comp_id(i, t.dst, ()))
                )
    return RegisterAutomaton(
        tuple(controls), tuple(transitions), M.initial_control, M.initial_assignment
    )


# ---------------------------------------------------------------------------
# text format


def _parse_copy(tok, lineno):
    if tok == "-":
        return ()
    pairs = []
    for part in tok.split(","):
        m = re.fullmatch(r"(\d+):(\d+)", part)
        if not m:
            raise ParseError(lineno, f"bad copy entry {part!r} (want target:source)")
        pairs.append((int(m.group(1)), int(m.group(2))))
    return tuple(sorted(pairs))


def parse_automaton(text: str, table: NameTable):
    """Parse the line-oriented automaton format.

    Returns a RegisterAutomaton, or a MullerRegisterAutomaton when an
    `accept { ... }` line is present (control `final` flags then carry no
    meaning)."""
    controls = []
    transitions = []
    initial = None
    family = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "control":
            if len(toks) < 3 or not toks[2].startswith("regs="):
                raise ParseError(lineno, "want: control <id> regs=<n> [final]")
            cid = toks[1]
            if not _IDENT.match(cid):
                raise ParseError(lineno, f"bad control id {cid!r}")
            try:
                n = int(toks[2][5:])
            except ValueError:
                raise ParseError(lineno, f"bad register count {toks[2][5:]!r}")
            final = False
            if len(toks) == 4 and toks[3] == "final":
                final = True
            elif len(toks) > 3:
                raise ParseError(lineno, f"unexpected trailing tokens {toks[3:]!r}")
            controls.append(ControlState(cid, n, final))
        elif head == "initial":
            if initial is not None:
                raise ParseError(lineno, "duplicate initial line")
            if len(toks) < 2:
                raise ParseError(lineno, "want: initial <id> [<reg>=<name> ...]")
            assignment = {}
            for tok in toks[2:]:
                m = re.fullmatch(r"(\d+)=([A-Za-z][A-Za-z0-9_]*)", tok)
                if not m:
                    raise ParseError(lineno, f"bad register binding {tok!r}")
                reg = int(m.group(1))
                if reg in assignment:
                    raise ParseError(lineno, f"register {reg} assigned twice")
                assignment[reg] = table.name(m.group(2))
            if sorted(assignment) != list(range(1, len(assignment) + 1)):
                raise ParseError(lineno, "registers must be assigned contiguously from 1")
            initial = (toks[1], tuple(assignment[r] for r in sorted(assignment)))
        elif head == "read":
            m = re.fullmatch(
                r"read\s+(\S+)\s+reg=(\d+)\s+->\s+(\S+)\s+copy\s+(\S+)", line
            )
            if not m:
                raise ParseError(lineno, "want: read <src> reg=<x> -> <dst> copy <y:x,...|->")
            transitions.append(
                SymbolicTransition(
                    m.group(1), m.group(3), "read", int(m.group(2)), _parse_copy(m.group(4), lineno)
                )
            )
        elif head == "bar":
            m = re.fullmatch(
                r"bar\s+(\S+)\s+->\s+(\S+)\s+copy\s+(\S+)(?:\s+store=(\d+))?", line
            )
            if not m:
                raise ParseError(lineno, "want: bar <src> -> <dst> copy <y:x,...|-> [store=<y*>]")
            store = m.group(4)
            transitions.append(
                SymbolicTransition(
                    m.group(1),
                    m.group(2),
                    "barstore" if store else "barfresh",
                    int(store) if store else None,
                    _parse_copy(m.group(3), lineno),
                )
            )
        elif head == "accept":
            if family is not None:
                raise ParseError(lineno, "duplicate accept line")
            m = re.fullmatch(r"accept\s+\{(.*)\}", line)
            if not m:
                raise ParseError(lineno, "want: accept { {c1,c2} {c3} ... }")
            body = m.group(1)
            if re.sub(r"\{[^{}]*\}", "", body).strip():
                raise ParseError(lineno, "acceptance sets must be brace-delimited")
            family = tuple(
                sorted(
                    {
                        frozenset(x.strip() for x in grp.split(",") if x.strip())
                        for grp in re.findall(r"\{([^{}]*)\}", body)
                    },
                    key=_family_key,
                )
            )
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    if initial is None:
        raise ParseError(0, "missing initial line")
    if family is None:
        return RegisterAutomaton(tuple(controls), tuple(transitions), initial[0], initial[1])
    return MullerRegisterAutomaton(
        tuple(controls), tuple(transitions), initial[0], initial[1], family
    )


def _print_copy(copy):
    return ",".join(f"{y}:{x}" for (y, x) in copy) if copy else "-"


def print_automaton(A: RegisterAutomaton, table: NameTable) -> str:
    lines = []
    for c in A.controls:
        lines.append(
            f"control {c.id} regs={c.register_count}" + (" final" if c.final else "")
        )
    bindings = " ".join(
        f"{i + 1}={table.ident(n)}" for i, n in enumerate(A.initial_assignment)
    )
    lines.append(("initial " + A.initial_control + (" " + bindings if bindings else "")))
    for t in A.transitions:
        if t.kind == "read":
            lines.append(f"read {t.src} reg={t.reg} -> {t.dst} copy {_print_copy(t.copy)}")
        else:
            store = f" store={t.reg}" if t.kind == "barstore" else ""
            lines.append(f"bar {t.src} -> {t.dst} copy {_print_copy(t.copy)}{store}")
    if isinstance(A, MullerRegisterAutomaton):
        groups = " ".join("{" + ",".join(sorted(f)) + "}" for f in A.acceptance_family)
        lines.append("accept { " + groups + " }")
    return "\n".join(lines) + "\n"
