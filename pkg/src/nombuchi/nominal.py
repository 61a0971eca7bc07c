"""Names, permutations, bar strings, and alpha-equivalence.

A bar string is a word over plain letters ``a`` and binding letters ``|a``.
A binding letter ``|a`` binds the name ``a`` to the right, up to the next
``|a``.  A name is *free* if its first occurrence is a plain letter.
Infinite words are represented as lassos (spine + repeated cycle), which
covers every ultimately periodic word; these are always finitely supported.

Alpha-equivalence (consistent renaming of bound names) is decided by a
canonical scope annotation rather than by rewriting search: every position is
classified as a binder, a free occurrence, or a reference to the position of
its binder.  Two equal-length strings are alpha-equivalent iff their
annotations coincide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence, Union


@dataclass(frozen=True, order=True)
class Name:
    """An atom of the countable, totally ordered name universe."""

    id: int


# names and letters are hashed and compared millions of times in the
# product constructions; the generated methods build tuples per call, so
# pin allocation-free ones (same ordering and equality as generated)
Name.__hash__ = lambda self: self.id  # type: ignore[method-assign]
Name.__lt__ = lambda self, other: self.id < other.id  # type: ignore[method-assign]


def fresh_name(used: Iterable[Name]) -> Name:
    """The least name not occurring in `used`."""
    taken = {n.id for n in used}
    i = 0
    while i in taken:
        i += 1
    return Name(i)


@dataclass(frozen=True)
class Permutation:
    """A finite permutation of names, stored as its non-fixed pairs."""

    pairs: tuple[tuple[Name, Name], ...]

    def __post_init__(self) -> None:
        dom = [a for a, _ in self.pairs]
        if len(set(dom)) != len(dom) or set(dom) != {b for _, b in self.pairs}:
            raise ValueError("not a permutation: value set must equal domain")

    @staticmethod
    def identity() -> "Permutation":
        return Permutation(())

    @staticmethod
    def swap(a: Name, b: Name) -> "Permutation":
        if a == b:
            return Permutation(())
        return Permutation(tuple(sorted([(a, b), (b, a)])))

    @staticmethod
    def from_mapping(mapping: dict[Name, Name]) -> "Permutation":
        return Permutation(tuple(sorted((a, b) for a, b in mapping.items() if a != b)))

    def __call__(self, n: Name) -> Name:
        for a, b in self.pairs:
            if a == n:
                return b
        return n

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        dom = {a for a, _ in self.pairs} | {a for a, _ in other.pairs}
        return Permutation.from_mapping({a: self(other(a)) for a in dom})

    def inverse(self) -> "Permutation":
        return Permutation(tuple(sorted((b, a) for a, b in self.pairs)))


@dataclass(frozen=True, order=True)
class BarLetter:
    """A plain letter (bar=False) or a binding letter ``|name`` (bar=True).

    The field order makes sorted letter sequences list all plain letters
    before all bar letters, each group by name id.
    """

    bar: bool
    name: Name


BarLetter.__hash__ = lambda self: self.name.id << 1 | self.bar  # type: ignore[method-assign]
BarLetter.__lt__ = (  # type: ignore[method-assign]
    lambda self, other: self.name.id < other.name.id
    if self.bar == other.bar
    else self.bar < other.bar
)


BarString = tuple[BarLetter, ...]


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic infinite word spine + cycle + cycle + ..."""

    spine: tuple[BarLetter, ...]
    cycle: tuple[BarLetter, ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    def letter(self, i: int) -> BarLetter:
        if i < len(self.spine):
            return self.spine[i]
        return self.cycle[(i - len(self.spine)) % len(self.cycle)]

    def prefix(self, n: int) -> tuple[BarLetter, ...]:
        return tuple(self.letter(i) for i in range(n))


Word = Union[Sequence[BarLetter], LassoWord]


def apply_perm(p: Permutation, w: Word):
    """Apply a permutation letterwise; kinds are preserved."""
    if isinstance(w, LassoWord):
        return LassoWord(apply_perm(p, w.spine), apply_perm(p, w.cycle))
    return tuple(BarLetter(l.bar, p(l.name)) for l in w)


def _letters(w: Word) -> tuple[BarLetter, ...]:
    # For a lasso, the spine plus one cycle copy carries every first
    # occurrence, which is all that free_names/names_of need.
    if isinstance(w, LassoWord):
        return w.spine + w.cycle
    return tuple(w)


def free_names(w: Word) -> frozenset[Name]:
    """Names whose first occurrence is not preceded by their binder."""
    barred: set[Name] = set()
    free: set[Name] = set()
    for l in _letters(w):
        if l.bar:
            barred.add(l.name)
        elif l.name not in barred:
            free.add(l.name)
    return frozenset(free)


def names_of(w: Word) -> frozenset[Name]:
    """All names occurring in the word, plain or barred."""
    return frozenset(l.name for l in _letters(w))


def ub(w: Word):
    """Erase bars: every ``|a`` becomes the plain letter ``a``."""
    if isinstance(w, LassoWord):
        return LassoWord(ub(w.spine), ub(w.cycle))
    return tuple(BarLetter(False, l.name) for l in w)


def is_clean(w: Word) -> bool:
    """True iff no free name is ever barred and no name is barred twice.

    For a lasso the condition applies to the infinite unrolling, so any bar
    inside the cycle (it recurs forever) already fails the at-most-once rule.
    """
    if isinstance(w, LassoWord):
        if any(l.bar for l in w.cycle):
            return False
        letters: Sequence[BarLetter] = w.spine
    else:
        letters = tuple(w)
    bars = [l.name for l in letters if l.bar]
    return len(bars) == len(set(bars)) and not (set(bars) & free_names(w))


def cleanify(w: Sequence[BarLetter], pool: Iterable[Name] | None = None) -> BarString:
    """Rename offending binders left to right until the string is clean.

    Whenever a bar re-binds a name that has already occurred, the binder is
    renamed to a fresh name b and the transposition (a b) is applied to the
    suffix — a single alpha-renaming step, so the result is alpha-equivalent
    to the input.  With pool=None fresh names are drawn canonically (least
    id unused anywhere in the current word); a caller-supplied pool is
    consumed in order, skipping entries that are not fresh, and raises
    ValueError once exhausted.
    """
    letters = list(w)
    supply = iter(pool) if pool is not None else None
    drawn: set[Name] = set()

    def draw() -> Name:
        forbidden = {x.name for x in letters} | drawn
        if supply is None:
            return fresh_name(forbidden)
        for cand in supply:
            if cand not in forbidden:
                return cand
        raise ValueError("cleanify: fresh-name pool exhausted")

    seen: set[Name] = set()
    for i, l in enumerate(letters):
        if l.bar and l.name in seen:
            a = l.name
            b = draw()
            drawn.add(b)
            letters[i] = BarLetter(True, b)
            for j in range(i + 1, len(letters)):
                if letters[j].name == a:
                    letters[j] = BarLetter(letters[j].bar, b)
                elif letters[j].name == b:
                    letters[j] = BarLetter(letters[j].bar, a)
            seen.add(b)
        else:
            seen.add(l.name)
    return tuple(letters)


# ---------------------------------------------------------------------------
# scope annotations and alpha-equivalence

# one token per position: ("B",) | ("F", name) | ("A", abs position) | ("R", distance)
ScopeAnnotation = tuple[tuple, ...]


def annotate(w: Sequence[BarLetter]) -> ScopeAnnotation:
    """Canonical scope annotation deciding alpha-equivalence positionwise.

    Tokens: ("B",) for a binder; ("F", name) for a plain letter with no
    preceding binder of its name; ("A", q) for a plain letter whose most
    recent binder sits at position q.  Binders compare equal regardless of
    the bound name, so two equal-length strings are alpha-equivalent iff
    their annotations are equal.
    """
    out = []
    last: dict[Name, int] = {}
    for p, l in enumerate(w):
        if l.bar:
            out.append(("B",))
            last[l.name] = p
        elif l.name in last:
            out.append(("A", last[l.name]))
        else:
            out.append(("F", l.name))
    return tuple(out)


def alpha_equiv(v: Sequence[BarLetter], w: Sequence[BarLetter]) -> bool:
    v, w = tuple(v), tuple(w)
    return len(v) == len(w) and annotate(v) == annotate(w)


def normalize_lasso(w: LassoWord, spine_len: int, cycle_len: int) -> LassoWord:
    """Re-represent w with the given spine and cycle lengths.

    Requires spine_len >= len(w.spine) and cycle_len a multiple of
    len(w.cycle).  Letters are rolled from the cycle into the spine and the
    (rotated) cycle is repeated; the denoted infinite word is unchanged.
    """
    k = len(w.cycle)
    shift = spine_len - len(w.spine)
    if shift < 0 or cycle_len % k:
        raise ValueError("invalid normalization target")
    spine = w.spine + tuple(w.cycle[i % k] for i in range(shift))
    rolled = tuple(w.cycle[(shift + i) % k] for i in range(k))
    return LassoWord(spine, rolled * (cycle_len // k))


def lasso_annotation_key(w: LassoWord, spine_len: int, cycle_len: int) -> ScopeAnnotation:
    """Annotation of the window [0, P+2Q) with P=spine_len, Q=cycle_len.

    Binder references below the cutoff P+Q are kept absolute ("A", q);
    references to binders at or beyond the cutoff are encoded as distances
    ("R", p-q).  This window determines the whole infinite annotation:
    letters are Q-periodic from P on, so if some binder of a name occurs at
    a position >= P then a copy of it lands in every later Q-window and a
    plain occurrence at p >= P+2Q resolves at a stable distance < Q; if no
    binder of the name occurs at or beyond P, the most recent binder sits at
    a fixed position < P (a binder in [P, P+Q) is impossible in that case,
    since its periodic copies would reach the window) and the absolute
    reference is stable.  Either way the token at p equals the token at
    p-Q for all p >= P+2Q.
    """
    v = normalize_lasso(w, spine_len, cycle_len)
    cut = spine_len + cycle_len
    raw = annotate(v.prefix(spine_len + 2 * cycle_len))
    out = []
    for p, t in enumerate(raw):
        if t[0] == "A" and t[1] >= cut:
            out.append(("R", p - t[1]))
        else:
            out.append(t)
    return tuple(out)


def alpha_equiv_lasso(v: LassoWord, w: LassoWord) -> bool:
    """Alpha-equivalence of the denoted infinite words (prefix-wise)."""
    p = max(len(v.spine), len(w.spine))
    q = lcm(len(v.cycle), len(w.cycle))
    return lasso_annotation_key(v, p, q) == lasso_annotation_key(w, p, q)


# ---------------------------------------------------------------------------
# textual syntax

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class NameTable:
    """Bidirectional identifier <-> Name interning.

    Identifiers get ids in first-appearance order; printing a Name that was
    never parsed synthesizes an identifier (``n<id>``, disambiguated if the
    caller already used that spelling).
    """

    def __init__(self) -> None:
        self._id_of: dict[str, Name] = {}
        self._ident_of: dict[Name, str] = {}

    def name(self, ident: str) -> Name:
        n = self._id_of.get(ident)
        if n is None:
            i = 0
            while Name(i) in self._ident_of:
                i += 1
            n = Name(i)
            self._id_of[ident] = n
            self._ident_of[n] = ident
        return n

    def ident(self, name: Name) -> str:
        s = self._ident_of.get(name)
        if s is None:
            s = f"n{name.id}"
            while s in self._id_of:
                s += "f"
            self._id_of[s] = name
            self._ident_of[name] = s
        return s


def parse_letter(token: str, table: NameTable) -> BarLetter:
    barred = token.startswith("|")
    ident = token[1:] if barred else token
    if not _IDENT.match(ident):
        raise ValueError(f"bad letter {token!r}: names are identifiers, bars are '|name'")
    return BarLetter(barred, table.name(ident))


def print_letter(l: BarLetter, table: NameTable) -> str:
    return ("|" if l.bar else "") + table.ident(l.name)


def parse_word(text: str, table: NameTable) -> LassoWord:
    """Parse the lasso syntax ``u ; v`` (whitespace-separated letters;
    ``_`` denotes the empty spine)."""
    if text.count(";") != 1:
        raise ValueError("expected exactly one ';' between spine and cycle")
    left, right = text.split(";")
    ltoks = left.split()
    spine = () if ltoks == ["_"] else tuple(parse_letter(t, table) for t in ltoks)
    cycle = tuple(parse_letter(t, table) for t in right.split())
    if not cycle:
        raise ValueError("lasso cycle must be non-empty")
    return LassoWord(spine, cycle)


def print_word(w: LassoWord, table: NameTable) -> str:
    spine = " ".join(print_letter(l, table) for l in w.spine) if w.spine else "_"
    return spine + " ; " + " ".join(print_letter(l, table) for l in w.cycle)
