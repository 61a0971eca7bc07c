from __future__ import annotations

import random
from dataclasses import replace

import pytest

from conftest import CORPUS_BUCHI, load
from nombuchi.decide import (
    InclusionVerdict,
    bar_equivalence,
    bar_inclusion,
    bar_member,
    data_inclusion,
    data_member_global,
    data_member_local,
    render_inclusion_report,
)
from nombuchi.nominal import (
    BarLetter,
    LassoWord,
    Name,
    NameTable,
    alpha_equiv_lasso,
    parse_word,
)
from nombuchi.rnna import SymbolicTransition, accepts_literal_lasso, parse_automaton
from nombuchi.restriction import choose_name_set
from oracles import iter_lassos_total, random_lasso

A, B, C = (Name(i) for i in range(3))
TBL = NameTable()
TBL.name("a"), TBL.name("b"), TBL.name("c")


def lasso(text):
    return parse_word(text, TBL)


def barrings(w):
    spots = [i for i, l in enumerate(w.spine + w.cycle) if not l.bar]
    for mask in range(2 ** len(spots)):
        letters = list(w.spine + w.cycle)
        for j, i in enumerate(spots):
            if mask >> j & 1:
                letters[i] = BarLetter(True, letters[i].name)
        yield LassoWord(tuple(letters[: len(w.spine)]), tuple(letters[len(w.spine) :]))


# ---- bar_member ----


def test_bar_member_examples():
    alloc = load("alloc_pair_loop.rnna")
    rec = load("recurring.rnna")
    assert bar_member(alloc, lasso("_ ; |a"))
    # recurring can only revisit its accepting control by reading a plain
    # letter, so the all-bars class is not in its bar language (and indeed
    # the literal automaton rejects the word too)
    assert not bar_member(rec, lasso("_ ; |a"))
    assert not accepts_literal_lasso(rec, lasso("_ ; |a"))
    assert not bar_member(rec, lasso("a ; a"))  # free names need initial support
    assert bar_member(rec, lasso("|a ; a"))


# ---- data_member_local ----


def test_local_membership_examples():
    rec = load("recurring.rnna")
    assert data_member_local(rec, lasso("_ ; a"))
    assert data_member_local(rec, lasso("b ; a"))
    # the interleaved b's can be re-allocated on every pass, leaving a free
    # to recur as a read
    assert data_member_local(rec, lasso("_ ; a b"))


def test_local_membership_on_the_allocator_is_universal():
    alloc = load("alloc_pair_loop.rnna")
    # every lasso can be fully barred, and all-bars words form a single
    # alpha-class, so the closure swallows every data word
    for w in iter_lassos_total([A, B], 3, plain_only=True):
        assert data_member_local(alloc, w)


READS_ONLY = """
control w regs=1 final
initial w 1=a
read w reg=1 -> w copy 1:1
"""


def test_local_membership_can_fail():
    aut = parse_automaton(READS_ONLY, TBL)
    assert data_member_local(aut, lasso("_ ; a"))
    assert not data_member_local(aut, lasso("_ ; b"))
    assert not data_member_local(aut, lasso("b ; a"))


def test_local_membership_is_total_on_universal_and_repeat_languages():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    for w in iter_lassos_total([A, B], 4, plain_only=True):
        assert data_member_local(K, w)
        # every lasso repeats its cycle names, and one repeat is all L needs
        assert data_member_local(L, w)


def test_local_membership_rejects_bar_input():
    with pytest.raises(ValueError, match="bar"):
        data_member_local(load("recurring.rnna"), lasso("_ ; |a"))
    with pytest.raises(ValueError, match="bar"):
        data_member_global(load("recurring.rnna"), lasso("|a ; a"))


# ---- data_member_global ----


def test_global_membership_examples():
    rec = load("recurring.rnna")
    assert data_member_global(rec, lasso("b ; a"))
    assert not data_member_global(rec, lasso("_ ; a b"))  # two names recur
    assert data_member_global(rec, lasso("_ ; a"))


def test_global_freshness_kills_repeating_allocations():
    K = load("bar_universal.rnna")
    # under global freshness only the first occurrence may be barred, and K
    # rejects plain letters, so no lasso data word survives
    for w in iter_lassos_total([A, B], 3, plain_only=True):
        assert data_member_local(K, w)
        assert not data_member_global(K, w)


def test_global_implies_local():
    rng = random.Random(60)
    auts = [load(n) for n in CORPUS_BUCHI]
    hits = 0
    for _ in range(200):
        aut = rng.choice(auts)
        u = random_lasso(rng, [A, B, C], max_spine=2, max_cycle=2, plain_only=True)
        if data_member_global(aut, u):
            hits += 1
            assert data_member_local(aut, u)
    assert hits >= 20


# ---- bar_inclusion ----


def test_bar_inclusion_is_reflexive_on_corpus():
    for name in CORPUS_BUCHI:
        aut = load(name)
        v = bar_inclusion(aut, aut)
        assert v.holds and v.counterexample is None, name
        assert v.name_set == choose_name_set(aut)
        assert dict(v.sizes)["left"] >= 1


def test_bar_inclusion_remark_pair():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    v = bar_inclusion(K, L)
    assert not v.holds
    assert alpha_equiv_lasso(v.counterexample, lasso("_ ; |a"))
    assert not bar_inclusion(L, K).holds  # L's words read a name; K's never do


def test_bar_inclusion_alloc_vs_recurring():
    # the pair-allocator only ever allocates, so its bar language misses the
    # recurring automaton's (which demands infinitely many plain reads) and
    # vice versa
    alloc = load("alloc_pair_loop.rnna")
    rec = load("recurring.rnna")
    v = bar_inclusion(alloc, rec)
    assert not v.holds
    # spot-check the verdict against direct memberships
    assert bar_member(alloc, lasso("_ ; |a")) and not bar_member(rec, lasso("_ ; |a"))
    assert not bar_inclusion(rec, alloc).holds


def test_bar_counterexamples_verify():
    auts = [load(n) for n in CORPUS_BUCHI]
    for A1 in auts:
        for A2 in auts:
            v = bar_inclusion(A1, A2)
            if v.holds:
                assert v.counterexample is None
            else:
                assert accepts_literal_lasso(A1, v.counterexample)
                assert not bar_member(A2, v.counterexample)


def test_holding_bar_verdicts_agree_with_sampled_membership():
    auts = {n: load(n) for n in CORPUS_BUCHI}
    for n1, A1 in auts.items():
        for n2, A2 in auts.items():
            if not bar_inclusion(A1, A2).holds:
                continue
            S = choose_name_set(A1)
            for w in iter_lassos_total(S[:2], 3):
                if bar_member(A1, w):
                    assert bar_member(A2, w), (n1, n2, w)


# ---- data_inclusion ----


def test_data_inclusion_remark_pair():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    assert not data_inclusion(K, L).holds
    assert data_inclusion(L, K).holds


def test_data_inclusion_is_reflexive_on_corpus():
    for name in CORPUS_BUCHI:
        aut = load(name)
        assert data_inclusion(aut, aut).holds, name


def test_bar_inclusion_implies_data_inclusion_on_corpus():
    auts = [load(n) for n in CORPUS_BUCHI]
    seen_holding = 0
    for A1 in auts:
        for A2 in auts:
            if bar_inclusion(A1, A2).holds:
                seen_holding += 1
                assert data_inclusion(A1, A2).holds
    assert seen_holding >= len(auts)  # at least the diagonal


def test_data_counterexamples_verify():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    v = data_inclusion(K, L)
    assert not v.holds
    assert accepts_literal_lasso(K, v.counterexample)
    # no same-shape barring of the witness lands in L's closure
    assert not any(bar_member(L, w) for w in barrings(v.counterexample))


# ---- bar_equivalence ----


def test_equivalence_of_the_allocator_and_its_closed_variant():
    alloc = load("alloc_pair_loop.rnna")
    closed = load("dropped_pair_loop.rnna")
    K = load("bar_universal.rnna")
    # all-bars words form a single alpha-class, so all three languages agree
    assert bar_equivalence(alloc, closed) == (True, None, None)
    assert bar_equivalence(alloc, K)[0]
    assert bar_equivalence(closed, K)[0]


def test_equivalence_reports_the_failing_direction():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    holds, direction, verdict = bar_equivalence(K, L)
    assert not holds and direction == "left-to-right"
    assert isinstance(verdict, InclusionVerdict) and not verdict.holds
    holds, direction, verdict = bar_equivalence(L, load("needs_repeat.rnna"))
    assert holds and direction is None and verdict is None


# ---- alpha-invariance of verdicts ----


def renumber_registers(aut, control, swap):
    """Swap two register indices of one control, rewriting copy maps."""

    def fix_pair(y, x, src, dst):
        if dst == control:
            y = swap.get(y, y)
        if src == control:
            x = swap.get(x, x)
        return (y, x)

    ts = []
    for t in aut.transitions:
        copy = tuple(sorted(fix_pair(y, x, t.src, t.dst) for (y, x) in t.copy))
        reg = t.reg
        if t.kind == "read" and t.src == control and reg in swap:
            reg = swap[reg]
        if t.kind == "barstore" and t.dst == control and reg in swap:
            reg = swap[reg]
        ts.append(replace(t, reg=reg, copy=copy))
    assignment = aut.initial_assignment
    if aut.initial_control == control and assignment:
        order = [swap.get(i, i) for i in range(1, len(assignment) + 1)]
        assignment = tuple(assignment[i - 1] for i in order)
    return replace(aut, transitions=tuple(ts), initial_assignment=assignment)


def test_register_renumbering_never_changes_verdicts():
    alloc = load("alloc_pair_loop.rnna")
    twisted = renumber_registers(alloc, "c2", {1: 2, 2: 1})
    assert twisted != alloc
    rec = load("recurring.rnna")
    assert bar_equivalence(alloc, twisted) == (True, None, None)
    for other in (rec, load("bar_universal.rnna")):
        assert bar_inclusion(twisted, other).holds == bar_inclusion(alloc, other).holds
        assert bar_inclusion(other, twisted).holds == bar_inclusion(other, alloc).holds
        assert data_inclusion(twisted, other).holds == data_inclusion(alloc, other).holds
    for w in [lasso("_ ; |a"), lasso("|a |b ; |b"), lasso("_ ; a")]:
        assert bar_member(twisted, w) == bar_member(alloc, w)


# ---- reports ----


def test_report_for_a_failing_bar_inclusion():
    K = load("bar_universal.rnna")
    L = load("needs_repeat.rnna")
    table = NameTable()
    v = bar_inclusion(K, L, table)
    text = render_inclusion_report(v, table)
    assert text.splitlines()[0] == "bar inclusion: fails"
    assert "witness: " in text
    assert "sizes: " in text and "left=" in text
    assert "caveat" not in text
    assert render_inclusion_report(v, table) == text  # byte-deterministic


def test_report_for_a_holding_data_inclusion():
    L = load("needs_repeat.rnna")
    K = load("bar_universal.rnna")
    table = NameTable()
    v = data_inclusion(L, K, table)
    text = render_inclusion_report(v, table)
    assert text.splitlines()[0] == "data inclusion: holds"
    assert "witness" not in text
    assert "names: n0 n1" in text
    assert "finitely supported" in text
