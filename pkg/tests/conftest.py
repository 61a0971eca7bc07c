from __future__ import annotations

import pathlib

from nombuchi.nominal import NameTable
from nombuchi.rnna import parse_automaton

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

CORPUS_BUCHI = [
    "recurring.rnna",
    "alloc_pair_loop.rnna",
    "bar_universal.rnna",
    "needs_repeat.rnna",
    "dropped_pair_loop.rnna",
]


def load(name, table=None):
    table = table if table is not None else NameTable()
    return parse_automaton((CORPUS / name).read_text(), table)
