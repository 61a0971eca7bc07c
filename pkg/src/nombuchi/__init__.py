"""Nondeterministic Buchi automata over names with binding letters."""

from nombuchi.nominal import (
    BarLetter,
    LassoWord,
    Name,
    NameTable,
    Permutation,
    alpha_equiv,
    alpha_equiv_lasso,
    parse_word,
    print_word,
)

__all__ = [
    "BarLetter",
    "LassoWord",
    "Name",
    "NameTable",
    "Permutation",
    "alpha_equiv",
    "alpha_equiv_lasso",
    "parse_word",
    "print_word",
]
