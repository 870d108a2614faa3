"""Symbols and words.

A word is a tuple of symbols. Symbols are strings; a formal inverse is written
with a ``^-1`` suffix, so ``"a^-1"`` is a single symbol.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple  # tuple[str, ...]

INV_SUFFIX = "^-1"


def inv(sym: str) -> str:
    if sym.endswith(INV_SUFFIX):
        return sym[: -len(INV_SUFFIX)]
    return sym + INV_SUFFIX


def is_inverse_symbol(sym: str) -> bool:
    return sym.endswith(INV_SUFFIX)


def group_alphabet(generators: Iterable[str]) -> tuple[str, ...]:
    """``(x1, x1^-1, x2, x2^-1, ...)`` for the given generator names."""
    out = []
    for g in generators:
        out.extend((g, inv(g)))
    return tuple(out)


def formal_inverse(word: Sequence[str]) -> Word:
    return tuple(inv(s) for s in reversed(word))


def free_reduce(word: Iterable[str]) -> Word:
    stack: list[str] = []
    for s in word:
        if stack and stack[-1] == inv(s):
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


def power(sym: str, e: int) -> Word:
    """``sym^e`` as a word; negative exponents use the inverse symbol."""
    return (sym,) * e if e >= 0 else (inv(sym),) * (-e)


def parse_word(text: str | Sequence[str]) -> Word:
    """Whitespace-separated symbols. ``""`` is the empty word."""
    if isinstance(text, str):
        return tuple(text.split())
    return tuple(text)


def format_word(word: Sequence[str]) -> str:
    return " ".join(word)


def words_upto(alphabet: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length ``<= max_len`` in shortlex order."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def count_words_upto(alphabet_size: int, max_len: int) -> int:
    return sum(alphabet_size**n for n in range(max_len + 1))


def substitute(word: Iterable[str], images: Mapping[str, Sequence[str]]) -> Word:
    """Apply a letter map given on generators; inverse letters go to formal inverses.
    Letters without an image are kept. The result is freely reduced."""
    out: list[str] = []
    for s in word:
        if s in images:
            out.extend(images[s])
        elif inv(s) in images:
            out.extend(formal_inverse(images[inv(s)]))
        else:
            out.append(s)
    return free_reduce(out)
