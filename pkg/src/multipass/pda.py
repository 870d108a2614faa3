"""Pushdown automata (final-state acceptance) and conversions to and from one-pass machines."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .automaton import (
    DEFAULT_BUDGET,
    Mode,
    MultipassAutomaton,
    PreconditionError,
    Verdict,
    completed,
    fresh,
)


@dataclass(frozen=True, eq=False)
class PushdownAutomaton:
    """``transitions[(state, letter | None, top)] = ((state', push), ...)``.

    The stack starts as ``(start_symbol,)``; a move pops ``top`` and pushes
    ``push`` (rightmost symbol on top). With an empty stack the machine halts.
    """
    states: frozenset
    input_alphabet: tuple
    stack_alphabet: frozenset
    transitions: Mapping[tuple, tuple]
    initial: object
    final_states: frozenset
    start_symbol: object
    mode: Mode = Mode.DETERMINISTIC
    label: str = ""

    @property
    def deterministic(self) -> bool:
        return self.mode is Mode.DETERMINISTIC

    def validate(self) -> list:
        problems = []
        if self.start_symbol not in self.stack_alphabet:
            problems.append("start symbol not in the stack alphabet")
        if self.initial not in self.states:
            problems.append("initial state not declared")
        if not self.final_states <= self.states:
            problems.append("final states not declared")
        eps = set()
        reads = set()
        for (q, a, g), img in self.transitions.items():
            if q not in self.states or any(q2 not in self.states for q2, _ in img):
                problems.append(f"transition {(q, a, g)!r} references an undeclared state")
            if g not in self.stack_alphabet:
                problems.append(f"transition {(q, a, g)!r} has an unknown stack key")
            if a is not None and a not in self.input_alphabet:
                problems.append(f"transition {(q, a, g)!r} reads an unknown letter")
            if any(x not in self.stack_alphabet for _, z in img for x in z):
                problems.append(f"transition {(q, a, g)!r} pushes an unknown symbol")
            if self.deterministic and len(img) != 1:
                problems.append(f"transition {(q, a, g)!r} is not single-valued")
            (eps if a is None else reads).add((q, g))
        if self.deterministic:
            for qg in eps & reads:
                problems.append(f"{qg!r} has both an epsilon move and a reading move")
        return problems


def run_pda(p: PushdownAutomaton, word: Sequence[str], budget: int = DEFAULT_BUDGET) -> Verdict:
    """Accept iff some computation consumes ``word`` and is then in a final state."""
    n = len(word)
    start = (p.initial, 0, (p.start_symbol,))
    seen = {start}
    todo = [start]
    steps = 0
    while todo:
        q, pos, stack = todo.pop()
        if pos == n and q in p.final_states:
            return Verdict.ACCEPT
        if not stack:
            continue
        top, below = stack[-1], stack[:-1]
        succ = [(q2, pos, below + tuple(z)) for q2, z in p.transitions.get((q, None, top), ())]
        if pos < n:
            succ += [(q2, pos + 1, below + tuple(z))
                     for q2, z in p.transitions.get((q, word[pos], top), ())]
        for c in succ:
            steps += 1
            if steps > budget:
                return Verdict.BUDGET_EXCEEDED
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return Verdict.REJECT if p.deterministic else Verdict.NO_DECISION


def pda_accepts(p: PushdownAutomaton, word: Sequence[str], budget: int = DEFAULT_BUDGET) -> bool:
    return run_pda(p, word, budget) is Verdict.ACCEPT


# --------------------------------------------------------------------------- pda -> one pass

def _initial_closure(p: PushdownAutomaton, limit: int = 10_000):
    """Configurations reachable from the start by epsilon moves, with a flag for
    having met a final state on the way. Raises if the closure is not finite."""
    start = (p.initial, (p.start_symbol,), p.initial in p.final_states)
    seen = {start}
    todo = [start]
    while todo:
        q, stack, f = todo.pop()
        if not stack:
            continue
        for q2, z in p.transitions.get((q, None, stack[-1]), ()):
            c = (q2, stack[:-1] + tuple(z), f or q2 in p.final_states)
            if c not in seen:
                if len(seen) >= limit:
                    raise PreconditionError("initial epsilon closure is not finite at desk scale")
                seen.add(c)
                todo.append(c)
    return seen


def pda_to_onepass(p: PushdownAutomaton) -> MultipassAutomaton:
    """One-pass machine with the language of ``p``.

    States ``(q, flag)`` carry whether a final state was entered since the last
    letter was read, so that the verdict at the end-marker reflects epsilon
    moves taken after the last letter. The start symbol is an ordinary stack
    symbol; a stack emptied before the input is exhausted leads to a reading
    sink that rejects. Epsilon moves the pda makes before its first letter are
    folded into the initial reading transitions.
    """
    problems = p.validate()
    if problems:
        raise PreconditionError("; ".join(problems))
    sigma = p.input_alphabet
    F = p.final_states
    q0 = fresh({repr(q) for q in p.states}, "start")
    r = fresh({repr(q) for q in p.states} | {q0}, "dead")
    gamma = frozenset(p.stack_alphabet) | frozenset(sigma)
    trans: dict = {}

    def add(key, target):
        lst = trans.setdefault(key, [])
        if target not in lst:
            lst.append(target)

    closure = _initial_closure(p)
    accepts_empty = any(f for _, _, f in closure)
    for q, stack, _f in closure:
        if not stack:
            continue
        for a in sigma:
            for q2, z in p.transitions.get((q, a, stack[-1]), ()):
                add((1, q0, a, None), ((q2, q2 in F), stack[:-1] + tuple(z)))
    for (q, a, g), img in p.transitions.items():
        for flag in (False, True):
            for q2, z in img:
                if a is None:
                    add((1, (q, flag), None, g), ((q2, flag or q2 in F), tuple(z)))
                else:
                    add((1, (q, flag), a, g), ((q2, q2 in F), tuple(z)))
    for q in p.states:
        for flag in (False, True):
            for a in sigma:
                add((1, (q, flag), a, None), (r, ()))
    for a in sigma:
        add((1, r, a, None), (r, ()))
        if (1, q0, a, None) not in trans and p.deterministic:
            add((1, q0, a, None), (r, ()))

    states = {q0, r} | {(q, f) for q in p.states for f in (False, True)}
    final = {}
    for st in states:
        for g in (None, *gamma):
            if st == q0:
                final[(st, g)] = accepts_empty
            elif st == r:
                final[(st, g)] = False
            else:
                final[(st, g)] = st[1]
    return MultipassAutomaton(1, frozenset(states), q0, sigma, gamma, p.mode,
                              {k: tuple(v) for k, v in trans.items()}, {}, final,
                              f"mp({p.label})" if p.label else "")


# --------------------------------------------------------------------------- one pass -> pda

def onepass_to_pda(m: MultipassAutomaton) -> PushdownAutomaton:
    """Pushdown automaton with the language of a one-pass machine.

    States are ``(q, top)`` with ``top`` the current top of ``m``'s stack
    (``None`` for empty). A fresh bottom symbol stands in for the empty stack
    and is never erased. To keep ``top`` known after a pop, every pushed
    symbol is stored together with the symbol beneath it.

    Final states are the ``(q, top)`` at which ``m`` would accept on reading
    the end-marker; in deterministic mode those with a pending epsilon move
    are excluded because ``m`` takes that move instead of reading the marker.
    """
    if m.passes != 1:
        raise PreconditionError("only one-pass machines convert to pushdown automata")
    if m.deterministic:
        m = completed(m)
    Z0 = fresh({str(g) for g in m.stack_alphabet}, "Z0")
    keys = (None, *m.stack_alphabet)
    has_eps = {(q, g) for (_, q, a, g) in m.transitions if a is None}

    def encode(z, below):
        out = []
        for x in z:
            out.append((x, below))
            below = x
        return tuple(out), below

    trans: dict = {}
    for (_, q, a, g), img in m.transitions.items():
        if g is None:
            for q2, z in img:
                enc, top = encode(z, None)
                trans.setdefault(((q, None), a, Z0), []).append(((q2, top), (Z0,) + enc))
            continue
        for under in keys:
            for q2, z in img:
                enc, top = encode(z, under)
                trans.setdefault(((q, g), a, (g, under)), []).append(((q2, top), enc))
    states = frozenset((q, g) for q in m.states for g in keys)
    stack_alphabet = frozenset({Z0} | {(x, y) for x in m.stack_alphabet for y in keys})
    final = frozenset(
        (q, g) for q in m.states for g in keys
        if m.end_final.get((q, g), False) and not (m.deterministic and (q, g) in has_eps))
    return PushdownAutomaton(states, m.input_alphabet, stack_alphabet,
                             {k: tuple(v) for k, v in trans.items()}, (m.initial, None), final, Z0,
                             m.mode, f"pda({m.label})" if m.label else "")
