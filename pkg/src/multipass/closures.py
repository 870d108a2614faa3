"""Boolean closure constructions and the accepting-profile decomposition."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace

from .automaton import (
    MultipassAutomaton,
    PreconditionError,
    completed,
    fresh,
    is_complete,
)

log = logging.getLogger(__name__)


def complement(m: MultipassAutomaton) -> MultipassAutomaton:
    """Swap the final verdicts of a complete deterministic machine.

    Incomplete inputs are completed first.
    """
    if not m.deterministic:
        raise PreconditionError("complementation is only defined for deterministic machines")
    src = m
    if not is_complete(m):
        log.info("complement: completing %s first", m.label or "machine")
        src = completed(m)
    final = {key: not acc for key, acc in src.end_final.items()}
    return replace(src, end_final=final, label=f"not({m.label})" if m.label else "")


def union(m1: MultipassAutomaton, m2: MultipassAutomaton) -> MultipassAutomaton:
    return _sequential(m1, m2, union=True)


def intersection(m1: MultipassAutomaton, m2: MultipassAutomaton) -> MultipassAutomaton:
    return _sequential(m1, m2, union=False)


def _check_compatible(m1, m2):
    if set(m1.input_alphabet) != set(m2.input_alphabet):
        raise PreconditionError("input alphabets differ")
    if m1.mode is not m2.mode:
        raise PreconditionError("modes differ")


def _sequential(m1: MultipassAutomaton, m2: MultipassAutomaton, union: bool) -> MultipassAutomaton:
    """Run ``m1`` on passes ``1..k1`` and ``m2`` on passes ``k1+1..k1+k2``.

    At the end of pass ``k1`` the verdict of ``m1`` either diverts to a sink
    that reads through the remaining passes (accepting for a union, rejecting
    for an intersection) or starts ``m2``.
    """
    _check_compatible(m1, m2)
    det = m1.deterministic
    if det:
        m1, m2 = completed(m1), completed(m2)
    k1, k2 = m1.passes, m2.passes
    k = k1 + k2
    sigma = m1.input_alphabet
    gamma = m1.stack_alphabet | m2.stack_alphabet
    keys = (None, *gamma)
    L = lambda q: ("L", q)  # noqa: E731
    R = lambda q: ("R", q)  # noqa: E731
    sink = "accept-sink" if union else "reject-sink"
    start2 = R(m2.initial)

    trans = {}
    for (j, q, s, g), img in m1.transitions.items():
        trans[(j, L(q), s, g)] = tuple((L(q2), z) for q2, z in img)
    for (j, q, s, g), img in m2.transitions.items():
        trans[(j + k1, R(q), s, g)] = tuple((R(q2), z) for q2, z in img)
    for j in range(k1 + 1, k + 1):
        for g in keys:
            keep = () if g is None else (g,)
            for s in sigma:
                trans[(j, sink, s, g)] = ((sink, keep),)

    end_nonfinal = {}
    for (j, q, g), ts in m1.end_nonfinal.items():
        end_nonfinal[(j, L(q), g)] = tuple(L(t) for t in ts)
    for q in m1.states:
        for g in keys:
            acc = m1.end_final.get((q, g), False)
            end_nonfinal[(k1, L(q), g)] = (start2,) if acc != union else (sink,)
    for (j, q, g), ts in m2.end_nonfinal.items():
        end_nonfinal[(j + k1, R(q), g)] = tuple(R(t) for t in ts)
    for j in range(k1 + 1, k):
        for g in keys:
            end_nonfinal[(j, sink, g)] = (sink,)

    states = {L(q) for q in m1.states} | {R(q) for q in m2.states} | {sink}
    initial = L(m1.initial)
    if union and not det:
        initial = _bypass(m1, k1, L, sink, start2, trans, end_nonfinal, states, sigma)

    end_final = {}
    for q in states:
        for g in keys:
            if q == sink:
                end_final[(q, g)] = union
            elif q[0] == "R":
                end_final[(q, g)] = m2.end_final.get((q[1], g), False)
            else:
                end_final[(q, g)] = False
    op = "or" if union else "and"
    label = f"({m1.label} {op} {m2.label})" if m1.label and m2.label else ""
    return MultipassAutomaton(k, frozenset(states), initial, sigma, gamma, m1.mode, trans,
                              end_nonfinal, end_final, label)


def _bypass(m1, k1, L, sink, start2, trans, end_nonfinal, states, sigma):
    """Nondeterministic union: let the run skip ``m1`` altogether.

    Without this, a word outside ``L(m1)`` on which every computation of
    ``m1`` halts mid-pass would never reach ``m2``.
    """
    start = fresh({repr(q) for q in states}, "start")
    skip = fresh({repr(q) for q in states} | {start}, "skip")
    states.update((start, skip))
    for s in sigma:
        copied = trans.get((1, L(m1.initial), s, None), ())
        trans[(1, start, s, None)] = copied + ((skip, ()),)
    for j in range(1, k1 + 1):
        for s in sigma:
            trans[(j, skip, s, None)] = ((skip, ()),)
        end_nonfinal[(j, skip, None)] = (skip,) if j < k1 else (start2,)
    end_nonfinal[(1, start, None)] = tuple(dict.fromkeys(
        end_nonfinal.get((1, L(m1.initial), None), ()) + ((skip,) if k1 > 1 else (start2,))))
    return start


# --------------------------------------------------------------------------- profiles

@dataclass(frozen=True)
class Profile:
    """Per pass: (entry state, top of stack at the end-marker, state at the end-marker)."""
    triples: tuple

    def __len__(self) -> int:
        return len(self.triples)


def enumerate_profiles(m: MultipassAutomaton):
    """All chained profiles whose last triple is accepting.

    Realizability is not checked; unrealized profiles contribute empty
    intersections.
    """
    keys = (None, *sorted(m.stack_alphabet, key=repr))
    Q = sorted(m.states, key=repr)
    k = m.passes

    def extend(prefix, entry):
        j = len(prefix) + 1
        for q1, g in itertools.product(Q, keys):
            triple = (entry, g, q1)
            if j == k:
                if m.end_final.get((q1, g), False):
                    yield Profile(prefix + (triple,))
            else:
                for nxt in m.end_nonfinal.get((j, q1, g), ()):
                    yield from extend(prefix + (triple,), nxt)

    yield from extend((), m.initial)


def one_pass_slice(m: MultipassAutomaton, j: int, entry, end_state, end_top) -> MultipassAutomaton:
    """Pass ``j`` of ``m`` started in ``entry``, accepting only at ``(end_state, end_top)``."""
    trans = {(1, q, s, g): img for (jj, q, s, g), img in m.transitions.items() if jj == j}
    final = {(q, g): (q, g) == (end_state, end_top) for q in m.states for g in (None, *m.stack_alphabet)}
    return MultipassAutomaton(1, m.states, entry, m.input_alphabet, m.stack_alphabet, m.mode, trans,
                              {}, final, f"{m.label}[pass {j}]" if m.label else "")


def profile_decomposition(m: MultipassAutomaton) -> list:
    """``[(profile, [M_1, ..., M_k]), ...]`` with ``L(m)`` the union over
    profiles of the intersections of the one-pass slices."""
    if m.deterministic:
        m = completed(m)
    out = []
    for p in enumerate_profiles(m):
        slices = [one_pass_slice(m, j, q0, q1, g) for j, (q0, g, q1) in enumerate(p.triples, start=1)]
        out.append((p, slices))
    return out


def profile_bound(m: MultipassAutomaton) -> int:
    q = len(m.states)
    return (q * (len(m.stack_alphabet) + 1) * q) ** m.passes


def decomposition_accepts(decomposition, word, budget=100_000) -> int:
    """Number of profiles whose slices all accept ``word``."""
    return sum(all(s.accepts(word, budget) for s in slices) for _, slices in decomposition)
