"""Generalized sequential machines and the closures built from them."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .automaton import Mode, MultipassAutomaton, PreconditionError, build, completed, fresh, run
from .closures import complement, intersection, union

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Gsm:
    """Deterministic finite transducer; ``rules[(state, letter)] = (output, next_state)``."""
    states: frozenset
    initial: object
    input_alphabet: tuple
    output_alphabet: tuple
    rules: Mapping[tuple, tuple]

    def validate(self) -> list:
        problems = []
        if self.initial not in self.states:
            problems.append(f"initial state {self.initial!r} not declared")
        out = set(self.output_alphabet)
        for (q, a), (u, q2) in self.rules.items():
            if q not in self.states or q2 not in self.states:
                problems.append(f"rule ({q!r}, {a!r}) references an undeclared state")
            if a not in self.input_alphabet:
                problems.append(f"rule ({q!r}, {a!r}) reads an unknown letter")
            bad = [x for x in u if x not in out]
            if bad:
                problems.append(f"rule ({q!r}, {a!r}) outputs unknown symbols {bad}")
        return problems


def gsm_apply(s: Gsm, word: Sequence[str]) -> tuple:
    q = s.initial
    out: list = []
    for a in word:
        try:
            u, q = s.rules[(q, a)]
        except KeyError:
            if a not in s.input_alphabet:
                raise ValueError(f"symbol {a!r} is not in the gsm input alphabet") from None
            raise ValueError(f"gsm has no rule for ({q!r}, {a!r})") from None
        out.extend(u)
    return tuple(out)


def homomorphism(images: Mapping[str, Sequence[str]], output_alphabet: Iterable[str]) -> Gsm:
    """One-state gsm sending each letter to a fixed word."""
    rules = {(0, a): (tuple(u), 0) for a, u in images.items()}
    return Gsm(frozenset({0}), 0, tuple(images), tuple(output_alphabet), rules)


def projection(alphabet: Sequence[str], onto: Iterable[str]) -> Gsm:
    keep = set(onto)
    return homomorphism({a: (a,) if a in keep else () for a in alphabet},
                        [a for a in alphabet if a in keep] or sorted(keep))


def identity_gsm(alphabet: Sequence[str]) -> Gsm:
    return homomorphism({a: (a,) for a in alphabet}, alphabet)


# --------------------------------------------------------------------------- inverse image

def inverse_gsm(m: MultipassAutomaton, s: Gsm, accept_states: Iterable | None = None,
                label: str = "") -> MultipassAutomaton:
    """Machine for ``{w : g(w) in L(m)}`` where ``g`` is the map computed by ``s``.

    Each pass restarts ``s`` in its initial state. Reading a letter fires the
    gsm and feeds its output burst to ``m``: the first burst symbol in the same
    move, the rest through epsilon moves of intermediate states. A bottom
    marker keeps the stack nonempty after the first letter so those epsilon
    moves are legal when ``m``'s own stack is empty.

    ``accept_states`` (optional) additionally requires the gsm to end the
    final pass in one of the given states.
    """
    if set(s.output_alphabet) - set(m.input_alphabet):
        raise PreconditionError("gsm output alphabet is not contained in the machine alphabet")
    problems = s.validate()
    if problems:
        raise PreconditionError("; ".join(problems))
    finals = None if accept_states is None else set(accept_states)
    sigma = s.input_alphabet
    bot = fresh({str(g) for g in m.stack_alphabet} | set(s.input_alphabet), "#bottom")
    gamma = m.stack_alphabet | {bot} | frozenset(sigma)
    keys_m = (None, *m.stack_alphabet)
    det = m.deterministic

    eps_of: dict = {}
    read_of: dict = {}
    for (j, q, a, g), img in m.transitions.items():
        if a is None:
            eps_of[(j, q, g)] = img
        else:
            read_of[(j, q, a, g)] = img

    idle = lambda q, p: ("idle", q, p)  # noqa: E731
    states = set()
    trans: dict = {}

    def add(key, q2, z):
        trans.setdefault(key, [])
        if (q2, z) not in trans[key]:
            trans[key].append((q2, z))
        states.add(q2)

    def feed(j, q, g, letter_src, u, i, p_next):
        """M-state after consuming ``u[i]`` from ``(q, g)``; returns [(state, push)]."""
        out = []
        for q2, z in read_of.get((j, q, u[i], g), ()):
            nxt = idle(q2, p_next) if i + 1 == len(u) else ("pend", q2, letter_src, i + 1)
            out.append((nxt, z))
        return out

    for j in range(1, m.passes + 1):
        for q in m.states:
            for p in s.states:
                here = idle(q, p)
                states.add(here)
                for g in (*keys_m, bot):
                    mg = None if g == bot else g
                    base = (bot,) if g is None else ((bot,) if g == bot else ())
                    if mg is not None and (j, q, mg) in eps_of:
                        for q2, z in eps_of[(j, q, mg)]:
                            add((j, here, None, g), idle(q2, p), tuple(z))
                        if det:
                            continue
                    for a in sigma:
                        rule = s.rules.get((p, a))
                        if rule is None:
                            continue
                        u, p2 = rule
                        if not u:
                            add((j, here, a, g), idle(q, p2), base + (() if g in (None, bot) else (g,)))
                            continue
                        for nxt, z in feed(j, q, mg, (p, a), u, 0, p2):
                            add((j, here, a, g), nxt, base + tuple(z))
        # pending states: burst of rule (p, a) consumed up to index i
        for (p, a), (u, p2) in s.rules.items():
            for i in range(1, len(u)):
                for q in m.states:
                    here = ("pend", q, (p, a), i)
                    states.add(here)
                    for g in (*m.stack_alphabet, bot):
                        mg = None if g == bot else g
                        if mg is not None and (j, q, mg) in eps_of:
                            for q2, z in eps_of[(j, q, mg)]:
                                add((j, here, None, g), ("pend", q2, (p, a), i), tuple(z))
                            if det:
                                continue
                        for nxt, z in feed(j, q, mg, (p, a), u, i, p2):
                            add((j, here, None, g), nxt, ((bot,) if g == bot else ()) + tuple(z))

    end_nonfinal: dict = {}
    end_final: dict = {}
    for st in states:
        for g in (None, *gamma):
            if st[0] != "idle":
                end_final[(st, g)] = False
                continue
            _, q, p = st
            mg = None if g in (None, bot) else g
            for j in range(1, m.passes):
                ts = m.end_nonfinal.get((j, q, mg), ())
                if ts:
                    end_nonfinal[(j, st, g)] = tuple(idle(t, s.initial) for t in ts)
            acc = m.end_final.get((q, mg), False)
            end_final[(st, g)] = acc and (finals is None or p in finals)
    out = MultipassAutomaton(
        m.passes, frozenset(states), idle(m.initial, s.initial), sigma, gamma, m.mode,
        {k: tuple(v) for k, v in trans.items()}, end_nonfinal, end_final,
        label or (f"inv({m.label})" if m.label else ""))
    return out


# --------------------------------------------------------------------------- products, quotients

def interleaved_product(machines: Sequence[MultipassAutomaton]) -> MultipassAutomaton:
    """Words whose projection onto each machine's alphabet is accepted by it."""
    if not machines:
        raise PreconditionError("need at least one machine")
    modes = {m.mode for m in machines}
    if len(modes) > 1:
        raise PreconditionError("modes differ")
    alphabet: list = []
    for m in machines:
        alphabet.extend(a for a in m.input_alphabet if a not in alphabet)
    pulled = [inverse_gsm(m, projection(alphabet, m.input_alphabet),
                          label=f"pi^-1({m.label})" if m.label else "") for m in machines]
    out = pulled[0]
    for p in pulled[1:]:
        out = intersection(out, p)
    return out


def epsilon_only(alphabet: Sequence[str], mode: Mode = Mode.DETERMINISTIC) -> MultipassAutomaton:
    """One-pass machine for ``{empty word}``."""
    trans = {(1, "e", a, None): ("n", ()) for a in alphabet}
    trans.update({(1, "n", a, None): ("n", ()) for a in alphabet})
    return build(1, {"e", "n"}, "e", alphabet, mode=mode, transitions=trans,
                 accept=[("e", None)], label="{eps}")


def nonempty_words(alphabet: Sequence[str], mode: Mode = Mode.DETERMINISTIC) -> MultipassAutomaton:
    trans = {(1, "e", a, None): ("n", ()) for a in alphabet}
    trans.update({(1, "n", a, None): ("n", ()) for a in alphabet})
    return build(1, {"e", "n"}, "e", alphabet, mode=mode, transitions=trans,
                 accept=[("n", None)], label="Sigma+")


def empty_language(alphabet: Sequence[str], mode: Mode = Mode.DETERMINISTIC) -> MultipassAutomaton:
    trans = {(1, "z", a, None): ("z", ()) for a in alphabet}
    return build(1, {"z"}, "z", alphabet, mode=mode, transitions=trans, label="empty")


def prefix_gsm(u: Sequence[str], alphabet: Sequence[str]) -> Gsm:
    """Two states: the first letter ``a`` is output as ``u a``, later letters as themselves."""
    rules = {}
    for a in alphabet:
        rules[("first", a)] = (tuple(u) + (a,), "rest")
        rules[("rest", a)] = ((a,), "rest")
    return Gsm(frozenset({"first", "rest"}), "first", tuple(alphabet), tuple(alphabet), rules)


def left_quotient(m: MultipassAutomaton, words: Iterable[Sequence[str]],
                  budget: int = 1_000_000) -> MultipassAutomaton:
    """Machine for ``{w : u w in L(m) for some u in words}``."""
    sigma = m.input_alphabet
    words = list(dict.fromkeys(tuple(u) for u in words))
    if not words:
        return empty_language(sigma, m.mode)
    eps_in = run(m, (), budget).accepted
    parts = []
    for u in words:
        part = inverse_gsm(m, prefix_gsm(u, sigma), label=f"{_fmt(u)}\\{m.label}" if m.label else "")
        u_in = run(m, u, budget).accepted
        if u_in and not eps_in:
            part = union(part, epsilon_only(sigma, m.mode))
        elif eps_in and not u_in:
            part = intersection(part, nonempty_words(sigma, m.mode))
        parts.append(part)
    out = parts[0]
    for p in parts[1:]:
        out = union(out, p)
    return out


def _fmt(u) -> str:
    return "(" + " ".join(u) + ")"


__all__ = [
    "Gsm", "gsm_apply", "homomorphism", "projection", "identity_gsm", "inverse_gsm",
    "interleaved_product", "left_quotient", "prefix_gsm", "epsilon_only", "nonempty_words",
    "empty_language", "complement", "completed",
]
