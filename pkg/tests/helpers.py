"""Shared test machines, oracles and hypothesis strategies."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from multipass.automaton import Mode, MultipassAutomaton, build, completed
from multipass.catalog import CATALOG
from multipass.groups import build_wp, free_wp
from multipass.oracles import oracle_for
from multipass.pda import PushdownAutomaton, pda_to_onepass
from multipass.specs import alphabet_of
from multipass.words import words_upto

AB = ("a", "b")
Z2 = ("a", "a^-1", "b", "b^-1")


def language(m: MultipassAutomaton, max_len: int, alphabet=None) -> frozenset:
    return frozenset(w for w in words_upto(alphabet or m.input_alphabet, max_len) if m.accepts(w))


# --------------------------------------------------------------------------- hand-built machines

def anbn_pda() -> PushdownAutomaton:
    T = {("s", "a", "Z"): (("p", ("Z", "A")),), ("p", "a", "A"): (("p", ("A", "A")),),
         ("p", "b", "A"): (("q", ()),), ("q", "b", "A"): (("q", ()),),
         ("q", None, "Z"): (("f", ("Z",)),)}
    return PushdownAutomaton(frozenset("spqf"), AB, frozenset({"Z", "A"}), T, "s",
                             frozenset({"s", "f"}), "Z", Mode.DETERMINISTIC, "a^n b^n")


def is_anbn(w) -> bool:
    n = len(w) // 2
    return tuple(w) == ("a",) * n + ("b",) * n


def anbn_machine() -> MultipassAutomaton:
    return completed(pda_to_onepass(anbn_pda()))


def pairs_machine() -> MultipassAutomaton:
    """One pass with epsilon moves: each ``a`` pushes two ``X``; each ``b`` pops
    one ``X`` and an epsilon move pops the second. A ``b`` with nothing to pop
    plants a permanent ``N``. Accepts on an empty stack."""
    trans = {
        (1, "q", "a", None): ("q", ("X", "X")),
        (1, "q", "a", "X"): ("q", ("X", "X", "X")),
        (1, "q", "b", "X"): ("d", ()),
        (1, "d", None, "X"): ("q", ()),
        (1, "q", "b", None): ("q", ("N",)),
        (1, "q", "a", "N"): ("q", ("N",)),
        (1, "q", "b", "N"): ("q", ("N",)),
    }
    m = build(1, {"q", "d"}, "q", AB, {"X", "N"}, transitions=trans, accept=[("q", None)],
              label="pairs")
    return completed(m)


def is_pairs(w) -> bool:
    h = 0
    for x in w:
        if x == "a":
            h += 1
        elif h == 0:
            return False
        else:
            h -= 1
    return h == 0


def three_pass_machine() -> MultipassAutomaton:
    """Pass 1: as many ``a`` as ``b``. Pass 2: length divisible by 4.
    Pass 3: the word starts with ``a`` or is empty."""
    trans = {}
    enf = {}
    for top in (None, "a", "b"):
        keep = () if top is None else (top,)
        for x in AB:
            y = "b" if x == "a" else "a"
            trans[(1, "c", x, top)] = ("c", ()) if top == y else ("c", keep + (x,))
            for i in range(4):
                trans[(2, f"m{i}", x, top)] = (f"m{(i + 1) % 4}", keep)
            trans[(3, "s", x, top)] = ("ok" if x == "a" else "bad", keep)
            trans[(3, "ok", x, top)] = ("ok", keep)
            trans[(3, "bad", x, top)] = ("bad", keep)
            trans[(1, "r", x, top)] = ("r", keep)
            trans[(2, "r", x, top)] = ("r", keep)
            trans[(3, "r", x, top)] = ("r", keep)
        enf[(1, "c", top)] = "m0" if top is None else "r"
        enf[(1, "r", top)] = "r"
        for i in range(4):
            enf[(2, f"m{i}", top)] = "s" if i == 0 else "r"
        enf[(2, "r", top)] = "r"
    states = {"c", "m0", "m1", "m2", "m3", "s", "ok", "bad", "r"}
    return build(3, states, "c", AB, transitions=trans, end_nonfinal=enf,
                 accept=[("s", None), ("ok", None), ("ok", "a"), ("ok", "b"), ("s", "a"), ("s", "b")],
                 label="three-pass")


def is_three_pass(w) -> bool:
    return w.count("a") == w.count("b") and len(w) % 4 == 0 and (not w or w[0] == "a")


def palindrome_nm() -> MultipassAutomaton:
    """Nondeterministic two passes: even palindromes over {a, b} (pass 1, guessing
    the middle) with an even number of ``a`` (pass 2)."""
    trans: dict = {}
    for x in AB:
        trans[(1, "p", x, None)] = [("p", (x,))]
        for g in AB:
            imgs = [("p", (g, x))]
            if g == x:
                imgs.append(("r", ()))
            trans[(1, "p", x, g)] = imgs
            if g == x:
                trans[(1, "r", x, g)] = [("r", ())]
        for top in (None, *AB):
            keep = () if top is None else (top,)
            trans[(2, "e", x, top)] = [("o" if x == "a" else "e", keep)]
            trans[(2, "o", x, top)] = [("e" if x == "a" else "o", keep)]
    enf = {(1, "p", None): ["e"], (1, "r", None): ["e"]}
    return build(2, {"p", "r", "e", "o"}, "p", AB, mode=Mode.NONDETERMINISTIC, transitions=trans,
                 end_nonfinal=enf, accept=[("e", None)], label="even palindromes, even a")


def is_palindrome_even_a(w) -> bool:
    return len(w) % 2 == 0 and tuple(w) == tuple(reversed(w)) and w.count("a") % 2 == 0


def anbn_nm() -> MultipassAutomaton:
    """Nondeterministic one-pass copy of the a^n b^n machine."""
    m = anbn_machine()
    trans = {k: v for k, v in m.transitions.items()}
    return MultipassAutomaton(m.passes, m.states, m.initial, m.input_alphabet, m.stack_alphabet,
                              Mode.NONDETERMINISTIC, trans, m.end_nonfinal, m.end_final, "a^n b^n (nm)")


def eps_loop_machine() -> MultipassAutomaton:
    """Reading ``b`` pushes ``X``; on ``X`` the state ``q`` spins forever in epsilon moves
    only after an ``a`` has switched it to ``q``."""
    trans = {
        (1, "s", "a", None): ("q", ()),
        (1, "s", "b", None): ("s", ("X",)),
        (1, "s", "a", "X"): ("q", ("X",)),
        (1, "s", "b", "X"): ("s", ("X", "X")),
        (1, "q", None, "X"): ("q", ("X",)),
        (1, "q", "a", None): ("q", ()),
        (1, "q", "b", None): ("q", ()),
    }
    return build(1, {"s", "q"}, "s", AB, {"X"}, transitions=trans,
                 accept=[("s", None), ("s", "X"), ("q", None)], label="eps-loop")


def is_eps_loop(w) -> bool:
    # diverges as soon as an ``a`` follows at least one ``b``
    if "a" not in w:
        return True
    i = w.index("a")
    return i == 0


# --------------------------------------------------------------------------- group machines

def group_machine(name: str):
    spec = CATALOG[name]()
    return spec, build_wp(spec), oracle_for(spec)


def complete_deterministic_machines() -> dict:
    """Name -> (machine, membership oracle) for the suite's complete deterministic machines."""
    out = {}
    for name in ("z2", "free2", "klein", "dihedral", "even-conjugation", "cyclic5", "z-mod-3"):
        spec, m, o = group_machine(name)
        out[f"WP({name})"] = (completed(m), o.is_identity)
    out["a^n b^n"] = (anbn_machine(), is_anbn)
    out["pairs"] = (pairs_machine(), is_pairs)
    out["three-pass"] = (completed(three_pass_machine()), is_three_pass)
    out["eps-loop completed"] = (completed(eps_loop_machine()), is_eps_loop)
    return out


def free_group_machine(rank: int = 1) -> MultipassAutomaton:
    return free_wp(tuple("abcdefgh"[:rank]))


def random_words(alphabet, n_words: int, max_len: int, seed: int):
    rng = random.Random(seed)
    return [tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
            for _ in range(n_words)]


def group_alphabet_of(spec) -> tuple:
    return alphabet_of(spec)


# --------------------------------------------------------------------------- strategies

SYMS = ("a", "b", "X")
push_words = st.lists(st.sampled_from(SYMS), max_size=2).map(tuple)


@st.composite
def machines(draw, mode=Mode.DETERMINISTIC, max_passes=2, max_states=3):
    """Small random machines over {a, b} with stack symbols {a, b, X}."""
    k = draw(st.integers(1, max_passes))
    Q = [f"q{i}" for i in range(draw(st.integers(1, max_states)))]
    state = st.sampled_from(Q)
    det = mode is Mode.DETERMINISTIC
    trans: dict = {}
    for j in range(1, k + 1):
        for q in Q:
            for g in (None, *SYMS):
                kind = draw(st.sampled_from(("read", "read", "eps", "none") if g is not None
                                            else ("read", "read", "none")))
                if kind == "eps":
                    n = 1 if det else draw(st.integers(1, 2))
                    trans[(j, q, None, g)] = [(draw(state), draw(push_words)) for _ in range(n)]
                    if det:
                        continue
                if kind in ("read", "eps"):
                    for s in AB:
                        n = draw(st.integers(0, 1 if det else 2))
                        if n:
                            trans[(j, q, s, g)] = [(draw(state), draw(push_words)) for _ in range(n)]
    enf: dict = {}
    for j in range(1, k):
        for q in Q:
            for g in (None, *SYMS):
                n = draw(st.integers(0, 1 if det else 2))
                if n:
                    enf[(j, q, g)] = [draw(state) for _ in range(n)]
    accept = [(q, g) for q in Q for g in (None, *SYMS) if draw(st.booleans())]
    return build(k, Q, Q[0], AB, SYMS, mode=mode, transitions=trans, end_nonfinal=enf,
                 accept=accept)
