"""k-pass pushdown automata: data model, validation and execution.

Conventions used throughout the package:

* ``None`` plays two roles in transition keys: as the input component it is an
  epsilon move, as the stack component it matches exactly the empty stack.
* A stack key ``g`` (not ``None``) pops ``g`` and pushes the push-word.
* Stacks grow to the right: the last symbol of a push-word becomes the new top.
* Every pass starts at tape position 0 with an empty stack.
"""
from __future__ import annotations

import enum
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

EPS = None
DEFAULT_BUDGET = 1_000_000

State = Hashable
StackSym = Hashable
Key = tuple  # (pass, state, input | None, stack | None)


class Mode(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    NONDETERMINISTIC = "nondeterministic"


class Verdict(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    NO_DECISION = "nodecision"
    BUDGET_EXCEEDED = "budget-exceeded"


class PreconditionError(ValueError):
    """An operation was handed a machine it is not defined for."""


@dataclass(frozen=True, eq=False)
class MultipassAutomaton:
    passes: int
    states: frozenset
    initial: State
    input_alphabet: tuple
    stack_alphabet: frozenset
    mode: Mode
    transitions: Mapping[Key, tuple]
    end_nonfinal: Mapping[tuple, tuple]
    end_final: Mapping[tuple, bool]
    label: str = ""

    @property
    def deterministic(self) -> bool:
        return self.mode is Mode.DETERMINISTIC

    @property
    def negative(self) -> Verdict:
        return Verdict.REJECT if self.deterministic else Verdict.NO_DECISION

    def stack_keys(self):
        yield None
        yield from self.stack_alphabet

    def max_push(self) -> int:
        return max((len(z) for img in self.transitions.values() for _, z in img), default=0)

    def relabelled(self, label: str) -> "MultipassAutomaton":
        return replace(self, label=label)

    @cached_property
    def _compiled(self) -> "_Compiled":
        return _Compiled(self)

    def accepts(self, word: Sequence[str], budget: int = DEFAULT_BUDGET) -> bool:
        return run(self, word, budget).verdict is Verdict.ACCEPT

    def __repr__(self) -> str:
        name = self.label or "machine"
        return (f"<{name}: {self.passes}-pass {self.mode.value}, {len(self.states)} states, "
                f"{len(self.transitions)} transition keys>")


@dataclass(frozen=True)
class Configuration:
    pass_num: int
    state: State
    tape_position: int
    stack: tuple


@dataclass(frozen=True)
class RunTrace:
    verdict: Verdict
    steps_total: int
    steps_per_pass: tuple
    witness: tuple | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT


@dataclass(frozen=True)
class Violation:
    kind: str
    key: object
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.key!r}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


# --------------------------------------------------------------------------- validate

def validate(m: MultipassAutomaton) -> ValidationReport:
    rep = ValidationReport()
    bad = rep.violations.append
    k, Q, Sigma, Gamma = m.passes, m.states, set(m.input_alphabet), m.stack_alphabet

    if k < 1:
        bad(Violation("pass-count", k, "pass count must be positive"))
    if m.initial not in Q:
        bad(Violation("unknown-state", m.initial, "initial state not in the state set"))
    if len(Sigma) != len(m.input_alphabet):
        bad(Violation("alphabet", m.input_alphabet, "repeated input symbol"))
    missing = Sigma - Gamma
    if missing:
        bad(Violation("alphabet", sorted(map(str, missing)), "input symbols missing from the stack alphabet"))

    has_eps: set = set()
    reads: dict = defaultdict(set)
    for key, image in m.transitions.items():
        j, q, sigma, gamma = key
        if not 1 <= j <= k:
            bad(Violation("pass-range", key, f"pass {j} outside 1..{k}"))
        if q not in Q:
            bad(Violation("unknown-state", key, f"state {q!r} not declared"))
        if sigma is not None and sigma not in Sigma:
            bad(Violation("unknown-symbol", key, f"input {sigma!r} not in the input alphabet"))
        if gamma is not None and gamma not in Gamma:
            bad(Violation("unknown-symbol", key, f"stack key {gamma!r} not in the stack alphabet"))
        if sigma is None and gamma is None:
            bad(Violation("empty-stack-epsilon", key, "epsilon move keyed on the empty stack"))
        for q2, push in image:
            if q2 not in Q:
                bad(Violation("unknown-state", key, f"target {q2!r} not declared"))
            for s in push:
                if s not in Gamma:
                    bad(Violation("unknown-symbol", key, f"push symbol {s!r} not in the stack alphabet"))
        if m.deterministic and len(image) != 1:
            bad(Violation("multiple-images", key, f"{len(image)} images in deterministic mode"))
        if sigma is None:
            has_eps.add((j, q, gamma))
        else:
            reads[(j, q, gamma)].add(sigma)

    for key, targets in m.end_nonfinal.items():
        j, q, gamma = key
        if not 1 <= j < k:
            bad(Violation("pass-range", key, f"nonfinal end-marker entry for pass {j}"))
        if q not in Q or any(t not in Q for t in targets):
            bad(Violation("unknown-state", key, "end-marker entry references an undeclared state"))
        if gamma is not None and gamma not in Gamma:
            bad(Violation("unknown-symbol", key, f"stack key {gamma!r} not in the stack alphabet"))
        if m.deterministic and len(targets) != 1:
            bad(Violation("multiple-images", key, "end-marker map not single-valued"))

    for key in m.end_final:
        q, gamma = key
        if q not in Q or (gamma is not None and gamma not in Gamma):
            bad(Violation("unknown-state", key, "final end-marker entry references an undeclared item"))
    for q in Q:
        for gamma in m.stack_keys():
            if (q, gamma) not in m.end_final:
                bad(Violation("final-not-total", (q, gamma), "final end-marker map undefined"))

    if m.deterministic:
        for jqg in sorted(has_eps & set(reads), key=repr):
            bad(Violation("determinism", jqg, "both an epsilon move and a reading move"))
        for jqg in _missing_keys(m, has_eps, reads):
            rep.warnings.append(Violation("partial", jqg, "no move defined; the machine halts and rejects"))
    return rep


def reachable_keys(m: MultipassAutomaton):
    """Over-approximation of the ``(pass, state, top)`` triples a run can meet.

    States are followed through the transition graph pass by pass; a symbol
    can be on top during pass ``j`` only if some pass-``j`` move introduces it
    (re-pushing the popped key does not count).
    """
    by_pass: dict = defaultdict(list)
    for (j, q, s, g), img in m.transitions.items():
        by_pass[(j, q)].append((g, img))
    nxt: dict = defaultdict(set)
    for (j, q, g), ts in m.end_nonfinal.items():
        nxt[(j, q)].update(ts)
    seen = {(1, m.initial)}
    todo = [(1, m.initial)]
    while todo:
        j, q = todo.pop()
        succ = [(j, q2) for _, img in by_pass.get((j, q), ()) for q2, _ in img]
        succ += [(j + 1, q2) for q2 in nxt.get((j, q), ())]
        for x in succ:
            if x not in seen:
                seen.add(x)
                todo.append(x)
    tops: dict = defaultdict(lambda: {None})
    for (j, q) in seen:
        for g, img in by_pass.get((j, q), ()):
            for _, z in img:
                tops[j].update(x for x in z if x != g)
    for (j, q) in sorted(seen, key=repr):
        for g in tops[j]:
            yield j, q, g


def _missing_keys(m, has_eps, reads):
    full = len(m.input_alphabet)
    for j, q, gamma in reachable_keys(m):
        if (j, q, gamma) in has_eps:
            continue
        if len(reads.get((j, q, gamma), ())) < full:
            yield (j, q, gamma)
        if j < m.passes and (j, q, gamma) not in m.end_nonfinal:
            yield (j, q, gamma, "end")


def is_total(m: MultipassAutomaton) -> bool:
    has_eps = {(j, q, g) for (j, q, s, g) in m.transitions if s is None}
    reads: dict = defaultdict(set)
    for (j, q, s, g) in m.transitions:
        if s is not None:
            reads[(j, q, g)].add(s)
    return next(iter(_missing_keys(m, has_eps, reads)), None) is None


def is_complete(m: MultipassAutomaton) -> bool:
    """Deterministic, total, and free of divergent epsilon sequences."""
    return m.deterministic and is_total(m) and not divergence_analysis(m)


# --------------------------------------------------------------------------- execution

class _Compiled:
    """Integer-indexed tables; built once per machine."""

    def __init__(self, m: MultipassAutomaton):
        self.states = sorted(m.states, key=repr)
        sidx = {q: i for i, q in enumerate(self.states)}
        self.gammas = sorted(m.stack_alphabet, key=repr)
        gidx = {g: i for i, g in enumerate(self.gammas)}
        self.sigma = {s: i for i, s in enumerate(m.input_alphabet)}
        self.sidx, self.gidx = sidx, gidx
        gi = lambda g: -1 if g is None else gidx[g]  # noqa: E731
        self.trans = {}
        for (j, q, s, g), image in m.transitions.items():
            self.trans[(j, sidx[q], -1 if s is None else self.sigma[s], gi(g))] = tuple(
                (sidx[q2], tuple(gidx[x] for x in z)) for q2, z in image)
        self.det = {key: img[0] for key, img in self.trans.items() if img}
        self.endnf = {(j, sidx[q], gi(g)): tuple(sidx[t] for t in ts)
                      for (j, q, g), ts in m.end_nonfinal.items()}
        self.final = {(sidx[q], gi(g)) for (q, g), acc in m.end_final.items() if acc}
        self.initial = sidx[m.initial]
        self.passes = m.passes
        self.negative = m.negative

    def encode(self, word):
        try:
            return [self.sigma[s] for s in word]
        except KeyError as e:
            raise ValueError(f"symbol {e.args[0]!r} is not in the input alphabet") from None

    def config(self, j, q, pos, stack):
        return Configuration(j, self.states[q], pos, tuple(self.gammas[x] for x in stack))


def run(m: MultipassAutomaton, word: Sequence[str], budget: int = DEFAULT_BUDGET,
        trace: bool = False) -> RunTrace:
    """Execute ``m`` on ``word``.

    Deterministic machines follow their unique computation; a missing move
    halts with Reject. Nondeterministic machines are searched breadth-first over
    configurations with memoization, so an accepting branch is found even when
    other branches grow the stack forever; Accept carries one accepting computation
    as a witness. ``BUDGET_EXCEEDED`` is reported once more than ``budget``
    transitions have fired.
    """
    c = m._compiled
    w = c.encode(word)
    if m.deterministic:
        return _run_det(c, w, budget, trace)
    return _run_nondet(c, w, budget)


def _run_det(c: _Compiled, w, budget, trace) -> RunTrace:
    det, endnf, final = c.det, c.endnf, c.final
    n = len(w)
    q = c.initial
    per_pass = []
    total = 0
    path = [] if trace else None
    for j in range(1, c.passes + 1):
        stack: list = []
        pos = 0
        steps = 0
        while True:
            if trace:
                path.append(c.config(j, q, pos, stack))
            top = stack[-1] if stack else -1
            t = det.get((j, q, -1, top)) if top != -1 else None
            if t is None:
                if pos == n:
                    break
                t = det.get((j, q, w[pos], top))
                if t is None:
                    per_pass.append(steps)
                    return RunTrace(Verdict.REJECT, total + steps, tuple(per_pass), _wit(path))
                pos += 1
            steps += 1
            if total + steps > budget:
                per_pass.append(steps)
                return RunTrace(Verdict.BUDGET_EXCEEDED, total + steps, tuple(per_pass), _wit(path))
            if top != -1:
                stack.pop()
            q = t[0]
            stack.extend(t[1])
        steps += 1  # the end-marker read
        per_pass.append(steps)
        total += steps
        top = stack[-1] if stack else -1
        if j < c.passes:
            nxt = endnf.get((j, q, top))
            if not nxt:
                return RunTrace(Verdict.REJECT, total, tuple(per_pass), _wit(path))
            q = nxt[0]
        else:
            v = Verdict.ACCEPT if (q, top) in final else Verdict.REJECT
            return RunTrace(v, total, tuple(per_pass), _wit(path))
    raise AssertionError("unreachable")


def _wit(path):
    return tuple(path) if path is not None else None


def _run_nondet(c: _Compiled, w, budget) -> RunTrace:
    trans, endnf, final, k = c.trans, c.endnf, c.final, c.passes
    n = len(w)
    # stacks are interned as nodes: id -> (below id, top symbol); id 0 is empty
    nodes: list = [(-1, -1)]
    ids: dict = {}

    def push(sid, z):
        for x in z:
            key = (sid, x)
            nid = ids.get(key)
            if nid is None:
                nid = ids[key] = len(nodes)
                nodes.append(key)
            sid = nid
        return sid

    start = (1, c.initial, 0, 0)
    parent = {start: None}
    todo = deque([start])
    per_pass = [0] * k
    steps = 0
    while todo:
        cfg = todo.popleft()
        j, q, pos, sid = cfg
        below, top = nodes[sid]
        succ = []
        if top != -1:
            for q2, z in trans.get((j, q, -1, top), ()):
                succ.append((j, q2, pos, push(below, z)))
        if pos < n:
            base = below if top != -1 else sid
            for q2, z in trans.get((j, q, w[pos], top), ()):
                succ.append((j, q2, pos + 1, push(base, z)))
        else:
            if j < k:
                for q2 in endnf.get((j, q, top), ()):
                    succ.append((j + 1, q2, 0, 0))
            elif (q, top) in final:
                steps += 1
                per_pass[j - 1] += 1
                return RunTrace(Verdict.ACCEPT, steps, tuple(per_pass), _path(c, parent, cfg, nodes))
        for s in succ:
            steps += 1
            per_pass[j - 1] += 1
            if steps > budget:
                return RunTrace(Verdict.BUDGET_EXCEEDED, steps, tuple(per_pass))
            if s not in parent:
                parent[s] = cfg
                todo.append(s)
    return RunTrace(Verdict.NO_DECISION, steps, tuple(per_pass))


def _unwind(nodes, sid):
    out = []
    while sid:
        sid, x = nodes[sid]
        out.append(x)
    return tuple(reversed(out))


def _path(c, parent, cfg, nodes):
    out = []
    while cfg is not None:
        j, q, pos, sid = cfg
        out.append(c.config(j, q, pos, _unwind(nodes, sid)))
        cfg = parent[cfg]
    return tuple(reversed(out))


def replay(m: MultipassAutomaton, word: Sequence[str], witness: Sequence[Configuration]) -> bool:
    """Check that ``witness`` is a legal accepting computation of ``m`` on ``word``."""
    if not witness:
        return False
    first = witness[0]
    if (first.pass_num, first.state, first.tape_position, first.stack) != (1, m.initial, 0, ()):
        return False
    n = len(word)
    for a, b in zip(witness, witness[1:]):
        if not _legal_step(m, word, n, a, b):
            return False
    last = witness[-1]
    top = last.stack[-1] if last.stack else None
    return (last.pass_num == m.passes and last.tape_position == n
            and m.end_final.get((last.state, top), False))


def _legal_step(m, word, n, a: Configuration, b: Configuration) -> bool:
    top = a.stack[-1] if a.stack else None
    below = a.stack[:-1] if a.stack else ()
    if b.pass_num == a.pass_num + 1:
        return (a.tape_position == n and b.tape_position == 0 and b.stack == ()
                and b.state in m.end_nonfinal.get((a.pass_num, a.state, top), ()))
    if b.pass_num != a.pass_num:
        return False
    if b.tape_position == a.tape_position and top is not None:
        image = m.transitions.get((a.pass_num, a.state, None, top), ())
    elif b.tape_position == a.tape_position + 1 and a.tape_position < n:
        image = m.transitions.get((a.pass_num, a.state, word[a.tape_position], top), ())
    else:
        return False
    return any(q2 == b.state and below + tuple(z) == b.stack for q2, z in image)


# --------------------------------------------------------------------------- epsilon analysis

@dataclass(frozen=True)
class EpsilonAnalysis:
    divergent: frozenset
    bound: int  # B: longest convergent epsilon sequence plus the move that ends it


def epsilon_analysis(m: MultipassAutomaton) -> EpsilonAnalysis:
    if not m.deterministic:
        raise PreconditionError("epsilon analysis requires a deterministic machine")
    eps = {(j, q, g): img[0] for (j, q, s, g), img in m.transitions.items()
           if s is None and img}
    divergent = set()
    longest = 0
    for key in eps:
        n = _eps_run(eps, *key)
        if n is None:
            divergent.add(key)
        else:
            longest = max(longest, n)
    return EpsilonAnalysis(frozenset(divergent), longest + 1)


def divergence_analysis(m: MultipassAutomaton) -> frozenset:
    """Keys ``(pass, state, top)`` from which an unbounded epsilon sequence starts
    without ever erasing the starting top symbol."""
    return epsilon_analysis(m).divergent


def _eps_run(eps, j, q, gamma):
    """Length of the epsilon-only run from stack ``[gamma]``; None if it diverges."""
    stack = [gamma]
    seen = set()
    marks: dict = defaultdict(list)
    steps = 0
    while stack:
        t = eps.get((j, q, stack[-1]))
        if t is None:
            return steps
        cfg = (q, tuple(stack))
        if cfg in seen:
            return None
        seen.add(cfg)
        h = len(stack)
        hs = marks[(q, stack[-1])]
        if any(h1 < h for h1 in hs):
            return None
        hs.append(h)
        stack.pop()
        q = t[0]
        stack.extend(t[1])
        h2 = len(stack)
        if h2 < h:
            for lst in marks.values():
                lst[:] = [x for x in lst if x <= h2]
        steps += 1
    return steps


# --------------------------------------------------------------------------- completion

def fresh(existing: Iterable, base: str) -> str:
    existing = set(existing)
    name, i = base, 0
    while name in existing:
        i += 1
        name = f"{base}{i}"
    return name


def make_complete(m: MultipassAutomaton) -> MultipassAutomaton:
    """A complete deterministic machine with the same language.

    Divergent epsilon keys and undefined moves are routed to a fresh sink that
    reads through the remaining passes and rejects.
    """
    if not m.deterministic:
        raise PreconditionError("make_complete requires a deterministic machine")
    divergent = divergence_analysis(m)
    r = fresh(m.states, "sink")
    states = m.states | {r}
    trans = dict(m.transitions)
    for (j, q, g) in divergent:
        trans[(j, q, None, g)] = ((r, (g,)),)
    has_eps = {(j, q, g) for (j, q, s, g) in trans if s is None}
    for j in range(1, m.passes + 1):
        for g in m.stack_keys():
            keep = () if g is None else (g,)
            for s in m.input_alphabet:
                trans[(j, r, s, g)] = ((r, keep),)
    end_nonfinal = dict(m.end_nonfinal)
    for j, q, g in reachable_keys(m):
        if j < m.passes:
            end_nonfinal.setdefault((j, q, g), (r,))
        if (j, q, g) in has_eps:
            continue
        keep = () if g is None else (g,)
        for s in m.input_alphabet:
            trans.setdefault((j, q, s, g), ((r, keep),))
    for j in range(1, m.passes):
        for g in m.stack_keys():
            end_nonfinal[(j, r, g)] = (r,)
    end_final = {(q, g): m.end_final.get((q, g), False) for q in states for g in m.stack_keys()}
    for g in m.stack_keys():
        end_final[(r, g)] = False
    if divergent:
        log.info("make_complete: rerouted %d divergent keys", len(divergent))
    return replace(m, states=frozenset(states), transitions=trans, end_nonfinal=end_nonfinal,
                   end_final=end_final, label=f"complete({m.label})" if m.label else "")


def completed(m: MultipassAutomaton) -> MultipassAutomaton:
    """``m`` itself when already complete, else ``make_complete(m)``."""
    return m if is_complete(m) else make_complete(m)


# --------------------------------------------------------------------------- small builders

def build(passes, states, initial, input_alphabet, stack_alphabet=(), mode=Mode.DETERMINISTIC,
          transitions=None, end_nonfinal=None, accept=(), label="") -> MultipassAutomaton:
    """Convenience constructor.

    ``transitions`` maps keys to one ``(state, push)`` tuple or to a list of
    them; ``end_nonfinal`` values may be a single state or a collection;
    ``accept`` lists the ``(state, top)`` pairs accepted at the final
    end-marker (everything else is negative). The input alphabet is added to
    the stack alphabet.
    """
    sigma = tuple(input_alphabet)
    gamma = frozenset(stack_alphabet) | frozenset(sigma)
    states = frozenset(states)
    trans = {}
    for key, img in (transitions or {}).items():
        pairs = img if isinstance(img, list) else [img]
        trans[key] = tuple((q2, tuple(z)) for q2, z in pairs)
    enf = {}
    for key, ts in (end_nonfinal or {}).items():
        enf[key] = (ts,) if not isinstance(ts, (list, tuple, set, frozenset)) else tuple(ts)
    acc = set(accept)
    final = {(q, g): (q, g) in acc for q in states for g in (None, *gamma)}
    return MultipassAutomaton(passes, states, initial, sigma, gamma, Mode(mode), trans, enf,
                              final, label)

