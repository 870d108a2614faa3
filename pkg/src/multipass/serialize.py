"""JSON documents for machines, pushdown automata, transducers and group specs.

Push words are arrays written bottom to top: the last symbol becomes the new
top of the stack. ``"eps"`` as an input and ``"empty"`` as a stack key are
reserved.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .automaton import Mode, MultipassAutomaton
from .pda import PushdownAutomaton
from .specs import spec_from_json, spec_to_json
from .transducers import Gsm

EPS_NAME = "eps"
EMPTY_NAME = "empty"
RESERVED = frozenset({EPS_NAME, EMPTY_NAME})


class ParseError(ValueError):
    """Malformed document; ``location`` is a JSON path such as ``$.transitions[2].push``."""

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


# --------------------------------------------------------------------------- labels

def render(x: Any) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(render(y) for y in x) + ")"
    if x is None:
        return "_"
    return str(x)


def _labeller(items, taken=(), reserved=frozenset()) -> dict:
    """Injective map item -> label; strings keep their name where possible."""
    out: dict = {}
    used = set(taken)
    ordered = sorted(items, key=lambda x: (not isinstance(x, str), render(x), repr(x)))
    for x in ordered:
        base = render(x)
        name, i = base, 0
        while name in used or name in reserved:
            i += 1
            name = f"{base}#{i}"
        used.add(name)
        out[x] = name
    return out


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------- machines

def machine_to_dict(m: MultipassAutomaton) -> dict:
    sigma = list(m.input_alphabet)
    clash = [a for a in sigma if a in RESERVED]
    if clash:
        raise ValueError(f"input symbols {clash} use reserved names")
    sq = _labeller(m.states)
    extra = [g for g in m.stack_alphabet if g not in set(sigma)]
    sg = {a: a for a in sigma}
    sg.update(_labeller(extra, taken=sigma, reserved=RESERVED))

    def key(g):
        return EMPTY_NAME if g is None else sg[g]

    det = m.deterministic
    trans = []
    for (j, q, a, g), img in m.transitions.items():
        for q2, z in img:
            trans.append({"pass": j, "state": sq[q], "input": EPS_NAME if a is None else a,
                          "stack": key(g), "to": sq[q2], "push": [sg[x] for x in z]})
    trans.sort(key=lambda d: (d["pass"], d["state"], d["input"], d["stack"], d["to"], d["push"]))
    enf = [{"pass": j, "state": sq[q], "stack": key(g), "to": sq[t]}
           for (j, q, g), ts in m.end_nonfinal.items() for t in ts]
    enf.sort(key=lambda d: (d["pass"], d["state"], d["stack"], d["to"]))
    neg = "reject" if det else "nodecision"
    fin = [{"state": sq[q], "stack": key(g), "verdict": "accept" if acc else neg}
           for (q, g), acc in m.end_final.items()]
    fin.sort(key=lambda d: (d["state"], d["stack"]))
    doc = {
        "passes": m.passes,
        "mode": m.mode.value,
        "states": sorted(sq.values()),
        "initial": sq[m.initial],
        "input_alphabet": sigma,
        "stack_alphabet": sorted(sg.values()),
        "stack_top": "last symbol of each push word",
        "transitions": trans,
        "end_nonfinal": enf,
        "end_final": fin,
    }
    if m.label:
        doc["label"] = m.label
    return doc


def dumps_machine(m: MultipassAutomaton) -> str:
    return _dump(machine_to_dict(m))


class _Reader:
    def __init__(self, doc):
        self.doc = doc

    @staticmethod
    def field(obj, name, path, kind=None):
        if not isinstance(obj, dict):
            raise ParseError(path, "expected an object")
        if name not in obj:
            raise ParseError(path, f"missing field {name!r}")
        val = obj[name]
        if kind is not None and not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
            raise ParseError(f"{path}.{name}", f"expected {_kind_name(kind)}")
        return val

    @staticmethod
    def strings(val, path) -> list:
        if not isinstance(val, list):
            raise ParseError(path, "expected an array")
        for i, x in enumerate(val):
            if not isinstance(x, str):
                raise ParseError(f"{path}[{i}]", "expected a string")
        return val

    @staticmethod
    def member(x, allowed, path, what):
        if x not in allowed:
            raise ParseError(path, f"unknown {what} {x!r}")
        return x


def _kind_name(kind) -> str:
    names = {int: "an integer", str: "a string", list: "an array", dict: "an object"}
    if isinstance(kind, tuple):
        return " or ".join(names.get(k, k.__name__) for k in kind)
    return names.get(kind, kind.__name__)


def _parse_mode(val, path) -> Mode:
    try:
        return Mode(val)
    except ValueError:
        raise ParseError(path, f"mode must be 'deterministic' or 'nondeterministic', not {val!r}") from None


def machine_from_dict(doc: dict) -> MultipassAutomaton:
    r = _Reader
    k = r.field(doc, "passes", "$", int)
    if k < 1:
        raise ParseError("$.passes", "must be a positive integer")
    mode = _parse_mode(r.field(doc, "mode", "$", str), "$.mode")
    states = r.strings(r.field(doc, "states", "$"), "$.states")
    if len(set(states)) != len(states):
        raise ParseError("$.states", "duplicate state names")
    states_set = set(states)
    initial = r.member(r.field(doc, "initial", "$", str), states_set, "$.initial", "state")
    sigma = r.strings(r.field(doc, "input_alphabet", "$"), "$.input_alphabet")
    gamma = r.strings(r.field(doc, "stack_alphabet", "$"), "$.stack_alphabet")
    for i, a in enumerate(sigma):
        if a in RESERVED:
            raise ParseError(f"$.input_alphabet[{i}]", f"{a!r} is a reserved name")
    for i, g in enumerate(gamma):
        if g in RESERVED:
            raise ParseError(f"$.stack_alphabet[{i}]", f"{g!r} is a reserved name")
    gamma_set = set(gamma) | set(sigma)
    sigma_set = set(sigma)

    def key(val, path):
        if not isinstance(val, str):
            raise ParseError(path, "expected a string")
        return None if val == EMPTY_NAME else r.member(val, gamma_set, path, "stack symbol")

    def passno(val, path, limit):
        if not isinstance(val, int) or isinstance(val, bool) or not 1 <= val <= limit:
            raise ParseError(path, f"pass must be an integer in 1..{limit}")
        return val

    trans: dict = {}
    for i, t in enumerate(r.field(doc, "transitions", "$", list)):
        p = f"$.transitions[{i}]"
        j = passno(r.field(t, "pass", p), f"{p}.pass", k)
        q = r.member(r.field(t, "state", p, str), states_set, f"{p}.state", "state")
        a = r.field(t, "input", p, str)
        a = None if a == EPS_NAME else r.member(a, sigma_set, f"{p}.input", "input symbol")
        g = key(r.field(t, "stack", p), f"{p}.stack")
        q2 = r.member(r.field(t, "to", p, str), states_set, f"{p}.to", "state")
        push = r.strings(r.field(t, "push", p), f"{p}.push")
        for n, x in enumerate(push):
            r.member(x, gamma_set, f"{p}.push[{n}]", "stack symbol")
        img = trans.setdefault((j, q, a, g), [])
        if (q2, tuple(push)) in img:
            raise ParseError(p, "duplicate transition")
        img.append((q2, tuple(push)))
    enf: dict = {}
    for i, t in enumerate(r.field(doc, "end_nonfinal", "$", list)):
        p = f"$.end_nonfinal[{i}]"
        j = passno(r.field(t, "pass", p), f"{p}.pass", k - 1) if k > 1 else None
        if j is None:
            raise ParseError(p, "a one-pass machine has no nonfinal end-marker moves")
        q = r.member(r.field(t, "state", p, str), states_set, f"{p}.state", "state")
        g = key(r.field(t, "stack", p), f"{p}.stack")
        q2 = r.member(r.field(t, "to", p, str), states_set, f"{p}.to", "state")
        enf.setdefault((j, q, g), []).append(q2)
    fin: dict = {}
    for i, t in enumerate(r.field(doc, "end_final", "$", list)):
        p = f"$.end_final[{i}]"
        q = r.member(r.field(t, "state", p, str), states_set, f"{p}.state", "state")
        g = key(r.field(t, "stack", p), f"{p}.stack")
        v = r.field(t, "verdict", p, str)
        if v not in ("accept", "reject", "nodecision"):
            raise ParseError(f"{p}.verdict", f"unknown verdict {v!r}")
        if (q, g) in fin:
            raise ParseError(p, "duplicate final entry")
        fin[(q, g)] = v == "accept"
    label = doc.get("label", "")
    return MultipassAutomaton(k, frozenset(states), initial, tuple(sigma), frozenset(gamma_set), mode,
                              {kk: tuple(v) for kk, v in trans.items()},
                              {kk: tuple(v) for kk, v in enf.items()}, fin,
                              label if isinstance(label, str) else "")


def loads_machine(text: str) -> MultipassAutomaton:
    return machine_from_dict(_loads(text))


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", e.msg) from None


# --------------------------------------------------------------------------- pda

def pda_to_dict(p: PushdownAutomaton) -> dict:
    sigma = list(p.input_alphabet)
    sq = _labeller(p.states)
    sg = _labeller(p.stack_alphabet, reserved=RESERVED)
    trans = [{"state": sq[q], "input": EPS_NAME if a is None else a, "stack": sg[g],
              "to": sq[q2], "push": [sg[x] for x in z]}
             for (q, a, g), img in p.transitions.items() for q2, z in img]
    trans.sort(key=lambda d: (d["state"], d["input"], d["stack"], d["to"], d["push"]))
    doc = {"mode": p.mode.value, "states": sorted(sq.values()), "initial": sq[p.initial],
           "input_alphabet": sigma, "stack_alphabet": sorted(sg.values()),
           "start_symbol": sg[p.start_symbol], "final_states": sorted(sq[q] for q in p.final_states),
           "stack_top": "last symbol of each push word", "transitions": trans}
    if p.label:
        doc["label"] = p.label
    return doc


def pda_from_dict(doc: dict) -> PushdownAutomaton:
    r = _Reader
    mode = _parse_mode(r.field(doc, "mode", "$", str), "$.mode")
    states = set(r.strings(r.field(doc, "states", "$"), "$.states"))
    sigma = r.strings(r.field(doc, "input_alphabet", "$"), "$.input_alphabet")
    gamma = set(r.strings(r.field(doc, "stack_alphabet", "$"), "$.stack_alphabet"))
    initial = r.member(r.field(doc, "initial", "$", str), states, "$.initial", "state")
    z0 = r.member(r.field(doc, "start_symbol", "$", str), gamma, "$.start_symbol", "stack symbol")
    finals = r.strings(r.field(doc, "final_states", "$"), "$.final_states")
    for i, q in enumerate(finals):
        r.member(q, states, f"$.final_states[{i}]", "state")
    trans: dict = {}
    for i, t in enumerate(r.field(doc, "transitions", "$", list)):
        p = f"$.transitions[{i}]"
        q = r.member(r.field(t, "state", p, str), states, f"{p}.state", "state")
        a = r.field(t, "input", p, str)
        a = None if a == EPS_NAME else r.member(a, set(sigma), f"{p}.input", "input symbol")
        g = r.member(r.field(t, "stack", p, str), gamma, f"{p}.stack", "stack symbol")
        q2 = r.member(r.field(t, "to", p, str), states, f"{p}.to", "state")
        push = r.strings(r.field(t, "push", p), f"{p}.push")
        for n, x in enumerate(push):
            r.member(x, gamma, f"{p}.push[{n}]", "stack symbol")
        trans.setdefault((q, a, g), []).append((q2, tuple(push)))
    return PushdownAutomaton(frozenset(states), tuple(sigma), frozenset(gamma),
                             {kk: tuple(v) for kk, v in trans.items()}, initial, frozenset(finals), z0,
                             mode, doc.get("label", ""))


# --------------------------------------------------------------------------- gsm

def gsm_to_dict(s: Gsm) -> dict:
    sq = _labeller(s.states)
    rules = [{"state": sq[q], "input": a, "output": list(u), "to": sq[q2]}
             for (q, a), (u, q2) in s.rules.items()]
    rules.sort(key=lambda d: (d["state"], d["input"]))
    return {"states": sorted(sq.values()), "initial": sq[s.initial],
            "input_alphabet": list(s.input_alphabet), "output_alphabet": list(s.output_alphabet),
            "rules": rules}


def gsm_from_dict(doc: dict) -> Gsm:
    r = _Reader
    states = set(r.strings(r.field(doc, "states", "$"), "$.states"))
    initial = r.member(r.field(doc, "initial", "$", str), states, "$.initial", "state")
    rules_doc = r.field(doc, "rules", "$", list)
    sigma = doc.get("input_alphabet")
    delta = doc.get("output_alphabet")
    rules: dict = {}
    seen_in, seen_out = [], []
    for i, t in enumerate(rules_doc):
        p = f"$.rules[{i}]"
        q = r.member(r.field(t, "state", p, str), states, f"{p}.state", "state")
        a = r.field(t, "input", p, str)
        u = tuple(r.strings(r.field(t, "output", p), f"{p}.output"))
        q2 = r.member(r.field(t, "to", p, str), states, f"{p}.to", "state")
        if (q, a) in rules:
            raise ParseError(p, "gsm rules must be deterministic")
        rules[(q, a)] = (u, q2)
        seen_in.append(a)
        seen_out.extend(u)
    sigma = r.strings(sigma, "$.input_alphabet") if sigma is not None else list(dict.fromkeys(seen_in))
    delta = r.strings(delta, "$.output_alphabet") if delta is not None else list(dict.fromkeys(seen_out))
    for i, t in enumerate(rules_doc):
        if t["input"] not in sigma:
            raise ParseError(f"$.rules[{i}].input", f"unknown input symbol {t['input']!r}")
        for n, x in enumerate(t["output"]):
            if x not in delta:
                raise ParseError(f"$.rules[{i}].output[{n}]", f"unknown output symbol {x!r}")
    return Gsm(frozenset(states), initial, tuple(sigma), tuple(delta), rules)


# --------------------------------------------------------------------------- documents

def spec_from_dict(doc: dict):
    try:
        return spec_from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("$", f"invalid group spec: {e}") from None


def document_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise ParseError("$", "expected an object")
    if "passes" in doc:
        return "machine"
    if "start_symbol" in doc:
        return "pda"
    if "rules" in doc:
        return "gsm"
    if "type" in doc:
        return "spec"
    raise ParseError("$", "cannot tell what kind of document this is")


_READERS = {"machine": machine_from_dict, "pda": pda_from_dict, "gsm": gsm_from_dict,
            "spec": spec_from_dict}


def loads(text: str, expect: str | None = None):
    doc = _loads(text)
    kind = document_kind(doc)
    if expect is not None and kind != expect:
        raise ParseError("$", f"expected a {expect} document, found a {kind}")
    return _READERS[kind](doc)


def load(path, expect: str | None = None):
    return loads(Path(path).read_text(encoding="utf-8"), expect)


def dumps(obj) -> str:
    if isinstance(obj, MultipassAutomaton):
        return _dump(machine_to_dict(obj))
    if isinstance(obj, PushdownAutomaton):
        return _dump(pda_to_dict(obj))
    if isinstance(obj, Gsm):
        return _dump(gsm_to_dict(obj))
    return _dump(spec_to_json(obj))


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
