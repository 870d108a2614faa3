"""Word-problem machines for group families and the group-level closure constructions."""
from __future__ import annotations

import itertools
import logging
from typing import Mapping, Sequence

from .automaton import MultipassAutomaton, build
from .closures import intersection, union
from .oracles import oracle_for
from .specs import (
    Double,
    DirectProduct,
    Finite,
    FiniteExtension,
    FiniteQuotient,
    Free,
    FreeAbelian,
    GroupSpec,
    Hnn,
    MappingTorus,
    alphabet_of,
)
from .transducers import Gsm, homomorphism, interleaved_product, inverse_gsm, left_quotient
from .words import formal_inverse, free_reduce, inv, is_inverse_symbol, substitute, words_upto

log = logging.getLogger(__name__)

PHI_WORD_CAP = 10_000
VALIDATION_LENGTH = 4


class SpecError(ValueError):
    """A group spec failed validation; ``problems`` names each violated condition."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# --------------------------------------------------------------------------- validation

def validate_spec(spec: GroupSpec, check_len: int = VALIDATION_LENGTH) -> list:
    """Every violated invariant of ``spec`` (empty when valid)."""
    if isinstance(spec, (Free, FreeAbelian)):
        gens = spec.generators
        out = []
        if spec.rank < 1:
            out.append("rank must be positive")
        if len(gens) != spec.rank:
            out.append("number of names differs from the rank")
        out += _name_problems(gens)
        return out
    if isinstance(spec, Finite):
        out = spec.group.problems() + _name_problems(spec.generators)
        out += [f"generator {x!r} maps outside the group" for x, v in spec.images.items()
                if v not in spec.group.elements]
        return out
    if isinstance(spec, DirectProduct):
        out = validate_spec(spec.left, check_len) + validate_spec(spec.right, check_len)
        if set(spec.left.generators) & set(spec.right.generators):
            out.append("factors share generator names")
        return out
    if isinstance(spec, FiniteExtension):
        return _extension_problems(spec, check_len)
    if isinstance(spec, FiniteQuotient):
        return _quotient_problems(spec, check_len)
    if isinstance(spec, MappingTorus):
        return validate_spec(spec.as_hnn(), check_len)
    if isinstance(spec, Double):
        out = validate_spec(spec.as_hnn(), check_len)
        out += _name_problems(spec.generators)
        return out
    if isinstance(spec, Hnn):
        return _hnn_problems(spec, check_len)
    return [f"not a group spec: {type(spec).__name__}"]


def _name_problems(gens) -> list:
    out = []
    if len(set(gens)) != len(gens):
        out.append("generator names repeat")
    out += [f"generator name {g!r} looks like an inverse" for g in gens if is_inverse_symbol(g)]
    out += [f"generator name {g!r} is empty or contains whitespace" for g in gens
            if not g or any(c.isspace() for c in g)]
    return out


def _extension_problems(spec: FiniteExtension, check_len: int) -> list:
    out = validate_spec(spec.subgroup, check_len) + _name_problems(spec.generators)
    if out:
        return out
    sub = oracle_for(spec.subgroup)
    sub_alpha = set(alphabet_of(spec.subgroup))
    k = spec.cosets
    if k < 1:
        return ["coset count must be positive"]
    alpha = alphabet_of(spec)
    for i, x in itertools.product(range(k), alpha):
        if (i, x) not in spec.step or (i, x) not in spec.rewrite:
            out.append(f"coset table has no entry for ({i}, {x!r})")
            continue
        j = spec.step[(i, x)]
        if not 0 <= j < k:
            out.append(f"coset step ({i}, {x!r}) leaves the coset range")
            continue
        bad = [y for y in spec.rewrite[(i, x)] if y not in sub_alpha]
        if bad:
            out.append(f"rewrite word ({i}, {x!r}) uses non-subgroup symbols {bad}")
    if out:
        return out
    for i, x in itertools.product(range(k), alpha):
        j = spec.step[(i, x)]
        if spec.step[(j, inv(x))] != i:
            out.append(f"coset step is not inverse-consistent at ({i}, {x!r})")
        elif not sub.is_identity(spec.rewrite[(i, x)] + spec.rewrite[(j, inv(x))]):
            out.append(f"rewrite words at ({i}, {x!r}) and ({j}, {inv(x)!r}) do not cancel")
    return out


def _quotient_problems(spec: FiniteQuotient, check_len: int) -> list:
    out = validate_spec(spec.base, check_len)
    if out:
        return out
    base = oracle_for(spec.base)
    alpha = set(alphabet_of(spec.base))
    for n in spec.normal_words:
        if any(x not in alpha for x in n):
            out.append(f"normal subgroup word {n!r} uses unknown symbols")
    if out:
        return out
    values = {base.evaluate(n) for n in spec.normal_words}
    if base.evaluate(()) not in values:
        out.append("normal subgroup words do not contain the identity")
    for n in spec.normal_words:
        if base.evaluate(formal_inverse(n)) not in values:
            out.append(f"inverse of {n!r} is missing from the normal subgroup words")
    return out


def _hnn_problems(spec: Hnn, check_len: int) -> list:
    out = validate_spec(spec.base, check_len)
    if out:
        return out
    K = spec.quotient
    gens = spec.base.generators
    alpha = alphabet_of(spec.base)
    if spec.stable in alpha or is_inverse_symbol(spec.stable):
        out.append(f"stable letter {spec.stable!r} clashes with the base alphabet")
    if spec.order < 1:
        out.append("order of phi must be positive")
    for x in gens:
        if x not in spec.phi:
            out.append(f"phi is not given on generator {x!r}")
        elif any(y not in alpha for y in spec.phi[x]):
            out.append(f"phi({x!r}) uses unknown symbols")
        if spec.psi.get(x) not in K.elements:
            out.append(f"psi({x!r}) is not an element of the quotient")
    out += K.problems()
    if out:
        return out
    pb = spec.phi_bar
    if set(pb) != set(K.elements) or set(pb.values()) != set(K.elements):
        return out + ["phi_bar is not a bijection of the quotient"]
    for a, b in itertools.product(K.elements, K.elements):
        if pb[K.mul(a, b)] != K.mul(pb[a], pb[b]):
            out.append("phi_bar is not a homomorphism")
            break
    for a in K.elements:
        c = a
        for _ in range(spec.order):
            c = pb[c]
        if c != a:
            out.append(f"phi_bar^{spec.order} moves {a!r}")
            break
    J = spec.J
    if K.identity not in J or any(K.mul(a, b) not in J for a in J for b in J):
        out.append("J is not a subgroup of the quotient")
    if {pb[a] for a in J} != set(J):
        out.append("phi_bar does not preserve J")
    for x in gens:
        lhs = K.product(spec.psi_of(y) for y in spec.phi[x])
        if lhs != pb[spec.psi[x]]:
            out.append(f"psi(phi({x!r})) differs from phi_bar(psi({x!r}))")
    if out:
        return out
    base = oracle_for(spec.base)
    try:
        phi_power_words(spec)
    except ValueError as e:
        return [str(e)]
    for x in gens:
        w = (x,)
        for _ in range(spec.order):
            w = substitute(w, spec.phi)
        if not base.is_identity(w + (inv(x),)):
            out.append(f"phi^{spec.order}({x!r}) is not {x!r} in the base group")
    for w in words_upto(alpha, check_len):
        if base.is_identity(w):
            if K.product(spec.psi_of(y) for y in w) != K.identity:
                out.append(f"psi is not well defined: relator {' '.join(w)!r}")
                break
            if not base.is_identity(substitute(w, spec.phi)):
                out.append(f"phi is not well defined: relator {' '.join(w)!r}")
                break
    return out


def check(spec: GroupSpec) -> None:
    problems = validate_spec(spec)
    if problems:
        raise SpecError(problems)


# --------------------------------------------------------------------------- builders

def build_wp(spec: GroupSpec, validate: bool = True) -> MultipassAutomaton:
    """Machine accepting the words over ``spec``'s alphabet equal to 1 in the group."""
    if validate:
        check(spec)
    if isinstance(spec, Free):
        return free_wp(spec.generators)
    if isinstance(spec, FreeAbelian):
        return free_abelian_wp(spec.generators)
    if isinstance(spec, Finite):
        return finite_wp(spec)
    if isinstance(spec, DirectProduct):
        m = interleaved_product([build_wp(spec.left, False), build_wp(spec.right, False)])
        return m.relabelled("WP(direct product)")
    if isinstance(spec, FiniteExtension):
        return extension_wp(spec)
    if isinstance(spec, FiniteQuotient):
        base = build_wp(spec.base, False)
        lq = left_quotient(base, [formal_inverse(n) for n in spec.normal_words])
        return union(lq, base).relabelled("WP(finite quotient)")
    if isinstance(spec, MappingTorus):
        return hnn_wp(spec.as_hnn()).relabelled("WP(mapping torus)")
    if isinstance(spec, Hnn):
        return hnn_wp(spec)
    if isinstance(spec, Double):
        h = hnn_wp(spec.as_hnn())
        t = spec.as_hnn().stable
        images = {}
        for x in spec.base.generators:
            images[x] = (x,)
            images[x + spec.bar] = (t, x, inv(t))
        return wp_pullback(h, images).relabelled("WP(double)")
    raise TypeError(f"not a group spec: {spec!r}")


def free_wp(generators: Sequence[str]) -> MultipassAutomaton:
    """One pass; the stack holds the free reduction of the prefix read so far."""
    sigma = tuple(itertools.chain.from_iterable((g, inv(g)) for g in generators))
    trans = {}
    for x in sigma:
        trans[(1, "q", x, None)] = ("q", (x,))
        for y in sigma:
            trans[(1, "q", x, y)] = ("q", ()) if y == inv(x) else ("q", (y, x))
    return build(1, {"q"}, "q", sigma, transitions=trans, accept=[("q", None)],
                 label=f"WP(F{len(generators)})")


def free_abelian_wp(generators: Sequence[str]) -> MultipassAutomaton:
    """Pass ``j`` keeps the exponent sum of generator ``j`` as a signed unary
    counter (a stack of ``x`` or of ``x^-1``); a nonzero count at the end of a
    pass sends the machine to a reading reject state."""
    sigma = tuple(itertools.chain.from_iterable((g, inv(g)) for g in generators))
    r = len(generators)
    trans = {}
    end_nonfinal = {}
    for j, g in enumerate(generators, start=1):
        for x in sigma:
            for top in (None, *sigma):
                keep = () if top is None else (top,)
                if x in (g, inv(g)):
                    if top == inv(x):
                        img = ("q", ())
                    else:
                        img = ("q", keep + (x,))
                else:
                    img = ("q", keep)
                trans[(j, "q", x, top)] = img
                trans[(j, "r", x, top)] = ("r", keep)
        if j < r:
            for top in (None, *sigma):
                end_nonfinal[(j, "q", top)] = "q" if top is None else "r"
                end_nonfinal[(j, "r", top)] = "r"
    return build(r, {"q", "r"}, "q", sigma, transitions=trans, end_nonfinal=end_nonfinal,
                 accept=[("q", None)], label=f"WP(Z^{r})")


def finite_wp(spec: Finite) -> MultipassAutomaton:
    """Stackless: the state is the group element of the prefix."""
    g = spec.group
    sigma = alphabet_of(spec)
    trans = {(1, e, x, None): (g.mul(e, spec.letter_value(x)), ()) for e in g.elements for x in sigma}
    return build(1, set(g.elements), g.identity, sigma, transitions=trans,
                 accept=[(g.identity, None)], label="WP(finite)")


def extension_wp(spec: FiniteExtension) -> MultipassAutomaton:
    """Track the right coset in a gsm and feed the subgroup machine the
    rewrite words; accept in the trivial coset only."""
    sub = build_wp(spec.subgroup, False)
    alpha = alphabet_of(spec)
    rules = {(i, x): (tuple(spec.rewrite[(i, x)]), spec.step[(i, x)])
             for i in range(spec.cosets) for x in alpha}
    s = Gsm(frozenset(range(spec.cosets)), 0, alpha, sub.input_alphabet, rules)
    return inverse_gsm(sub, s, accept_states={0}, label="WP(finite extension)")


def wp_pullback(machine: MultipassAutomaton, generator_images: Mapping[str, Sequence[str]]
                ) -> MultipassAutomaton:
    """Inverse image under ``y -> w(y)``, ``y^-1 -> w(y)^-1``."""
    images = {}
    for y, w in generator_images.items():
        images[y] = tuple(w)
        images[inv(y)] = formal_inverse(w)
    h = homomorphism(images, machine.input_alphabet)
    return inverse_gsm(machine, h, label=f"pullback({machine.label})" if machine.label else "")


# --------------------------------------------------------------------------- HNN extensions

def phi_power_words(spec: Hnn, cap: int = PHI_WORD_CAP) -> list:
    """``words[m][x] = phi^m(x)`` (freely reduced) for ``0 <= m < order``."""
    gens = spec.base.generators
    cur = {x: (x,) for x in gens}
    out = []
    for m in range(spec.order):
        if any(len(w) > cap for w in cur.values()):
            raise ValueError(f"phi^{m} produces words longer than {cap}")
        out.append(dict(cur))
        cur = {x: substitute(w, spec.phi) for x, w in cur.items()}
    return out


def twist_gsm(spec: Hnn) -> Gsm:
    """States ``m mod p``; a base letter ``x`` becomes ``phi^m(x)``, stable letters vanish."""
    p = spec.order
    words = phi_power_words(spec)
    base_alpha = alphabet_of(spec.base)
    t = spec.stable
    rules = {}
    for m in range(p):
        for x in base_alpha:
            w = words[m][x] if x in words[m] else formal_inverse(words[m][inv(x)])
            rules[(m, x)] = (free_reduce(w), m)
        rules[(m, t)] = ((), (m + 1) % p)
        rules[(m, inv(t))] = ((), (m - 1) % p)
    return Gsm(frozenset(range(p)), 0, alphabet_of(spec), base_alpha, rules)


def hnn_tcancel_machine(spec: Hnn) -> MultipassAutomaton:
    """One-pass machine accepting exactly the words whose stable letters all cancel.

    The stack holds ``(e, k)`` for each uncancelled ``t^e`` with ``k`` the image
    in the quotient of the base segment after it; the state carries the
    exponent ``m mod p`` and the image of the current segment, both normalized
    by ``phi_bar^m``. A successful pinch pops and then folds the cancelled
    segment into the symbol below through a fold state.
    """
    K = spec.quotient
    p = spec.order
    t = spec.stable
    base_alpha = alphabet_of(spec.base)
    sigma = alphabet_of(spec)
    pb_pow = [{a: a for a in K.elements}]
    for _ in range(1, p):
        pb_pow.append({a: spec.phi_bar[pb_pow[-1][a]] for a in K.elements})
    symbols = [(e, k) for e in (1, -1) for k in K.elements]
    keys = (None, *symbols)

    def normal(m, k):
        return ("n", m, k)

    states = set()
    trans: dict = {}
    for m in range(p):
        for kc in K.elements:
            here = normal(m, kc)
            fold = ("f", m, kc)
            states.update((here, fold))
            for top in keys:
                keep = () if top is None else (top,)
                for x in base_alpha:
                    trans[(1, here, x, top)] = (normal(m, K.mul(kc, pb_pow[m][spec.psi_of(x)])), keep)
                for eta, letter in ((1, t), (-1, inv(t))):
                    m2 = (m + eta) % p
                    if top is None:
                        trans[(1, here, letter, None)] = (normal(m2, K.identity), ((eta, K.identity),))
                        continue
                    e, k = top
                    seg = K.mul(k, kc)
                    if eta == -e and seg in spec.J:
                        trans[(1, here, letter, top)] = (("f", m2, seg), ())
                    else:
                        trans[(1, here, letter, top)] = (normal(m2, K.identity),
                                                         ((e, seg), (eta, K.identity)))
            for top in symbols:
                e, k = top
                trans[(1, fold, None, top)] = (normal(m, K.identity), ((e, K.mul(k, kc)),))
            for x in sigma:
                trans[(1, fold, x, None)] = trans[(1, normal(m, K.identity), x, None)]
    accept = [(q, None) for q in states]
    return build(1, states, normal(0, K.identity), sigma, stack_alphabet=symbols,
                 transitions=trans, accept=accept, label="t-cancel")


def hnn_wp(spec: Hnn) -> MultipassAutomaton:
    """Pass 1 checks that all stable letters cancel; the remaining passes run the
    base machine on the twisted word ``u_0 phi^m1(u_1) ... phi^mn(u_n)``."""
    base = build_wp(spec.base, False)
    tc = hnn_tcancel_machine(spec)
    twisted = inverse_gsm(base, twist_gsm(spec), label="twisted base")
    return intersection(tc, twisted).relabelled("WP(HNN)")


__all__ = [
    "SpecError", "validate_spec", "check", "build_wp", "free_wp", "free_abelian_wp", "finite_wp",
    "extension_wp", "wp_pullback", "phi_power_words", "twist_gsm", "hnn_tcancel_machine", "hnn_wp",
]
