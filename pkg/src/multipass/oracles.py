"""Brute-force ground truth.

Everything here works on words directly (free reduction, normal forms, exact
arithmetic) and shares no code with the machine builders.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import regex

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
from .words import format_word, free_reduce, inv, power, substitute


# --------------------------------------------------------------------------- group oracles

@dataclass(frozen=True)
class GroupOracle:
    """``evaluate`` returns a hashable element representation; ``identity_test``
    overrides the default comparison with ``evaluate(())`` when given."""
    alphabet: tuple
    evaluate_fn: Callable
    identity_test: Optional[Callable] = None
    name: str = ""

    def evaluate(self, word: Sequence[str]):
        self._check(word)
        return self.evaluate_fn(free_reduce(word))

    def is_identity(self, word: Sequence[str]) -> bool:
        self._check(word)
        w = free_reduce(word)
        if self.identity_test is not None:
            return self.identity_test(w)
        return self.evaluate_fn(w) == self.evaluate_fn(())

    def _check(self, word):
        bad = [s for s in word if s not in self.alphabet]
        if bad:
            raise ValueError(f"symbols {bad} are not in the oracle alphabet")


def exponent_vector(word: Sequence[str], generators: Sequence[str]) -> tuple:
    index = {g: i for i, g in enumerate(generators)}
    v = [0] * len(generators)
    for s in word:
        if s in index:
            v[index[s]] += 1
        else:
            v[index[inv(s)]] -= 1
    return tuple(v)


def dihedral_eval(word: Sequence[str], a: str = "a", s: str = "s") -> tuple:
    """Normal form ``a^e s^f`` of a word in ``<a, s | s^2, s a s = a^-1>``."""
    e, f = 0, 0
    for x in word:
        if x in (s, inv(s)):
            f ^= 1
        elif x in (a, inv(a)):
            e += (-1 if f else 1) * (1 if x == a else -1)
        else:
            raise ValueError(f"unknown symbol {x!r}")
    return e, f


def zhnn_reduce(word: Sequence[str], p: int, q: int, b: str = "b", t: str = "t") -> tuple:
    """Britton reduction in ``<b, t ; t b^p t^-1 = b^q>``.

    Returns a t-reduced token list of ``("b", exponent)`` and ``("t", +-1)``.
    Pinches ``t b^a t^-1`` with ``p | a`` become ``b^(a q / p)`` and
    ``t^-1 b^a t`` with ``q | a`` become ``b^(a p / q)``.
    """
    if p == 0 or q == 0:
        raise ValueError("p and q must be nonzero")
    toks: list = []
    for x in word:
        if x in (b, inv(b)):
            tok = ("b", 1 if x == b else -1)
        elif x in (t, inv(t)):
            tok = ("t", 1 if x == t else -1)
        else:
            raise ValueError(f"unknown symbol {x!r}")
        _push(toks, tok, p, q)
    return tuple(toks)


def _push(toks: list, tok, p, q):
    if tok[0] == "b":
        if toks and toks[-1][0] == "b":
            a = toks.pop()[1] + tok[1]
            if a:
                toks.append(("b", a))
        elif tok[1]:
            toks.append(tok)
        return
    e = tok[1]
    # t^-e b^a t^e pinch (including the empty middle)
    a = 0
    i = len(toks) - 1
    if toks and toks[-1][0] == "b":
        a = toks[-1][1]
        i -= 1
    if i >= 0 and toks[i] == ("t", -e):
        src, dst = (p, q) if -e == 1 else (q, p)
        if a % abs(src) == 0:
            del toks[i:]
            _push(toks, ("b", a * dst // src), p, q)
            return
    toks.append(tok)


def britton_reduce(word: Sequence[str], d: int, s: int, b: str = "b", t: str = "t") -> tuple:
    """Normal form word in ``<b, t ; t b^d t^-1 = b^(s d)>``, ``s = +-1``."""
    if s not in (1, -1) or d < 1:
        raise ValueError("need d >= 1 and s = +-1")
    return render_tokens(zhnn_reduce(word, d, s * d, b, t), b, t)


def render_tokens(toks, b: str = "b", t: str = "t") -> tuple:
    out: list = []
    for kind, e in toks:
        out.extend(power(b if kind == "b" else t, e))
    return tuple(out)


def has_pinch(word: Sequence[str], p: int, q: int, b: str = "b", t: str = "t") -> bool:
    """Whether a t-reduced word still contains a pinch (post hoc scan)."""
    toks = []
    for x in free_reduce(word):
        if toks and toks[-1][0] == x and x in (b, inv(b)):
            toks[-1] = (x, toks[-1][1] + 1)
        else:
            toks.append((x, 1))
    for i in range(len(toks)):
        if toks[i][0] not in (t, inv(t)):
            continue
        a, j = 0, i + 1
        if j < len(toks) and toks[j][0] in (b, inv(b)):
            a = toks[j][1] * (1 if toks[j][0] == b else -1)
            j += 1
        if j < len(toks) and toks[j][0] == inv(toks[i][0]):
            src = p if toks[i][0] == t else q
            if a % abs(src) == 0:
                return True
    return False


def zhnn_is_identity(word: Sequence[str], p: int, q: int, b: str = "b", t: str = "t") -> bool:
    return zhnn_reduce(word, p, q, b, t) == ()


def amalgam_z_is_identity(word: Sequence[str], d: int, s: int, b: str = "b",
                          bbar: str = "b'") -> bool:
    """Word problem of ``<b> *_{b'^a = b^(s a), d | a} <b'>`` by syllable reduction.

    Syllables lying in the amalgamated subgroup are moved to the other factor
    and merged with their neighbours until the alternating form is reduced.
    """
    syl: list = []
    for x in word:
        if x in (b, inv(b)):
            syl.append(["G", 1 if x == b else -1])
        elif x in (bbar, inv(bbar)):
            syl.append(["B", 1 if x == bbar else -1])
        else:
            raise ValueError(f"unknown symbol {x!r}")
    changed = True
    while changed:
        changed = False
        merged: list = []
        for kind, e in syl:
            if e == 0:
                changed = True
                continue
            if merged and merged[-1][0] == kind:
                merged[-1][1] += e
                changed = True
                if merged[-1][1] == 0:
                    merged.pop()
            else:
                merged.append([kind, e])
        syl = merged
        if len(syl) > 1:
            for item in syl:
                if item[1] % d == 0:
                    item[0] = "B" if item[0] == "G" else "G"
                    item[1] *= s
                    changed = True
                    break
    return not syl


def matrix_identity_test(n: int, b: str = "b", t: str = "t") -> Callable:
    return lambda w: bs_matrix_eval(w, n, b, t).is_identity()


# --- generic backends

def _finite_eval(spec: Finite):
    g = spec.group

    def ev(w):
        return g.product(spec.letter_value(x) for x in w)
    return ev


def _extension_eval(spec: FiniteExtension, sub: GroupOracle):
    def walk(w):
        i, acc = 0, []
        for x in w:
            acc.extend(spec.rewrite[(i, x)])
            i = spec.step[(i, x)]
        return i, tuple(acc)

    def ev(w):
        i, acc = walk(w)
        return i, sub.evaluate(acc)

    def ident(w):
        i, acc = walk(w)
        return i == 0 and sub.is_identity(acc)
    return ev, ident


def hnn_britton(spec: Hnn, base: GroupOracle, word: Sequence[str]) -> tuple:
    """Britton reduction by explicit pinch rewriting.

    Returns tokens ``("t", +-1)`` and ``("u", base word)``. A segment ``u``
    between ``t^e`` and ``t^-e`` is in ``S`` iff its image in the quotient
    lies in ``J``; the pinch is replaced by ``phi^e(u)``.
    """
    t = spec.stable
    K = spec.quotient
    phi_inv_power = spec.order - 1

    def phi_pow(u, m):
        for _ in range(m):
            u = substitute(u, spec.phi)
        return u

    toks: list = []
    for x in word:
        if x in (t, inv(t)):
            toks.append(("t", 1 if x == t else -1))
        elif toks and toks[-1][0] == "u":
            toks[-1] = ("u", toks[-1][1] + (x,))
        else:
            toks.append(("u", (x,)))
    while True:
        for i in range(len(toks)):
            if toks[i][0] != "t":
                continue
            e = toks[i][1]
            j, u = i + 1, ()
            if j < len(toks) and toks[j][0] == "u":
                u, j = toks[j][1], j + 1
            if j < len(toks) and toks[j] == ("t", -e):
                if K.product(spec.psi_of(x) for x in u) in spec.J:
                    v = phi_pow(u, 1 if e == 1 else phi_inv_power)
                    toks[i:j + 1] = [("u", v)]
                    break
        else:
            break
        merged: list = []
        for tok in toks:
            if tok[0] == "u" and merged and merged[-1][0] == "u":
                merged[-1] = ("u", merged[-1][1] + tok[1])
            else:
                merged.append(tok)
        toks = merged
    return tuple(("u", free_reduce(v)) if k == "u" else (k, v) for k, v in toks)


def oracle_for(spec: GroupSpec) -> GroupOracle:
    alpha = alphabet_of(spec)
    if isinstance(spec, Free):
        return GroupOracle(alpha, lambda w: w, name="free reduction")
    if isinstance(spec, FreeAbelian):
        gens = spec.generators
        return GroupOracle(alpha, lambda w: exponent_vector(w, gens), name="integer vectors")
    if isinstance(spec, Finite):
        return GroupOracle(alpha, _finite_eval(spec), name="table walk")
    if isinstance(spec, DirectProduct):
        left, right = oracle_for(spec.left), oracle_for(spec.right)
        la, ra = set(left.alphabet), set(right.alphabet)

        def ev(w):
            return (left.evaluate([x for x in w if x in la]),
                    right.evaluate([x for x in w if x in ra]))

        def ident(w):
            return (left.is_identity([x for x in w if x in la])
                    and right.is_identity([x for x in w if x in ra]))
        return GroupOracle(alpha, ev, ident, name="pairing")
    if isinstance(spec, FiniteExtension):
        ev, ident = _extension_eval(spec, oracle_for(spec.subgroup))
        return GroupOracle(alpha, ev, ident, name="coset walk")
    if isinstance(spec, FiniteQuotient):
        base = oracle_for(spec.base)
        values = frozenset(base.evaluate(n) for n in spec.normal_words)

        def ev(w):
            return frozenset(base.evaluate(tuple(w) + tuple(n)) for n in spec.normal_words)
        return GroupOracle(alpha, ev, lambda w: base.evaluate(w) in values, name="quotient lookup")
    if isinstance(spec, MappingTorus):
        return oracle_for(spec.as_hnn())
    if isinstance(spec, Hnn):
        base = oracle_for(spec.base)

        def ev(w):
            toks = hnn_britton(spec, base, w)
            return tuple((k, base.evaluate(v)) if k == "u" else (k, v) for k, v in toks)

        def ident(w):
            toks = hnn_britton(spec, base, w)
            return all(k == "u" for k, _ in toks) and base.is_identity(
                tuple(x for _, v in toks for x in v))
        return GroupOracle(alpha, ev, ident, name="britton")
    if isinstance(spec, Double):
        hnn = oracle_for(spec.as_hnn())
        images = spec.embedding()

        def embed(w):
            return tuple(y for x in w for y in images[x])
        return GroupOracle(alpha, lambda w: hnn.evaluate(embed(w)),
                           lambda w: hnn.is_identity(embed(w)), name="britton via embedding")
    raise TypeError(f"no oracle for {spec!r}")


# --------------------------------------------------------------------------- exact matrices

@dataclass(frozen=True)
class RationalMatrix2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, a, b, c, d) -> "RationalMatrix2":
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def identity(cls) -> "RationalMatrix2":
        return cls.of(1, 0, 0, 1)

    def __matmul__(self, o: "RationalMatrix2") -> "RationalMatrix2":
        return RationalMatrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                               self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "RationalMatrix2":
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return RationalMatrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def is_identity(self) -> bool:
        return self == RationalMatrix2.identity()

    def rows(self) -> tuple:
        return ((self.a, self.b), (self.c, self.d))


def bs_matrices(n: int) -> dict:
    """``b -> (1 1; 0 1)`` and ``t -> (n 0; 0 1/n)``: a faithful image of ``BS(1, n^2)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    bm = RationalMatrix2.of(1, 1, 0, 1)
    tm = RationalMatrix2.of(n, 0, 0, Fraction(1, n))
    return {"b": bm, "b^-1": bm.inverse(), "t": tm, "t^-1": tm.inverse()}


def bs_matrix_eval(word: Sequence[str], n: int, b: str = "b", t: str = "t") -> RationalMatrix2:
    mats = bs_matrices(n)
    rename = {b: "b", inv(b): "b^-1", t: "t", inv(t): "t^-1"}
    acc = RationalMatrix2.identity()
    for x in word:
        acc = acc @ mats[rename[x]]
    return acc


# --------------------------------------------------------------------------- Parikh vectors

@dataclass(frozen=True)
class ParikhVector:
    counts: tuple

    def __add__(self, o: "ParikhVector") -> "ParikhVector":
        if len(o.counts) != len(self.counts):
            raise ValueError("dimension mismatch")
        return ParikhVector(tuple(x + y for x, y in zip(self.counts, o.counts)))

    def __iter__(self):
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return sum(self.counts)


def parikh(word: Sequence[str], alphabet: Sequence[str]) -> ParikhVector:
    index = {a: i for i, a in enumerate(alphabet)}
    v = [0] * len(alphabet)
    for x in word:
        if x not in index:
            raise ValueError(f"symbol {x!r} is not in the alphabet")
        v[index[x]] += 1
    return ParikhVector(tuple(v))


@dataclass(frozen=True)
class LinearSet:
    """``base + N period_1 + ... + N period_m``; zero periods are dropped."""
    base: tuple
    periods: tuple = ()

    def __post_init__(self):
        r = len(self.base)
        if any(len(p) != r for p in self.periods):
            raise ValueError("period dimension mismatch")
        if any(x < 0 for v in (self.base, *self.periods) for x in v):
            raise ValueError("vectors must be nonnegative")
        kept = tuple(dict.fromkeys(tuple(p) for p in self.periods if any(p)))
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "periods", kept)

    @property
    def dim(self) -> int:
        return len(self.base)

    def contains(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        rest = tuple(x - y for x, y in zip(v, self.base))
        if any(x < 0 for x in rest):
            return False
        return _solve(rest, self.periods)


def _solve(rest: tuple, periods: tuple) -> bool:
    # every coefficient n_i is at most max(rest): a nonzero period has some
    # coordinate >= 1 and all coordinates are nonnegative
    if not any(rest):
        return True
    if not periods:
        return False
    p, others = periods[0], periods[1:]
    n = 0
    cur = rest
    while all(x >= 0 for x in cur):
        if _solve(cur, others):
            return True
        n += 1
        cur = tuple(x - y for x, y in zip(cur, p))
    return False


@dataclass(frozen=True)
class SemilinearSet:
    components: tuple

    def __post_init__(self):
        dims = {c.dim for c in self.components}
        if len(dims) > 1:
            raise ValueError("components have different dimensions")
        object.__setattr__(self, "components", tuple(self.components))


def semilinear_member(s: SemilinearSet, v) -> bool:
    counts = tuple(v.counts) if isinstance(v, ParikhVector) else tuple(v)
    return any(c.contains(counts) for c in s.components)


def parikh_image(membership: Callable[[tuple], bool], alphabet: Sequence[str],
                 pattern: Optional[str] = None, max_len: int = 8) -> set:
    """``{parikh(w) : |w| <= max_len, w matches pattern, membership(w)}``.

    ``pattern`` is a regular expression over the space-joined rendering of a
    word (``"t t b t^-1"``). Prefixes that cannot extend to a match are pruned.
    """
    alphabet = tuple(alphabet)
    rx = regex.compile(pattern) if pattern is not None else None
    out: set = set()

    def visit(prefix: tuple):
        text = format_word(prefix)
        if rx is None or rx.fullmatch(text):
            if membership(prefix):
                out.add(parikh(prefix, alphabet))
        if len(prefix) == max_len:
            return
        for a in alphabet:
            nxt = prefix + (a,)
            if rx is not None and rx.fullmatch(format_word(nxt), partial=True) is None:
                continue
            visit(nxt)

    visit(())
    return out


BS_PATTERN = r"(t )+b( t\^-1)+( b\^-1)+"
"""Words of shape ``t+ b t^-1+ b^-1+`` in the space-joined rendering."""


def iter_parikh_lines(vectors: Iterable[ParikhVector]) -> Iterable[str]:
    for v in sorted(vectors, key=lambda v: v.counts):
        yield " ".join(str(x) for x in v.counts)


__all__ = [
    "GroupOracle", "oracle_for", "exponent_vector", "dihedral_eval", "zhnn_reduce",
    "zhnn_is_identity", "britton_reduce", "has_pinch", "amalgam_z_is_identity", "hnn_britton",
    "RationalMatrix2", "bs_matrices", "bs_matrix_eval", "matrix_identity_test", "ParikhVector",
    "parikh", "LinearSet", "SemilinearSet", "semilinear_member", "parikh_image", "BS_PATTERN",
    "iter_parikh_lines",
]
