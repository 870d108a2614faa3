"""Declarative group descriptions shared by the machine builders and the oracles."""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Mapping, Union

from .words import group_alphabet, inv


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table ``table[(x, y)] = x*y``."""
    elements: tuple
    table: Mapping[tuple, object] = field(hash=False)
    identity: object

    def mul(self, x, y):
        return self.table[(x, y)]

    def product(self, xs):
        acc = self.identity
        for x in xs:
            acc = self.table[(acc, x)]
        return acc

    def inverse(self, x):
        for y in self.elements:
            if self.table[(x, y)] == self.identity:
                return y
        raise ValueError(f"{x!r} has no inverse")

    def problems(self) -> list:
        els = self.elements
        out = []
        if self.identity not in els:
            return ["identity is not an element"]
        for x, y in itertools.product(els, els):
            if self.table.get((x, y)) not in els:
                return [f"table is not closed or not total at ({x!r}, {y!r})"]
        for x in els:
            if self.table[(x, self.identity)] != x or self.table[(self.identity, x)] != x:
                out.append(f"identity fails at {x!r}")
            if not any(self.table[(x, y)] == self.identity == self.table[(y, x)] for y in els):
                out.append(f"{x!r} has no two-sided inverse")
        for x, y, z in itertools.product(els, repeat=3):
            if self.table[(self.table[(x, y)], z)] != self.table[(x, self.table[(y, z)])]:
                out.append(f"associativity fails at ({x!r}, {y!r}, {z!r})")
                break
        return out

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        els = tuple(range(n))
        return cls(els, {(x, y): (x + y) % n for x in els for y in els}, 0)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.cyclic(1)

    @classmethod
    def direct(cls, g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        els = tuple(itertools.product(g.elements, h.elements))
        table = {(x, y): (g.mul(x[0], y[0]), h.mul(x[1], y[1])) for x in els for y in els}
        return cls(els, table, (g.identity, h.identity))


def default_names(rank: int) -> tuple:
    if rank > 26:
        return tuple(f"x{i}" for i in range(1, rank + 1))
    return tuple(string.ascii_lowercase[:rank])


@dataclass(frozen=True)
class Free:
    rank: int
    names: tuple = ()

    @property
    def generators(self) -> tuple:
        return tuple(self.names) or default_names(self.rank)


@dataclass(frozen=True)
class FreeAbelian:
    rank: int
    names: tuple = ()

    @property
    def generators(self) -> tuple:
        return tuple(self.names) or default_names(self.rank)


@dataclass(frozen=True)
class Finite:
    """``images`` sends each generator name to a group element."""
    group: FiniteGroup
    images: Mapping[str, object] = field(hash=False)

    @property
    def generators(self) -> tuple:
        return tuple(self.images)

    def letter_value(self, sym: str):
        if sym in self.images:
            return self.images[sym]
        return self.group.inverse(self.images[inv(sym)])


@dataclass(frozen=True)
class DirectProduct:
    left: "GroupSpec"
    right: "GroupSpec"

    @property
    def generators(self) -> tuple:
        return self.left.generators + self.right.generators


@dataclass(frozen=True)
class FiniteExtension:
    """Group generated by ``generators``, containing ``subgroup`` with finite index.

    Cosets are right cosets ``H c_i`` numbered ``0..cosets-1`` with ``c_0 = 1``.
    For every letter ``x`` (generators and their inverses)
    ``c_i x = u c_j`` where ``j = step[(i, x)]`` and ``u = rewrite[(i, x)]`` is a
    word over the subgroup alphabet.
    """
    subgroup: "GroupSpec"
    generator_names: tuple
    cosets: int
    step: Mapping[tuple, int] = field(hash=False)
    rewrite: Mapping[tuple, tuple] = field(hash=False)

    @property
    def generators(self) -> tuple:
        return tuple(self.generator_names)


@dataclass(frozen=True)
class FiniteQuotient:
    """``base`` modulo the finite normal subgroup whose elements are ``normal_words``."""
    base: "GroupSpec"
    normal_words: tuple

    @property
    def generators(self) -> tuple:
        return self.base.generators


@dataclass(frozen=True)
class Hnn:
    """``<G, t ; t s t^-1 = phi(s), s in S>`` for an automorphism ``phi`` of order
    dividing ``order``.

    ``S`` is described by a finite quotient ``psi: G -> quotient`` (given on
    generators) and a subgroup ``J`` of the quotient: ``S = psi^-1(J)``.
    ``phi_bar`` is the automorphism ``phi`` induces on the quotient.
    """
    base: "GroupSpec"
    phi: Mapping[str, tuple] = field(hash=False)
    order: int = 1
    quotient: FiniteGroup = field(default_factory=FiniteGroup.trivial)
    psi: Mapping[str, object] = field(default_factory=dict, hash=False)
    phi_bar: Mapping[object, object] = field(default_factory=dict, hash=False)
    J: frozenset = frozenset()
    stable: str = "t"

    @property
    def generators(self) -> tuple:
        return self.base.generators + (self.stable,)

    def psi_of(self, sym: str):
        K = self.quotient
        if sym in self.psi:
            return self.psi[sym]
        if inv(sym) in self.psi:
            return K.inverse(self.psi[inv(sym)])
        return K.identity


@dataclass(frozen=True)
class MappingTorus:
    base: "GroupSpec"
    phi: Mapping[str, tuple] = field(hash=False)
    order: int = 1
    stable: str = "t"

    @property
    def generators(self) -> tuple:
        return self.base.generators + (self.stable,)

    def as_hnn(self) -> Hnn:
        K = FiniteGroup.trivial()
        return Hnn(self.base, dict(self.phi), self.order, K,
                   {x: K.identity for x in self.base.generators}, {K.identity: K.identity},
                   frozenset({K.identity}), self.stable)


@dataclass(frozen=True)
class Double:
    """Two copies of ``base`` amalgamated along ``S``: the barred copy of ``s``
    is identified with ``phi(s)``. Barred generators carry ``bar`` as a suffix."""
    base: "GroupSpec"
    phi: Mapping[str, tuple] = field(hash=False)
    order: int = 1
    quotient: FiniteGroup = field(default_factory=FiniteGroup.trivial)
    psi: Mapping[str, object] = field(default_factory=dict, hash=False)
    phi_bar: Mapping[object, object] = field(default_factory=dict, hash=False)
    J: frozenset = frozenset()
    bar: str = "'"

    @property
    def generators(self) -> tuple:
        return self.base.generators + tuple(x + self.bar for x in self.base.generators)

    def as_hnn(self) -> Hnn:
        taken = set(self.generators)
        stable = "t"
        while stable in taken:
            stable += "_"
        return Hnn(self.base, self.phi, self.order, self.quotient, self.psi, self.phi_bar,
                   self.J, stable)

    def embedding(self) -> dict:
        """Letter images in the HNN extension: ``g -> g`` and ``g' -> t g t^-1``."""
        t = self.as_hnn().stable
        out = {}
        for x in self.base.generators:
            out[x] = (x,)
            out[inv(x)] = (inv(x),)
            out[x + self.bar] = (t, x, inv(t))
            out[inv(x + self.bar)] = (t, inv(x), inv(t))
        return out


GroupSpec = Union[Free, FreeAbelian, Finite, DirectProduct, FiniteExtension, FiniteQuotient,
                  Hnn, MappingTorus, Double]


def alphabet_of(spec: GroupSpec) -> tuple:
    return group_alphabet(spec.generators)


# --------------------------------------------------------------------------- JSON

def _group_to_json(g: FiniteGroup) -> dict:
    els = list(g.elements)
    return {"elements": els, "identity": g.identity,
            "table": [[g.mul(x, y) for y in els] for x in els]}


def _group_from_json(d: dict) -> FiniteGroup:
    els = tuple(_freeze(e) for e in d["elements"])
    rows = d["table"]
    if len(rows) != len(els) or any(len(r) != len(els) for r in rows):
        raise ValueError("table must be square with one row per element")
    table = {(x, y): _freeze(rows[i][j]) for i, x in enumerate(els) for j, y in enumerate(els)}
    return FiniteGroup(els, table, _freeze(d["identity"]))


def _freeze(x):
    return tuple(_freeze(y) for y in x) if isinstance(x, list) else x


def _thaw(x):
    return [_thaw(y) for y in x] if isinstance(x, tuple) else x


def spec_to_json(spec: GroupSpec) -> dict:
    if isinstance(spec, (Free, FreeAbelian)):
        d = {"type": type(spec).__name__, "rank": spec.rank}
        if spec.names:
            d["names"] = list(spec.names)
        return d
    if isinstance(spec, Finite):
        return {"type": "Finite", "group": _group_to_json(spec.group),
                "generators": {x: _thaw(v) for x, v in spec.images.items()}}
    if isinstance(spec, DirectProduct):
        return {"type": "DirectProduct", "left": spec_to_json(spec.left),
                "right": spec_to_json(spec.right)}
    if isinstance(spec, FiniteExtension):
        return {"type": "FiniteExtension", "subgroup": spec_to_json(spec.subgroup),
                "generators": list(spec.generator_names), "cosets": spec.cosets,
                "table": [{"coset": i, "letter": x, "to": spec.step[(i, x)],
                           "word": list(spec.rewrite[(i, x)])}
                          for (i, x) in sorted(spec.step, key=repr)]}
    if isinstance(spec, FiniteQuotient):
        return {"type": "FiniteQuotient", "base": spec_to_json(spec.base),
                "normal_subgroup_words": [list(w) for w in spec.normal_words]}
    if isinstance(spec, MappingTorus):
        return {"type": "MappingTorus", "base": spec_to_json(spec.base),
                "phi": {x: list(w) for x, w in spec.phi.items()}, "order": spec.order,
                "stable": spec.stable}
    if isinstance(spec, (Hnn, Double)):
        d = {"type": type(spec).__name__, "base": spec_to_json(spec.base),
             "phi": {x: list(w) for x, w in spec.phi.items()}, "order": spec.order,
             "quotient": _group_to_json(spec.quotient),
             "psi": {x: _thaw(v) for x, v in spec.psi.items()},
             "phi_bar": [[_thaw(k), _thaw(v)] for k, v in spec.phi_bar.items()],
             "J": sorted((_thaw(x) for x in spec.J), key=repr)}
        if isinstance(spec, Hnn):
            d["stable"] = spec.stable
        else:
            d["bar"] = spec.bar
        return d
    raise TypeError(f"not a group spec: {spec!r}")


def spec_from_json(d: dict) -> GroupSpec:
    kind = d.get("type")
    if kind == "Free":
        return Free(int(d["rank"]), tuple(d.get("names", ())))
    if kind == "FreeAbelian":
        return FreeAbelian(int(d["rank"]), tuple(d.get("names", ())))
    if kind == "Finite":
        g = _group_from_json(d["group"])
        return Finite(g, {x: _freeze(v) for x, v in d["generators"].items()})
    if kind == "DirectProduct":
        return DirectProduct(spec_from_json(d["left"]), spec_from_json(d["right"]))
    if kind == "FiniteExtension":
        step = {(int(e["coset"]), e["letter"]): int(e["to"]) for e in d["table"]}
        rewrite = {(int(e["coset"]), e["letter"]): tuple(e["word"]) for e in d["table"]}
        return FiniteExtension(spec_from_json(d["subgroup"]), tuple(d["generators"]),
                               int(d["cosets"]), step, rewrite)
    if kind == "FiniteQuotient":
        return FiniteQuotient(spec_from_json(d["base"]),
                              tuple(tuple(w) for w in d["normal_subgroup_words"]))
    if kind == "MappingTorus":
        return MappingTorus(spec_from_json(d["base"]), {x: tuple(w) for x, w in d["phi"].items()},
                            int(d["order"]), d.get("stable", "t"))
    if kind in ("Hnn", "Double"):
        args = (spec_from_json(d["base"]), {x: tuple(w) for x, w in d["phi"].items()},
                int(d["order"]), _group_from_json(d["quotient"]),
                {x: _freeze(v) for x, v in d["psi"].items()},
                {_freeze(k): _freeze(v) for k, v in d["phi_bar"]},
                frozenset(_freeze(x) for x in d["J"]))
        if kind == "Hnn":
            return Hnn(*args, stable=d.get("stable", "t"))
        return Double(*args, bar=d.get("bar", "'"))
    raise ValueError(f"unknown group spec type {kind!r}")
