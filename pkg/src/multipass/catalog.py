"""Named example groups used by the scripts, data files and tests."""
from __future__ import annotations

from .specs import (
    Double,
    DirectProduct,
    Finite,
    FiniteExtension,
    FiniteGroup,
    FiniteQuotient,
    Free,
    FreeAbelian,
    Hnn,
    MappingTorus,
)
from .words import power


def integers(name: str = "b") -> FreeAbelian:
    return FreeAbelian(1, (name,))


def klein_bottle() -> Hnn:
    """``<b, t ; t b t^-1 = b^-1>``: mapping torus of inversion on Z."""
    K = FiniteGroup.trivial()
    return Hnn(integers(), {"b": ("b^-1",)}, 2, K, {"b": 0}, {0: 0}, frozenset({0}))


def even_conjugation() -> Hnn:
    """``<b, t ; t b^2 t^-1 = b^2>``: S = 2Z described by Z -> Z/2 with J trivial."""
    K = FiniteGroup.cyclic(2)
    return Hnn(integers(), {"b": ("b",)}, 1, K, {"b": 1}, {0: 0, 1: 1}, frozenset({0}))


def infinite_dihedral() -> FiniteExtension:
    """``<a, s | s^2, s a s = a^-1>`` as an index-2 extension of ``<a>``.

    Cosets: ``0 = <a>``, ``1 = <a> s``.
    """
    step, rewrite = {}, {}
    for x, u0, u1 in (("a", ("a",), ("a^-1",)), ("a^-1", ("a^-1",), ("a",))):
        step[(0, x)], rewrite[(0, x)] = 0, u0
        step[(1, x)], rewrite[(1, x)] = 1, u1
    for x in ("s", "s^-1"):
        step[(0, x)], rewrite[(0, x)] = 1, ()
        step[(1, x)], rewrite[(1, x)] = 0, ()
    return FiniteExtension(integers("a"), ("a", "s"), 2, step, rewrite)


def z_mod_3_truncated(radius: int = 8) -> FiniteQuotient:
    """Z = <b> modulo the words ``b^(3m)`` with ``|3m| <= radius``.

    Z has no nontrivial finite normal subgroup, so this is the finite
    truncation of 3Z; on words of length at most ``radius`` it decides
    membership in 3Z exactly.
    """
    words = tuple(power("b", e) for e in range(-radius, radius + 1) if e % 3 == 0)
    return FiniteQuotient(integers(), words)


def z_times_z2() -> DirectProduct:
    return DirectProduct(integers("a"), Finite(FiniteGroup.cyclic(2), {"s": 1}))


def z_times_z2_mod_z2() -> FiniteQuotient:
    """``(Z x Z/2) / Z/2``, a genuine finite normal subgroup; the quotient is Z."""
    return FiniteQuotient(z_times_z2(), ((), ("s",)))


def swap_torus() -> MappingTorus:
    """Mapping torus of the coordinate swap on Z^2."""
    return MappingTorus(FreeAbelian(2), {"a": ("b",), "b": ("a",)}, 2)


def even_double() -> Double:
    """Two copies of Z amalgamated along 2Z: ``<b, b' | b^2 = b'^2>``."""
    K = FiniteGroup.cyclic(2)
    return Double(integers(), {"b": ("b",)}, 1, K, {"b": 1}, {0: 0, 1: 1}, frozenset({0}))


def cyclic(n: int, name: str = "c") -> Finite:
    return Finite(FiniteGroup.cyclic(n), {name: 1})


def symmetric3() -> Finite:
    """S_3 as permutations of (0, 1, 2), generated by a transposition and a 3-cycle."""
    import itertools

    perms = tuple(itertools.permutations(range(3)))
    table = {(p, q): tuple(q[p[i]] for i in range(3)) for p in perms for q in perms}
    return Finite(FiniteGroup(perms, table, (0, 1, 2)), {"x": (1, 0, 2), "y": (1, 2, 0)})


CATALOG = {
    "free2": lambda: Free(2),
    "z2": lambda: FreeAbelian(2),
    "z3": lambda: FreeAbelian(3),
    "klein": klein_bottle,
    "even-conjugation": even_conjugation,
    "dihedral": infinite_dihedral,
    "z-mod-3": z_mod_3_truncated,
    "z-times-z2": z_times_z2,
    "z-times-z2-mod-z2": z_times_z2_mod_z2,
    "swap-torus": swap_torus,
    "even-double": even_double,
    "cyclic5": lambda: cyclic(5),
    "s3": symmetric3,
}
