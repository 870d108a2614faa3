"""Acceptance gate: one test group per criterion, summarized by the conftest hook."""
import random
import time

import pytest

from helpers import (
    AB,
    Z2,
    anbn_machine,
    anbn_pda,
    complete_deterministic_machines,
    is_anbn,
    is_eps_loop,
    is_pairs,
    is_three_pass,
    palindrome_nm,
    three_pass_machine,
)
from multipass.automaton import completed, is_complete, run
from multipass.catalog import CATALOG, even_conjugation, infinite_dihedral, klein_bottle, z_mod_3_truncated
from multipass.closures import (
    complement,
    decomposition_accepts,
    enumerate_profiles,
    intersection,
    profile_bound,
    profile_decomposition,
    union,
)
from multipass.groups import build_wp, free_abelian_wp, free_wp, hnn_tcancel_machine
from multipass.oracles import (
    BS_PATTERN,
    bs_matrix_eval,
    dihedral_eval,
    exponent_vector,
    oracle_for,
    parikh_image,
    zhnn_is_identity,
    zhnn_reduce,
)
from multipass.pda import onepass_to_pda, pda_accepts, pda_to_onepass
from multipass.specs import FreeAbelian, alphabet_of
from multipass.transducers import (
    Gsm,
    gsm_apply,
    homomorphism,
    interleaved_product,
    inverse_gsm,
    left_quotient,
    projection,
)
from multipass.verify import bound_constants, verify
from multipass.words import count_words_upto, free_reduce, power, words_upto

BT = ("b", "b^-1", "t", "t^-1")


def mismatches(m, predicate, alphabet, max_len):
    return [w for w in words_upto(alphabet, max_len) if m.accepts(w) != predicate(w)]


# --------------------------------------------------------------------------- 1

@pytest.mark.criterion(1, "WP(Z^2) agrees with exponent sums on all 87,381 words of length <= 8 in < 60 s")
def test_c1_free_abelian_rank_two():
    start = time.perf_counter()
    m = build_wp(FreeAbelian(2))
    report = verify(m, lambda w: exponent_vector(w, ("a", "b")) == (0, 0), max_len=8, jobs=1)
    elapsed = time.perf_counter() - start
    assert report.words_checked == count_words_upto(4, 8) == 87_381
    assert report.disagreements == []
    assert elapsed < 60, elapsed


# --------------------------------------------------------------------------- 2

COMPLETE = complete_deterministic_machines()


@pytest.mark.criterion(2, "complement: exactly one of M, complement(M) accepts each word of length <= 8")
@pytest.mark.parametrize("name", sorted(COMPLETE))
def test_c2_complement(name):
    m, predicate = COMPLETE[name]
    assert is_complete(m) and m.deterministic
    c = complement(m)
    assert c.passes == m.passes
    for w in words_upto(m.input_alphabet, 8):
        a, b = m.accepts(w), c.accepts(w)
        assert a != b, w
        assert a == predicate(w), w


def test_c2_has_enough_machines():
    assert len(COMPLETE) >= 5


# --------------------------------------------------------------------------- 3

AB_MACHINES = {
    "a^n b^n": (COMPLETE["a^n b^n"][0], is_anbn),
    "pairs": (COMPLETE["pairs"][0], is_pairs),
    "three-pass": (three_pass_machine(), is_three_pass),
    "eps-loop": (COMPLETE["eps-loop completed"][0], is_eps_loop),
}
PAIRS = [(x, y) for i, x in enumerate(sorted(AB_MACHINES)) for y in sorted(AB_MACHINES)[i + 1:]]


@pytest.mark.criterion(3, "union/intersection equal set union/intersection on length <= 8; passes k1 + k2")
@pytest.mark.parametrize("left,right", PAIRS)
def test_c3_union_intersection(left, right):
    (m1, p1), (m2, p2) = AB_MACHINES[left], AB_MACHINES[right]
    u, i = union(m1, m2), intersection(m1, m2)
    assert u.passes == i.passes == m1.passes + m2.passes
    for w in words_upto(AB, 8):
        x, y = p1(w), p2(w)
        assert u.accepts(w) == (x or y), w
        assert i.accepts(w) == (x and y), w


@pytest.mark.criterion(3, "union/intersection equal set union/intersection on length <= 8; passes k1 + k2")
def test_c3_projected_coordinates():
    za = inverse_gsm(free_abelian_wp(("a",)), projection(Z2, ("a", "a^-1")))
    zb = inverse_gsm(free_abelian_wp(("b",)), projection(Z2, ("b", "b^-1")))
    u, i = union(za, zb), intersection(za, zb)
    assert u.passes == i.passes == 2
    assert i.accepts(("a", "b", "a^-1", "b^-1")) and not i.accepts(("a",))
    for w in words_upto(Z2, 8):
        ea, eb = exponent_vector(w, ("a", "b"))
        assert u.accepts(w) == (ea == 0 or eb == 0)
        assert i.accepts(w) == (ea == 0 and eb == 0)


def test_c3_has_enough_pairs():
    assert len(PAIRS) + 1 >= 5


# --------------------------------------------------------------------------- 4

PROFILE_CASES = {
    "deterministic 2-pass WP(Z^2)": (free_abelian_wp(("a", "b")), Z2),
    "nondeterministic 2-pass palindromes": (palindrome_nm(), AB),
    "deterministic 3-pass": (three_pass_machine(), AB),
}


@pytest.mark.criterion(4, "profile decomposition matches L(M) on length <= 6; unique profile if deterministic")
@pytest.mark.parametrize("name", sorted(PROFILE_CASES))
def test_c4_profiles(name):
    m, alphabet = PROFILE_CASES[name]
    assert len(list(enumerate_profiles(m))) <= profile_bound(m)
    decomp = profile_decomposition(m)
    for w in words_upto(alphabet, 6):
        hits = decomposition_accepts(decomp, w)
        accepted = m.accepts(w)
        assert (hits > 0) == accepted, w
        if m.deterministic:
            assert hits == (1 if accepted else 0), w


def test_c4_covers_required_shapes():
    shapes = {(m.passes, m.deterministic) for m, _ in PROFILE_CASES.values()}
    assert {(2, True), (2, False), (3, True)} <= shapes


# --------------------------------------------------------------------------- 5

@pytest.mark.criterion(5, "pda -> one-pass -> pda round trip preserves membership on length <= 8")
def test_c5_anbn_round_trip():
    p = anbn_pda()
    back = onepass_to_pda(pda_to_onepass(p))
    for w in words_upto(AB, 8):
        assert pda_accepts(p, w) == is_anbn(w)
        assert pda_accepts(back, w) == is_anbn(w), w


@pytest.mark.criterion(5, "pda -> one-pass -> pda round trip preserves membership on length <= 8")
@pytest.mark.parametrize("rank", [1, 2])
def test_c5_free_group_round_trip(rank):
    gens = "ab"[:rank]
    p = onepass_to_pda(free_wp(tuple(gens)))
    back = onepass_to_pda(pda_to_onepass(p))
    for w in words_upto(p.input_alphabet, 8):
        expected = free_reduce(w) == ()
        assert pda_accepts(p, w) == expected, w
        assert pda_accepts(back, w) == expected, w


# --------------------------------------------------------------------------- 6

def parity_gsm() -> Gsm:
    rules = {(0, "a"): (("a",), 1), (1, "a"): (("a", "b"), 0),
             (0, "b"): ((), 0), (1, "b"): (("b", "b"), 1)}
    return Gsm(frozenset({0, 1}), 0, AB, AB, rules)


@pytest.mark.criterion(6, "inverse gsm, interleaved product, left quotient match brute force on length <= 8")
@pytest.mark.parametrize("name", ["a^n b^n", "three-pass", "pairs"])
def test_c6_inverse_gsm(name):
    m, predicate = AB_MACHINES[name]
    for s in (parity_gsm(), homomorphism({"a": ("a", "a"), "b": ("b",)}, AB)):
        inv = inverse_gsm(m, s)
        for w in words_upto(AB, 8):
            assert inv.accepts(w) == predicate(gsm_apply(s, w)), w


@pytest.mark.criterion(6, "inverse gsm, interleaved product, left quotient match brute force on length <= 8")
def test_c6_interleaved_product():
    x = ("x", "x^-1")
    p = interleaved_product([anbn_machine(), free_abelian_wp(("x",))])
    for w in words_upto(AB + x, 8):
        left = tuple(s for s in w if s in AB)
        right = tuple(s for s in w if s in x)
        assert p.accepts(w) == (is_anbn(left) and exponent_vector(right, ("x",)) == (0,)), w


@pytest.mark.criterion(6, "inverse gsm, interleaved product, left quotient match brute force on length <= 8")
@pytest.mark.parametrize("left,right", PAIRS)
def test_c6_interleaved_same_alphabet_is_intersection(left, right):
    m1, m2 = AB_MACHINES[left][0], AB_MACHINES[right][0]
    p, i = interleaved_product([m1, m2]), intersection(m1, m2)
    for w in words_upto(AB, 6):
        assert p.accepts(w) == i.accepts(w), w


@pytest.mark.criterion(6, "inverse gsm, interleaved product, left quotient match brute force on length <= 8")
@pytest.mark.parametrize("K", [[("a",)], [(), ("a", "a", "b")], [("b",), ("a", "b"), ("a", "a")]])
def test_c6_left_quotient(K):
    q = left_quotient(anbn_machine(), K)
    for w in words_upto(AB, 8):
        assert q.accepts(w) == any(is_anbn(u + w) for u in K), w


# --------------------------------------------------------------------------- 7

HNN_CASES = {
    "klein": (klein_bottle, 1, -1),
    "even-conjugation": (even_conjugation, 2, 2),
}


@pytest.mark.criterion(7, "HNN machines agree with Britton reduction on length <= 8; pass 1 empties iff t cancels")
@pytest.mark.parametrize("name", sorted(HNN_CASES))
def test_c7_hnn(name):
    factory, p, q = HNN_CASES[name]
    m = build_wp(factory())
    for w in words_upto(BT, 8):
        tokens = zhnn_reduce(w, p, q)
        tr = run(m, w, trace=True)
        assert tr.accepted == (tokens == ()), w
        end_of_pass_1 = [c for c in tr.witness if c.pass_num == 1][-1]
        assert end_of_pass_1.tape_position == len(w)
        t_free = all(kind == "b" for kind, _ in tokens)
        assert (end_of_pass_1.stack == ()) == t_free, w


@pytest.mark.criterion(7, "HNN machines agree with Britton reduction on length <= 8; pass 1 empties iff t cancels")
@pytest.mark.parametrize("name", sorted(HNN_CASES))
def test_c7_tcancel_machine(name):
    factory, p, q = HNN_CASES[name]
    tc = hnn_tcancel_machine(factory())
    for w in words_upto(BT, 8):
        assert tc.accepts(w) == all(kind == "b" for kind, _ in zhnn_reduce(w, p, q)), w


# --------------------------------------------------------------------------- 8

@pytest.mark.criterion(8, "infinite dihedral group as index-2 extension agrees with its normal form on length <= 8")
def test_c8_dihedral():
    m = build_wp(infinite_dihedral())
    assert mismatches(m, lambda w: dihedral_eval(w) == (0, 0), ("a", "a^-1", "s", "s^-1"), 8) == []


# --------------------------------------------------------------------------- 9

@pytest.mark.criterion(9, "Z/3 as a finite quotient of Z agrees with arithmetic mod 3 on length <= 8")
def test_c9_z_mod_3():
    m = build_wp(z_mod_3_truncated(8))
    assert mismatches(m, lambda w: exponent_vector(w, ("b",))[0] % 3 == 0, ("b", "b^-1"), 8) == []


@pytest.mark.criterion(9, "Z/3 as a finite quotient of Z agrees with arithmetic mod 3 on length <= 8")
def test_c9_genuine_finite_normal_subgroup():
    m = build_wp(CATALOG["z-times-z2-mod-z2"]())
    alphabet = ("a", "a^-1", "s", "s^-1")
    a_sum = lambda w: exponent_vector([x for x in w if x in ("a", "a^-1")], ("a",))[0]  # noqa: E731
    assert mismatches(m, lambda w: a_sum(w) == 0, alphabet, 8) == []


# --------------------------------------------------------------------------- 10

def bound_machines() -> dict:
    out = {name: m for name, (m, _) in COMPLETE.items()}
    for name in ("z3", "swap-torus", "even-double", "z-times-z2", "z-times-z2-mod-z2", "s3"):
        out[f"WP({name})"] = completed(build_wp(CATALOG[name]()))
    out["union(a^n b^n, three-pass)"] = union(anbn_machine(), three_pass_machine())
    return out


def long_inputs(alphabet, n, rng, samples=12):
    """Random words plus structured ones that drive stacks highest."""
    words = {tuple(rng.choice(alphabet) for _ in range(n)) for _ in range(samples)}
    half = n // 2
    for x in alphabet:
        words.add((x,) * n)
        for y in alphabet:
            words.add((x,) * half + (y,) * (n - half))
            words.add(tuple(x if i % 3 else y for i in range(n)))
    return words


@pytest.mark.criterion(10, "steps_total <= k*C*B^2*n + k*C*B^2 for every complete deterministic machine, n <= 64")
@pytest.mark.parametrize("name", sorted(bound_machines()))
def test_c10_linear_bound(name):
    m = bound_machines()[name]
    assert is_complete(m) and m.deterministic
    c = bound_constants(m)
    rng = random.Random(name)
    alphabet = m.input_alphabet
    exhaustive = max(n for n in range(9) if len(alphabet) ** n <= 4096)
    checked = 0
    for w in words_upto(alphabet, exhaustive):
        assert run(m, w, budget=c.limit(len(w)) + 1).steps_total <= c.limit(len(w)), w
        checked += 1
    for n in range(exhaustive + 1, 65):
        for w in long_inputs(alphabet, n, rng):
            steps = run(m, w, budget=c.limit(n) + 1).steps_total
            assert steps <= c.k * c.C * c.B ** 2 * n + c.k * c.C * c.B ** 2, (w, steps)
            checked += 1
    assert checked > 1000


# --------------------------------------------------------------------------- 11

@pytest.mark.criterion(11, "BS(1, n^2) matrices, matrix vs rewriting on length <= 8, Parikh image of t+ b t- b-")
@pytest.mark.parametrize("n", [2, 3])
def test_c11_matrix_relation(n):
    assert bs_matrix_eval(("t", "b", "t^-1"), n) == bs_matrix_eval(("b",) * (n * n), n)


@pytest.mark.criterion(11, "BS(1, n^2) matrices, matrix vs rewriting on length <= 8, Parikh image of t+ b t- b-")
def test_c11_matrix_agrees_with_rewriting():
    for w in words_upto(BT, 8):
        assert bs_matrix_eval(w, 2).is_identity() == zhnn_is_identity(w, 1, 4), w


SHAPES = {(1, 4 ** s, s, s) for s in (1, 2)}


@pytest.mark.criterion(11, "BS(1, n^2) matrices, matrix vs rewriting on length <= 8, Parikh image of t+ b t- b-")
def test_c11_parikh_image_at_twelve():
    image = {v.counts for v in parikh_image(lambda w: zhnn_is_identity(w, 1, 4), BT, BS_PATTERN, 12)}
    # t^s b t^-s b^-(4^s) has length 2s + 1 + 4^s: 7 for s = 1, 21 for s = 2
    realizable = {v for v in SHAPES if sum(v) <= 12}
    assert realizable == {(1, 4, 1, 1)}
    assert image == realizable


@pytest.mark.criterion(11, "BS(1, n^2) matrices, matrix vs rewriting on length <= 8, Parikh image of t+ b t- b-")
def test_c11_parikh_image_long_enough_for_both_shapes():
    matrix = lambda w: bs_matrix_eval(w, 2).is_identity()  # noqa: E731
    image = {v.counts for v in parikh_image(matrix, BT, BS_PATTERN, 21)}
    assert image == SHAPES
    w = ("t", "t", "b", "t^-1", "t^-1") + power("b", -16)
    assert zhnn_is_identity(w, 1, 4)


# --------------------------------------------------------------------------- 12

NEGATIVE_LENGTH = {"z-mod-3": 8, "even-double": 12}


@pytest.mark.criterion(12, "every word-problem machine rejects >= 100 random non-identity words")
@pytest.mark.parametrize("name", sorted(CATALOG))
def test_c12_negative_controls(name):
    spec = CATALOG[name]()
    m, o = build_wp(spec), oracle_for(spec)
    alphabet = alphabet_of(spec)
    rng = random.Random(f"negative {name}")
    max_len = NEGATIVE_LENGTH.get(name, 16)
    words: set = set()
    while len(words) < 100:
        w = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))
        if not o.is_identity(w):
            words.add(w)
    false_accepts = [w for w in words if m.accepts(w)]
    assert false_accepts == []
