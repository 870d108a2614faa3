import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    AB,
    Z2,
    anbn_machine,
    eps_loop_machine,
    is_eps_loop,
    machines,
    palindrome_nm,
    pairs_machine,
)
from multipass.automaton import (
    Configuration,
    Mode,
    PreconditionError,
    Verdict,
    build,
    completed,
    divergence_analysis,
    epsilon_analysis,
    is_complete,
    make_complete,
    replay,
    run,
    validate,
)
from multipass.groups import free_abelian_wp
from multipass.words import words_upto


@pytest.fixture(scope="module")
def wp_z2():
    return free_abelian_wp(("a", "b"))


# --------------------------------------------------------------------------- validate

def test_validate_reports_read_and_epsilon_on_same_key():
    m = build(1, {"q"}, "q", AB, {"X"}, transitions={
        (1, "q", None, "X"): ("q", ()), (1, "q", "a", "X"): ("q", ("X",))})
    report = validate(m)
    assert "determinism" in report.kinds()
    assert any(v.key == (1, "q", "X") for v in report.violations)


def test_validate_reports_epsilon_on_empty_stack():
    m = build(1, {"q"}, "q", AB, transitions={(1, "q", None, None): ("q", ("a",))})
    assert "empty-stack-epsilon" in validate(m).kinds()


def test_builder_output_validates(wp_z2):
    assert validate(wp_z2).violations == []


def test_validate_reports_unknown_push_symbol_and_state():
    m = build(1, {"q"}, "q", AB, transitions={(1, "q", "a", None): ("p", ("Y",))})
    kinds = validate(m).kinds()
    assert "unknown-state" in kinds and "unknown-symbol" in kinds


def test_validate_reports_multiple_images_in_deterministic_mode():
    m = build(1, {"q"}, "q", AB, transitions={(1, "q", "a", None): [("q", ()), ("q", ("a",))]})
    assert "multiple-images" in validate(m).kinds()


def test_validate_reports_pass_out_of_range():
    m = build(1, {"q"}, "q", AB, transitions={(2, "q", "a", None): ("q", ())})
    assert "pass-range" in validate(m).kinds()


def test_partial_deterministic_machine_only_warns():
    m = build(1, {"q"}, "q", AB, transitions={(1, "q", "a", None): ("q", ())}, accept=[("q", None)])
    report = validate(m)
    assert report.ok and report.warnings


# --------------------------------------------------------------------------- run

@pytest.mark.parametrize("word,verdict", [
    ("a b a^-1 b^-1", Verdict.ACCEPT),
    ("", Verdict.ACCEPT),
    ("a a", Verdict.REJECT),
    ("b a^-1 b^-1 a", Verdict.ACCEPT),
    ("a b b^-1", Verdict.REJECT),
])
def test_run_z2(wp_z2, word, verdict):
    assert run(wp_z2, word.split()).verdict is verdict


def test_run_trace_step_accounting(wp_z2):
    tr = run(wp_z2, ["a", "b", "a^-1", "b^-1"])
    assert tr.steps_total == sum(tr.steps_per_pass)
    # four reads and the end-marker on each of two passes
    assert tr.steps_per_pass == (5, 5)


def test_deterministic_missing_move_rejects():
    m = build(1, {"q"}, "q", AB, transitions={(1, "q", "a", None): ("q", ())}, accept=[("q", None)])
    assert run(m, ["a"]).verdict is Verdict.ACCEPT
    assert run(m, ["b"]).verdict is Verdict.REJECT


def test_budget_exceeded_is_its_own_verdict():
    m = eps_loop_machine()
    tr = run(m, ["b", "a"], budget=500)
    assert tr.verdict is Verdict.BUDGET_EXCEEDED
    assert tr.steps_total > 500 - 1


def test_nondeterministic_accept_carries_replayable_witness():
    m = palindrome_nm()
    w = ("a", "b", "b", "a")
    tr = run(m, w)
    assert tr.verdict is Verdict.ACCEPT and tr.witness
    assert replay(m, w, tr.witness)
    assert tr.witness[0] == Configuration(1, "p", 0, ())


def test_nondeterministic_failure_is_no_decision():
    assert run(palindrome_nm(), ("a", "b")).verdict is Verdict.NO_DECISION


def test_replay_rejects_forged_witness():
    m = palindrome_nm()
    w = ("a", "a")
    tr = run(m, w)
    forged = list(tr.witness)
    forged[1] = Configuration(1, "r", 1, ())
    assert not replay(m, w, forged)


def test_each_pass_starts_with_empty_stack():
    # pass 1 leaves stuff on the stack; pass 2 accepts only if it starts empty
    trans = {(1, "q", "a", None): ("q", ("X",)), (1, "q", "a", "X"): ("q", ("X", "X")),
             (2, "p", "a", None): ("p", ()), (2, "p", "a", "X"): ("bad", ("X",))}
    enf = {(1, "q", "X"): "p", (1, "q", None): "p"}
    m = build(2, {"q", "p", "bad"}, "q", AB, {"X"}, transitions=trans, end_nonfinal=enf,
              accept=[("p", None)])
    assert run(m, ["a", "a"]).accepted


@settings(max_examples=40, deadline=None)
@given(machines(), st.lists(st.sampled_from(AB), max_size=5))
def test_run_is_a_function(m, w):
    first = run(m, w, budget=20_000)
    if first.verdict is not Verdict.BUDGET_EXCEEDED:
        assert run(m, w, budget=20_000) == first


# --------------------------------------------------------------------------- divergence and completion

def test_divergence_immediate_loop():
    m = build(1, {"q"}, "q", AB, {"X"}, transitions={(1, "q", None, "X"): ("q", ("X",))})
    assert divergence_analysis(m) == {(1, "q", "X")}


def test_divergence_sentinel_erased():
    m = build(1, {"q", "p"}, "q", AB, {"X"}, transitions={(1, "q", None, "X"): ("p", ())})
    assert divergence_analysis(m) == frozenset()
    assert epsilon_analysis(m).bound == 2


def test_divergence_by_growth():
    m = build(1, {"q"}, "q", AB, {"X"}, transitions={(1, "q", None, "X"): ("q", ("X", "X"))})
    assert divergence_analysis(m) == {(1, "q", "X")}


def test_convergent_chain_that_dips_is_not_divergent():
    # X -> Y Y, Y -> pop: erases everything it pushed and then X's copy too
    trans = {(1, "q", None, "X"): ("q", ("Y", "Y")), (1, "q", None, "Y"): ("q", ())}
    m = build(1, {"q"}, "q", AB, {"X", "Y"}, transitions=trans)
    assert divergence_analysis(m) == frozenset()


def test_epsilon_analysis_requires_determinism():
    with pytest.raises(PreconditionError):
        epsilon_analysis(palindrome_nm())


def test_make_complete_reroutes_divergence():
    m = eps_loop_machine()
    w = ("b", "a")
    assert run(m, w, budget=10_000).verdict is Verdict.BUDGET_EXCEEDED
    c = make_complete(m)
    assert run(c, w).verdict is Verdict.REJECT
    assert is_complete(c) and divergence_analysis(c) == frozenset()


def test_make_complete_preserves_language_on_loop_machine():
    c = make_complete(eps_loop_machine())
    for w in words_upto(AB, 8):
        assert c.accepts(w) == is_eps_loop(w)


def test_make_complete_rejects_nondeterministic_input():
    with pytest.raises(PreconditionError):
        make_complete(palindrome_nm())


@pytest.mark.parametrize("factory", [anbn_machine, pairs_machine])
def test_make_complete_on_complete_machine_keeps_language(factory):
    m = factory()
    c = make_complete(m)
    assert all(m.accepts(w) == c.accepts(w) for w in words_upto(AB, 8))


def test_make_complete_on_wp_z2_keeps_language(wp_z2):
    c = make_complete(wp_z2)
    assert is_complete(wp_z2)
    assert all(wp_z2.accepts(w) == c.accepts(w) for w in words_upto(Z2, 6))


@settings(max_examples=40, deadline=None)
@given(machines())
def test_make_complete_language_and_totality(m):
    c = make_complete(m)
    assert validate(c).ok and is_complete(c)
    for w in words_upto(AB, 4):
        original = run(m, w, budget=20_000).verdict is Verdict.ACCEPT
        completed_run = run(c, w, budget=20_000)
        assert completed_run.verdict in (Verdict.ACCEPT, Verdict.REJECT)
        assert completed_run.accepted == original


@settings(max_examples=30, deadline=None)
@given(machines())
def test_completed_machines_never_exceed_linear_budget(m):
    c = completed(m)
    a = epsilon_analysis(c)
    C = max(1, c.max_push())
    B = max(1, a.bound)
    for w in words_upto(AB, 5):
        tr = run(c, w, budget=c.passes * C * B * B * (len(w) + 1))
        assert tr.verdict is not Verdict.BUDGET_EXCEEDED


@settings(max_examples=30, deadline=None)
@given(machines(mode=Mode.NONDETERMINISTIC))
def test_nondeterministic_accepts_replay(m):
    for w in words_upto(AB, 3):
        tr = run(m, w, budget=20_000)
        if tr.verdict is Verdict.ACCEPT:
            assert tr.witness and replay(m, w, tr.witness)
        else:
            assert tr.witness is None
