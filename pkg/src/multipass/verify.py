"""Exhaustive comparison of a machine against an oracle, with step accounting."""
from __future__ import annotations

import itertools
import multiprocessing
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

from .automaton import (
    DEFAULT_BUDGET,
    MultipassAutomaton,
    Verdict,
    epsilon_analysis,
    is_complete,
    run,
)
from .words import format_word


@dataclass(frozen=True)
class BoundConstants:
    """``k`` passes, ``C`` longest push word, ``B`` longest epsilon run plus one."""
    k: int
    C: int
    B: int

    @property
    def slope(self) -> int:
        return self.k * self.C * self.B ** 2

    def limit(self, n: int) -> int:
        return self.slope * (n + 1)


def bound_constants(m: MultipassAutomaton) -> BoundConstants:
    """Constants of the linear step bound (``C`` and ``B`` are at least 1)."""
    analysis = epsilon_analysis(m)
    return BoundConstants(m.passes, max(1, m.max_push()), max(1, analysis.bound))


@dataclass
class BoundCheck:
    constants: BoundConstants
    max_ratio: float
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class VerifyReport:
    machine_id: str
    oracle_id: str
    max_len: int
    words_checked: int = 0
    disagreements: list = field(default_factory=list)
    steps_histogram: dict = field(default_factory=dict)
    bound: Optional[BoundCheck] = None

    @property
    def ok(self) -> bool:
        return not self.disagreements

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary(self) -> str:
        lines = [f"machine: {self.machine_id}", f"oracle: {self.oracle_id}",
                 f"max length: {self.max_len}", f"words checked: {self.words_checked}",
                 f"disagreements: {len(self.disagreements)}"]
        for w, mv, ov in self.disagreements[:10]:
            lines.append(f"  [{format_word(w)}] machine={mv} oracle={ov}")
        if self.bound is not None:
            c = self.bound.constants
            status = "ok" if self.bound.ok else f"{len(self.bound.violations)} violations"
            lines.append(f"linear bound k*C*B^2 = {c.k}*{c.C}*{c.B}^2 = {c.slope}; "
                         f"max steps/(n+1) = {self.bound.max_ratio:.2f}; {status}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["disagreements"] = [{"word": list(w), "machine": mv, "oracle": ov}
                              for w, mv, ov in self.disagreements]
        d["steps_histogram"] = {str(k): v for k, v in sorted(self.steps_histogram.items())}
        d["ok"] = self.ok
        return d


# worker state shared through fork
_JOB: dict = {}


def _check_words(words: Sequence[tuple]):
    m, oracle, budget = _JOB["machine"], _JOB["oracle"], _JOB["budget"]
    out = []
    for w in words:
        tr = run(m, w, budget)
        expected = oracle(w)
        out.append((w, tr.verdict, tr.steps_total, None if expected is None else bool(expected)))
    return out


def verify(m: MultipassAutomaton, oracle: Callable[[tuple], bool], max_len: int = 8,
           budget: int = DEFAULT_BUDGET, jobs: int = 1, machine_id: str = "",
           oracle_id: str = "", alphabet: Optional[Sequence[str]] = None) -> VerifyReport:
    """Compare ``m`` with ``oracle`` on every word of length ``<= max_len``.

    A budget overrun, or an oracle answering ``None``, counts as a disagreement. For complete deterministic
    machines the step count of every run is checked against the linear bound.
    """
    alphabet = tuple(alphabet or m.input_alphabet)
    report = VerifyReport(machine_id or m.label or "machine", oracle_id, max_len)
    consts = bound_constants(m) if m.deterministic and is_complete(m) else None
    bound = BoundCheck(consts, 0.0) if consts else None

    _JOB.update(machine=m, oracle=oracle, budget=budget)
    strata = [list(itertools.product(alphabet, repeat=n)) for n in range(max_len + 1)]
    chunks = [c[i:i + 2000] for c in strata for i in range(0, len(c), 2000)]
    jobs = max(1, jobs)
    if jobs > 1 and "fork" in multiprocessing.get_all_start_methods():
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            results = pool.map(_check_words, chunks)
    else:
        results = [_check_words(c) for c in chunks]

    hist: Counter = Counter()
    for chunk in results:
        for w, verdict, steps, expected in chunk:
            report.words_checked += 1
            hist[steps] += 1
            accepted = verdict is Verdict.ACCEPT
            if verdict is Verdict.BUDGET_EXCEEDED or expected is None or accepted != expected:
                label = "undecided" if expected is None else ("accept" if expected else "reject")
                report.disagreements.append((w, verdict.value, label))
            if bound is not None:
                bound.max_ratio = max(bound.max_ratio, steps / (len(w) + 1))
                if verdict is Verdict.BUDGET_EXCEEDED or steps > consts.limit(len(w)):
                    bound.violations.append((w, steps))
    report.steps_histogram = dict(hist)
    report.bound = bound
    return report


def default_jobs() -> int:
    return os.cpu_count() or 1
