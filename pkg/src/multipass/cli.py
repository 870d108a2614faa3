"""Command line: validate, run, build, verify and query oracles.

Exit codes: 0 ok, 1 semantic failure or disagreement, 2 budget exceeded,
3 parse or validation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import serialize as ser
from .automaton import DEFAULT_BUDGET, PreconditionError, Verdict, run, validate
from .closures import complement, intersection, profile_decomposition, union
from .groups import SpecError, build_wp, wp_pullback
from .oracles import (
    bs_matrix_eval,
    iter_parikh_lines,
    oracle_for,
    parikh,
    parikh_image,
    zhnn_is_identity,
)
from .pda import onepass_to_pda, pda_to_onepass
from .specs import alphabet_of
from .transducers import interleaved_product, inverse_gsm, left_quotient
from .verify import default_jobs, verify
from .words import format_word, parse_word

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_PARSE = 0, 1, 2, 3

BUILDS = ("complement", "union", "intersection", "profiles", "pda2mp", "mp2pda", "invgsm",
          "interleave", "lquot", "wp", "pullback")


class UsageError(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _need(files, n, name):
    if len(files) != n:
        raise UsageError(f"build {name} takes {n} input file(s), got {len(files)}")


# --------------------------------------------------------------------------- oracles by name

def resolve_oracle(text: str):
    """``group:FILE``, ``machine:FILE``, ``complement:FILE``, ``bs:N`` or ``bs-matrix:n``.

    Returns ``(predicate, alphabet or None)``.
    """
    kind, _, arg = text.partition(":")
    if not arg:
        raise UsageError(f"oracle must look like KIND:ARG, got {text!r}")
    if kind == "group":
        spec = ser.load(arg, expect="spec")
        o = oracle_for(spec)
        return o.is_identity, alphabet_of(spec)
    if kind in ("machine", "complement"):
        m = ser.load(arg, expect="machine")
        flip = kind == "complement"

        def pred(w, m=m):
            tr = run(m, w)
            if tr.verdict is Verdict.BUDGET_EXCEEDED:
                raise RuntimeError(f"oracle machine exceeded its budget on [{format_word(w)}]")
            return tr.accepted != flip
        return pred, m.input_alphabet
    if kind == "bs":
        n = int(arg)
        return (lambda w: zhnn_is_identity(w, 1, n)), ("b", "b^-1", "t", "t^-1")
    if kind == "bs-matrix":
        n = int(arg)
        return (lambda w: bs_matrix_eval(w, n).is_identity()), ("b", "b^-1", "t", "t^-1")
    raise UsageError(f"unknown oracle kind {kind!r}")


# --------------------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    doc = ser.load(args.file)
    if hasattr(doc, "passes"):
        report = validate(doc)
        for v in report.violations:
            print(f"violation: {v}")
        for w in report.warnings:
            print(f"warning: {w}")
        if report.ok:
            print("valid")
            return EXIT_OK
        return EXIT_FAIL
    problems = doc.validate() if hasattr(doc, "validate") else _spec_problems(doc)
    for p in problems:
        print(f"violation: {p}")
    if not problems:
        print("valid")
    return EXIT_OK if not problems else EXIT_FAIL


def _spec_problems(spec):
    from .groups import validate_spec
    return validate_spec(spec)


def cmd_run(args) -> int:
    m = ser.load(args.file, expect="machine")
    word = parse_word(" ".join(args.word))
    unknown = [s for s in word if s not in m.input_alphabet]
    if unknown:
        print(f"error: symbols {unknown} are not in the input alphabet", file=sys.stderr)
        return EXIT_PARSE
    tr = run(m, word, args.budget)
    print(tr.verdict.value)
    print(f"steps {tr.steps_total} per pass {list(tr.steps_per_pass)}")
    return EXIT_BUDGET if tr.verdict is Verdict.BUDGET_EXCEEDED else EXIT_OK


def cmd_build(args) -> int:
    name, files = args.construction, args.inputs
    load_m = lambda p: ser.load(p, expect="machine")  # noqa: E731
    if name == "complement":
        _need(files, 1, name)
        out = complement(load_m(files[0]))
    elif name in ("union", "intersection"):
        _need(files, 2, name)
        op = union if name == "union" else intersection
        out = op(load_m(files[0]), load_m(files[1]))
    elif name == "profiles":
        _need(files, 1, name)
        decomp = profile_decomposition(load_m(files[0]))
        doc = {"profiles": [{"triples": [[ser.render(q0), ser.render(g), ser.render(q1)]
                                         for q0, g, q1 in p.triples],
                             "machines": [ser.machine_to_dict(s) for s in slices]}
                            for p, slices in decomp]}
        _emit(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", args.output)
        return EXIT_OK
    elif name == "pda2mp":
        _need(files, 1, name)
        out = pda_to_onepass(ser.load(files[0], expect="pda"))
    elif name == "mp2pda":
        _need(files, 1, name)
        out = onepass_to_pda(load_m(files[0]))
    elif name == "invgsm":
        _need(files, 2, name)
        out = inverse_gsm(load_m(files[0]), ser.load(files[1], expect="gsm"))
    elif name == "interleave":
        if not files:
            raise UsageError("build interleave needs at least one machine")
        out = interleaved_product([load_m(f) for f in files])
    elif name == "lquot":
        _need(files, 1, name)
        out = left_quotient(load_m(files[0]), [parse_word(w) for w in args.word or []])
    elif name == "wp":
        _need(files, 1, name)
        out = build_wp(ser.load(files[0], expect="spec"))
    elif name == "pullback":
        _need(files, 1, name)
        images = {}
        for item in args.map or []:
            y, sep, w = item.partition("=")
            if not sep or not y.strip():
                raise UsageError(f"--map expects NAME=WORD, got {item!r}")
            images[y.strip()] = parse_word(w)
        out = wp_pullback(load_m(files[0]), images)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown construction {name!r}")
    _emit(ser.dumps(out), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    m = ser.load(args.file, expect="machine")
    pred, _ = resolve_oracle(args.oracle)

    def safe(w):
        try:
            return pred(w)
        except RuntimeError:
            return None

    report = verify(m, safe, args.max_len, args.budget, args.jobs, machine_id=args.file,
                    oracle_id=args.oracle)
    print(report.summary())
    if args.output:
        Path(args.output).write_text(json.dumps(report.to_dict(), indent=2, default=str) + "\n",
                                     encoding="utf-8")
    if report.bound is not None and not report.bound.ok:
        print("linear bound violated", file=sys.stderr)
        return EXIT_FAIL
    return report.exit_code


def cmd_oracle(args) -> int:
    if args.oracle_cmd == "eval":
        spec = ser.load(args.spec, expect="spec")
        o = oracle_for(spec)
        word = parse_word(" ".join(args.word))
        print("identity" if o.is_identity(word) else "not identity")
        print(f"value {o.evaluate(word)!r}")
        return EXIT_OK
    if args.oracle_cmd == "parikh":
        alphabet = parse_word(args.alphabet)
        v = parikh(parse_word(" ".join(args.word)), alphabet)
        print(" ".join(str(x) for x in v.counts))
        return EXIT_OK
    pred, alpha = resolve_oracle(args.oracle)
    alphabet = parse_word(args.alphabet) if args.alphabet else alpha
    vectors = parikh_image(pred, alphabet, args.pattern, args.max_len)
    lines = list(iter_parikh_lines(vectors))
    _emit("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------- parser

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multipass", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a machine, pda, gsm or group spec file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="run a machine on a whitespace-separated word")
    r.add_argument("file")
    r.add_argument("word", nargs="*", help='symbols, e.g. "a b a^-1 b^-1"')
    r.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("build", help="construct a machine")
    b.add_argument("construction", choices=BUILDS)
    b.add_argument("inputs", nargs="*")
    b.add_argument("--word", action="append", help="quotient word (lquot); repeatable")
    b.add_argument("--map", action="append", help="NAME=WORD generator image (pullback)")
    b.add_argument("--output", "-o")
    b.set_defaults(func=cmd_build)

    ve = sub.add_parser("verify", help="compare a machine with an oracle on all short words")
    ve.add_argument("file")
    ve.add_argument("oracle", help="group:FILE, machine:FILE, complement:FILE, bs:N or bs-matrix:n")
    ve.add_argument("--max-len", type=int, default=8)
    ve.add_argument("--jobs", type=int, default=default_jobs())
    ve.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ve.add_argument("--output", "-o")
    ve.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="oracle queries")
    osub = o.add_subparsers(dest="oracle_cmd", required=True)
    oe = osub.add_parser("eval", help="evaluate a word in a group")
    oe.add_argument("spec")
    oe.add_argument("word", nargs="*")
    op = osub.add_parser("parikh", help="Parikh vector of a word")
    op.add_argument("word", nargs="*")
    op.add_argument("--alphabet", required=True)
    oi = osub.add_parser("parikh-image", help="Parikh vectors of accepted words")
    oi.add_argument("oracle")
    oi.add_argument("--alphabet")
    oi.add_argument("--pattern")
    oi.add_argument("--max-len", type=int, default=8)
    oi.add_argument("--output", "-o")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ser.ParseError as e:
        print(f"parse error at {e.location}: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except (SpecError, FileNotFoundError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
