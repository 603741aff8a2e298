"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 computation refused
(oracle guard or stuck construction), 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import experiments
from .automaton import (
    Automaton,
    NotSynchronizingError,
    ParseError,
    PreconditionError,
    apply_word,
    classify,
    format_automaton,
    format_word,
    parse_automaton,
    parse_word,
    rank,
)
from .avoiding import ConstructionStuck, InvariantError, avoid_global, avoid_subset
from .compression import c_bound, greedy_compress_to
from .generators import (
    METHODS,
    STRONGLY_CONNECTED,
    SYNCHRONIZING,
    GenerationFailed,
    GeneratorSpec,
    cerny,
    random_automaton,
)
from .oracle import SOME_STATE, WHOLE_SUBSET, OracleRefused, exact_shortest_avoiding, exact_shortest_reset
from .pipeline import bound_report, pipeline_reset

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_VERIFY = 0, 1, 2, 3

REQUIRE_ALIASES = {
    "sync": SYNCHRONIZING,
    SYNCHRONIZING: SYNCHRONIZING,
    "scc": STRONGLY_CONNECTED,
    STRONGLY_CONNECTED: STRONGLY_CONNECTED,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(x: Fraction) -> str:
    return f"{x} ({experiments.decimal(x)})"


def _states(text: str, aut: Automaton, flag: str = "--states") -> list:
    try:
        states = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated state indices, got {text!r}") from None
    for q in states:
        if not 0 <= q < aut.n:
            raise UsageError(f"{flag}: state {q} out of range [0, {aut.n})")
    if not states:
        raise UsageError(f"{flag}: no states given")
    return states


def _load(path: str) -> Automaton:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_automaton(text)
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_generate(args, out) -> int:
    if args.family == "cerny":
        aut = cerny(args.n)
    else:
        require = set()
        for item in filter(None, (args.require or "").split(",")):
            if item not in REQUIRE_ALIASES:
                raise UsageError(f"--require: unknown constraint {item!r}")
            require.add(REQUIRE_ALIASES[item])
        spec = GeneratorSpec(args.family, args.n, args.k, args.seed, frozenset(require),
                             args.max_rejections, args.method)
        aut = random_automaton(spec)
    text = format_automaton(aut)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_info(args, out) -> int:
    aut = _load(args.file)
    report = classify(aut)
    out.write(f"n: {aut.n}\nk: {aut.k}\n")
    out.write(f"synchronizing: {str(report.synchronizing).lower()}\n")
    out.write(f"strongly_connected: {str(report.strongly_connected).lower()}\n")
    out.write(f"sink: {'none' if report.sink is None else report.sink}\n")
    return EXIT_OK


def cmd_reset(args, out) -> int:
    aut = _load(args.file)
    out.write(f"method: {args.method}\n")
    if args.method == "exact":
        result = exact_shortest_reset(aut, max_states=args.max_states, max_nodes=args.max_nodes)
        if result.length is None:
            out.write("length: none\n")
            return EXIT_OK
        out.write(f"length: {result.length}\nword: {format_word(result.word, aut.k)}\n")
        out.write(f"explored: {result.explored}\n")
        return EXIT_OK
    if args.method == "greedy":
        if not classify(aut).synchronizing:
            raise NotSynchronizingError("automaton is not synchronizing")
        word = greedy_compress_to(aut, aut.states, 1)
        out.write(f"length: {len(word)}\nword: {format_word(word, aut.k)}\n")
        return EXIT_OK
    cert = pipeline_reset(aut)
    out.write(f"length: {cert.length}\nword: {format_word(cert.word, aut.k)}\n")
    out.write(f"branch: {cert.branch.value}\nk: {cert.k_used}\n")
    out.write(f"bound: {_fraction(cert.bound_value)}\n")
    out.write(f"within_bound: {str(cert.within_bound).lower()}\n")
    trace = " ".join(f"{length}:{r}" for length, r in cert.rank_trace)
    out.write(f"rank_trace: {trace}\n")
    return EXIT_OK


def cmd_avoid(args, out) -> int:
    aut = _load(args.file)
    states = _states(args.states, aut)
    if args.subset:
        D = aut.stateset(states)
        if args.method == "exact":
            result = exact_shortest_avoiding(aut, D, WHOLE_SUBSET, max_states=args.max_states,
                                             max_nodes=args.max_nodes)
            word = result.word
        else:
            word = avoid_subset(aut, D)
        if word is None:
            out.write(f"subset {','.join(map(str, states))}: none\n")
        else:
            out.write(f"subset {','.join(map(str, states))}: length {len(word)} "
                      f"word {format_word(word, aut.k)}\n")
        return EXIT_OK
    for q in states:
        A = aut.stateset([q])
        if args.method == "exact":
            result = exact_shortest_avoiding(aut, A, SOME_STATE, max_states=args.max_states,
                                             max_nodes=args.max_nodes)
            word = result.word
        else:
            word = avoid_global(aut, A) if aut.n > 1 else None
        if word is None:
            out.write(f"state {q}: none\n")
        else:
            out.write(f"state {q}: length {len(word)} word {format_word(word, aut.k)}\n")
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n: must be positive")
    ks = args.k or []
    for k in ks:
        if not 1 <= k <= args.n / 8:
            raise UsageError(f"--k: need 1 <= k <= n/8, got {k}")
    report = bound_report(args.n, ks)
    out.write(f"n: {report.n}\n")
    out.write(f"classic: {_fraction(report.classic_bound)}\n")
    out.write(f"new: {_fraction(report.new_bound)}\n")
    out.write(f"new_improves_classic_minus_1: {str(report.improves).lower()}\n")
    out.write(f"sink: {report.sink_bound}\n")
    out.write(f"k_choice: {report.k_choice}\n")
    for k, value in report.parametrized.items():
        out.write(f"parametrized[k={k}]: {_fraction(value)}\n")
        out.write(f"c_upper_closed[k={k}]: {_fraction(report.c_upper_closed[k])}\n")
    if report.c_lower_closed is not None:
        out.write(f"c_lower_closed: {_fraction(report.c_lower_closed)}\n")
        out.write(f"c_lower_sum: {c_bound(args.n, args.n // 2, 1)}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    aut = _load(args.file)
    try:
        word = parse_word(args.word, aut.k)
    except (PreconditionError, ValueError) as e:
        raise UsageError(f"--word: {e}") from None
    image = apply_word(aut, aut.states, word)
    ok = True
    if args.rank is not None:
        r = rank(aut, word)
        ok = r == args.rank
        out.write(f"rank: {r} (expected {args.rank})\n")
    if args.avoids is not None:
        targets = _states(args.avoids, aut, "--avoids")
        hit = [q for q in targets if q in image]
        ok = ok and not hit
        out.write(f"image: {image}\n")
        if hit:
            out.write(f"not avoided: {','.join(map(str, hit))}\n")
    out.write("ok\n" if ok else "FAILED\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _n_range(args):
    if args.n_max < args.n_min:
        return range(0)
    return range(args.n_min, args.n_max + 1)


def cmd_experiment(args, out) -> int:
    if args.kind == "bounds":
        if args.n_max < 1:
            raise UsageError("--n-max: must be positive")
        make = lambda done: experiments.bounds_rows(args.n_max, done)  # noqa: E731
    elif args.kind == "avoiding":
        make = lambda done: experiments.avoiding_rows(  # noqa: E731
            _n_range(args), args.samples, args.seed, args.k, args.cerny,
            args.max_nodes, args.jobs, done)
    else:
        make = lambda done: experiments.pair_rows(  # noqa: E731
            _n_range(args), args.samples, args.seed, args.k, args.cerny, args.jobs, done)
    written = experiments.write_rows(make, args.out, resume=args.resume)
    out.write(f"wrote {written} rows to {args.out}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resetwords", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def oracle_flags(p):
        p.add_argument("--max-states", type=int, default=24,
                       help="refuse exact searches above this many states")
        p.add_argument("--max-nodes", type=int, default=None,
                       help="refuse exact searches visiting more images "
                            "(default from RESETWORDS_MAX_NODES)")

    p = sub.add_parser("generate", help="write an automaton file")
    p.add_argument("family", choices=["cerny", "random", "sink-random"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--require", default="", help="comma list of sync, scc")
    p.add_argument("--method", choices=METHODS, default="reject")
    p.add_argument("--max-rejections", type=int, default=100_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("info", help="classify an automaton")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("reset", help="find a reset word")
    p.add_argument("file")
    p.add_argument("--method", choices=["greedy", "pipeline", "exact"], default="pipeline")
    oracle_flags(p)
    p.set_defaults(func=cmd_reset)

    p = sub.add_parser("avoid", help="find avoiding words")
    p.add_argument("file")
    p.add_argument("--states", required=True, help="comma-separated states")
    p.add_argument("--method", choices=["span", "exact"], default="span")
    p.add_argument("--subset", action="store_true",
                   help="avoid all listed states at once instead of each separately")
    oracle_flags(p)
    p.set_defaults(func=cmd_avoid)

    p = sub.add_parser("bounds", help="print reset threshold bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, action="append",
                   help="parameter for the parametrized bound (repeatable)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check a word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rank", type=int)
    group.add_argument("--avoids", help="comma-separated states the image must miss")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run a CSV sweep")
    p.add_argument("kind", choices=["avoiding", "bounds", "pair"])
    p.add_argument("--out", required=True)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--k", type=int, default=2, help="alphabet size")
    p.add_argument("--cerny", action="store_true", help="add a Cerny row per n")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits on --help and on usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"resetwords: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, GenerationFailed) as e:
        print(f"resetwords: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleRefused, ConstructionStuck) as e:
        print(f"resetwords: refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except InvariantError as e:
        print(f"resetwords: internal check failed: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
