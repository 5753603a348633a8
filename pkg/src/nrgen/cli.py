"""Command-line interface.

Every verb takes a grammar file. Ranks are decimal integers in the scaled
domain: terminal weights are multiplied by their least common denominator
D, so a word of length n has integer weight D**n times its rational weight.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .bcnf import to_bcnf
from .errors import NrgenError
from .grammar import load_grammar, serialize_grammar, validate
from .oracle import enumerate_words
from .randomness import make_rng
from .session import ENGINES, SessionConfig, expected_attempts_uniform, generate_distinct, rejection_blowup_stats
from .unranking import rank, unrank
from .weights import table_for

EXIT_CODES = {"usage": 2, "range": 2, "parse": 3, "validation": 3, "exhausted": 4, "internal": 5}


def _num(x):
    """Big integers and rationals go out as strings so no consumer rounds them."""
    return str(x)


def _read_forbidden(path):
    if path is None:
        return frozenset()
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


def _emit(args, plain: str, payload: dict):
    if args.json:
        print(json.dumps(payload))
    elif plain:
        print(plain)


def cmd_normalize(args, g):
    text = serialize_grammar(to_bcnf(g))
    _emit(args, text.rstrip("\n"), {"grammar": text})
    return 0


def cmd_validate(args, g):
    report = validate(g)
    lines = [f"error: {e}" for e in report.errors] + [f"warning: {w}" for w in report.warnings]
    lines.append("valid" if report.ok else "invalid")
    _emit(args, "\n".join(lines), {"valid": report.ok, "errors": report.errors, "warnings": report.warnings})
    return 0 if report.ok else EXIT_CODES["validation"]


def cmd_count(args, g):
    wt = table_for(g, args.n)
    total, scale = wt.total(args.n), wt.sg.scale
    plain = str(total)
    if scale > 1:
        plain += f" D={scale} weight={Fraction(total, scale ** args.n)}"
    _emit(args, plain, {"n": args.n, "count": _num(total), "scale": _num(scale),
                        "weight": _num(Fraction(total, scale ** args.n))})
    return 0


def cmd_enumerate(args, g):
    words = enumerate_words(g, args.n)
    plain = "\n".join(f"{w}\t{weight}" for w, weight in words)
    _emit(args, plain, {"n": args.n, "words": [{"word": w, "weight": _num(weight)} for w, weight in words]})
    return 0


def cmd_sample(args, g):
    wt = table_for(g, args.n)
    cfg = SessionConfig(g, args.n, args.k, args.engine, args.seed, _read_forbidden(args.forbid),
                        args.max_attempts)
    result = generate_distinct(cfg, wt)
    scale = wt.sg.scale
    if args.json:
        print(json.dumps({
            "n": args.n, "engine": args.engine, "seed": _num(args.seed),
            "attempts": result.attempts, "exhausted": result.exhausted,
            "words": [{"word": w, "weight": _num(Fraction(wt.word_weight(w), scale ** len(w))),
                       "probability": _num(p)}
                      for w, p in zip(result.words, result.per_word_probability)],
        }))
    else:
        for w in result.words:
            print(w)
    if result.exhausted:
        print(f"exhausted: only {len(result.words)} admissible words of length {args.n}", file=sys.stderr)
        return EXIT_CODES["exhausted"]
    return 0


def cmd_rank(args, g):
    if len(args.word) != args.n:
        raise argparse.ArgumentTypeError(f"word has length {len(args.word)}, not {args.n}")
    wt = table_for(g, args.n)
    interval = rank(wt, args.word)
    _emit(args, str(interval), {"word": args.word, "low": _num(interval.low), "high": _num(interval.high)})
    return 0


def cmd_unrank(args, g):
    wt = table_for(g, args.n)
    word, interval = unrank(wt, wt.axiom, args.n, args.rank)
    _emit(args, f"{word} {interval}", {"word": word, "low": _num(interval.low), "high": _num(interval.high)})
    return 0


def cmd_bench(args, g):
    wt = table_for(g, args.n)
    stats = rejection_blowup_stats(wt, args.k_max, args.trials, make_rng(args.seed), args.n)
    rows = []
    for k, (mean, done) in enumerate(zip(stats.mean_attempts, stats.completed), start=1):
        rows.append({"k": k, "mean_attempts": mean, "runs": done, "distinct_draws": k})
    if args.json:
        print(json.dumps({"n": args.n, "trials": args.trials, "rows": rows}))
    else:
        print("k\trejection_mean\tnon_redundant")
        for row in rows:
            print(f"{row['k']}\t{row['mean_attempts']:.2f}\t{row['k']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nrgen",
        description="Non-redundant random generation of words from weighted context-free grammars.",
        epilog="Ranks are integers in the scaled domain (weights times their common denominator D; "
               "see `count`). Exit codes: 0 ok, 2 usage or range, 3 parse or validation, "
               "4 exhausted, 5 internal error.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("grammar", help="grammar file")
    common.add_argument("--json", action="store_true", help="structured JSON output")
    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("-n", type=int, required=True, help="word length")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("normalize", parents=[common], help="print the binary normal form")
    p.set_defaults(func=cmd_normalize)
    p = sub.add_parser("validate", parents=[common], help="check productivity, reachability, nullable cycles")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("count", parents=[common, sized], help="total scaled weight of length-n words")
    p.set_defaults(func=cmd_count)
    p = sub.add_parser("enumerate", parents=[common, sized], help="list words and weights in rank order")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", parents=[common, sized], help="draw k distinct words")
    p.add_argument("-k", type=int, default=1, help="number of distinct words")
    p.add_argument("--engine", choices=ENGINES, default="recursive")
    p.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
    p.add_argument("--forbid", metavar="FILE", help="file of forbidden words, one per line")
    p.add_argument("--max-attempts", type=int, help="cap on rejection draws")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("rank", parents=[common, sized], help="rank interval of a word")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_rank)
    p = sub.add_parser("unrank", parents=[common, sized], help="word owning a scaled rank")
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_unrank)

    p = sub.add_parser("bench", parents=[common, sized], help="mean rejection draws per number of distinct words")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def _fail(args, kind: str, message: str) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"error": kind, "message": message}))
    print(f"error[{kind}]: {message}", file=sys.stderr)
    return EXIT_CODES[kind]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 0) < 0:
        parser.error("-n must be nonnegative")
    try:
        g = load_grammar(args.grammar)
        return args.func(args, g)
    except NrgenError as exc:
        return _fail(args, exc.kind, str(exc))
    except (OSError, argparse.ArgumentTypeError) as exc:
        return _fail(args, "usage", str(exc))
    except ValueError as exc:
        # configuration errors such as k < 1 or an out-of-range seed
        return _fail(args, "usage", str(exc))


if __name__ == "__main__":
    sys.exit(main())
