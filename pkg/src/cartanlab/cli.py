"""Command line: ``cartanlab verify | list-suites | eval``."""
from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, SuiteConfig, emit_report, run_suite
from .suites import REGISTRY

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cartanlab", description="Exact verification of contracted commutator identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", required=True, help="suite id or 'all'")
    dim = v.add_mutually_exclusive_group()
    # None defaults: argparse ignores a conflict when the given value equals the default
    dim.add_argument("--complex-dim", type=int, metavar="N")
    dim.add_argument("--real-dim", type=int, metavar="M")
    v.add_argument("--max-degree", type=int, default=2, metavar="D")
    v.add_argument("--trials", type=int, default=30, metavar="T")
    v.add_argument("--seed", type=_seed, default=42, metavar="S")
    v.add_argument("--rank", type=int, default=1, metavar="R")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    v.add_argument("--plot", metavar="PATH", help="also render a per-suite summary figure (needs matplotlib)")

    sub.add_parser("list-suites", help="list suite ids")

    e = sub.add_parser("eval", help="parse expressions and print their canonical form")
    e.add_argument("--expr", required=True, metavar="PATH")
    return p


def _verify(args) -> int:
    ids = list(REGISTRY) if args.suite == "all" else [args.suite]
    try:
        cfgs = [
            SuiteConfig(
                s,
                complex_dim=2 if args.complex_dim is None else args.complex_dim,
                real_dim=4 if args.real_dim is None else args.real_dim,
                max_degree=args.max_degree,
                trials=args.trials,
                seed=args.seed,
                rank=args.rank,
            )
            for s in ids
        ]
    except ConfigError as exc:
        print(f"cartanlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = None
    if args.out:
        try:
            out = open(args.out, "w", encoding="utf-8")
        except OSError as exc:
            print(f"cartanlab: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    if args.plot:
        try:
            open(args.plot, "ab").close()
        except OSError as exc:
            print(f"cartanlab: cannot write {args.plot}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    try:
        results = [run_suite(c) for c in cfgs]
        status = emit_report(results, args.format, out)
    finally:
        if out is not None:
            out.close()
    if args.plot:
        from .plot import plot_summary

        plot_summary(results, args.plot)
    return status


def _eval(path: str) -> int:
    from .sexpr import ParseError, dumps, loads

    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cartanlab: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        values = loads(text)
    except (ParseError, KeyError, ValueError, ArithmeticError) as exc:
        print(f"cartanlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for v in values:
        print(dumps(v))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-suites":
        for s in REGISTRY.values():
            tag = "\tadvisory" if s.advisory else ""
            print(f"{s.id}\t{s.kind}\t{s.summary}{tag}")
        return EXIT_OK
    if args.command == "eval":
        return _eval(args.expr)
    return _verify(args)


if __name__ == "__main__":
    sys.exit(main())
