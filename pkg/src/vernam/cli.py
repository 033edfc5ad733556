"""Command-line front end.

Exit codes: 0 success (green), 1 specification failure or surviving mutant
(red), 2 usage or environment error.  Reports go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import infection, keygen, stream_io
from .core import KeyPolicy
from .errors import BrokenBaseline, VernamError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def parse_u64(text: str) -> int:
    """Decimal or 0x-prefixed hexadecimal unsigned 64-bit integer."""
    t = text.strip().lower()
    try:
        value = int(t[2:], 16) if t.startswith("0x") else int(t, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal or 0x-hex integer: {text!r}") from None
    if not 0 <= value <= keygen.MAX_SEED:
        raise argparse.ArgumentTypeError(f"out of unsigned 64-bit range: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def _mutant_list(text: str) -> list[infection.MutantId]:
    try:
        return [infection.MutantId.parse(part) for part in text.split(",") if part.strip()]
    except VernamError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; raise instead so run_cli can return a code.
    def exit(self, status=0, message=None):
        if message:
            self._print_message(message, sys.stderr)
        raise _ParserExit(status)


class _ParserExit(Exception):
    def __init__(self, status: int):
        self.status = status


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vernam", description="Vernam one-time pad with a self-testing fault-injection harness.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("encipher", "decipher"):
        p = sub.add_parser(name, help=f"{name} a file with a key file")
        p.add_argument("--in", dest="in_path", required=True, metavar="PATH")
        p.add_argument("--key", dest="key_path", required=True, metavar="PATH")
        p.add_argument("--out", dest="out_path", required=True, metavar="PATH")
        p.add_argument(
            "--allow-short-key",
            action="store_true",
            help="cycle a key shorter than the input. INSECURE: this is repeating-key XOR, not a one-time pad",
        )

    p = sub.add_parser("keygen", help="write a raw key file")
    p.add_argument("--length", type=_positive_int, required=True)
    p.add_argument("--out", dest="out_path", required=True, metavar="PATH")
    p.add_argument("--seed", type=parse_u64, help="deterministic key for tests (never for real secrets)")

    p = sub.add_parser("verify", help="compare two files byte by byte")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("selftest", help="check the round trip and run the mutant kill matrix")
    p.add_argument("--seed", type=parse_u64, default=1)
    p.add_argument("--corpus-size", type=_positive_int, default=64)
    p.add_argument("--max-len", type=_non_negative_int, default=256)
    p.add_argument(
        "--mutants",
        type=_mutant_list,
        default=list(infection.ALL_MUTANTS),
        help="comma-separated ids, e.g. M1,M3 or M1_DecipherOr (default: all)",
    )

    p = sub.add_parser("triangle", help="classify three integer side lengths")
    for side in ("a", "b", "c"):
        p.add_argument(side, type=int)

    return parser


def _cmd_xor(args, op) -> int:
    policy = KeyPolicy.RELAXED_REPEAT if args.allow_short_key else KeyPolicy.STRICT
    if args.allow_short_key:
        print("warning: --allow-short-key repeats the key; this is not a one-time pad", file=sys.stderr)
    op(stream_io.FileJob(args.in_path, args.out_path, args.key_path, policy))
    return EXIT_OK


def _cmd_keygen(args) -> int:
    key = keygen.generate_key(keygen.KeySpec(args.length, args.seed))
    keygen.write_key(key, args.out_path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    verdict = stream_io.files_equal(args.a, args.b)
    if verdict.equal:
        return EXIT_OK
    print(f"{args.a} != {args.b}: {verdict.describe()}", file=sys.stderr)
    return EXIT_FAIL


def _cmd_selftest(args) -> int:
    corpus = infection.generate_corpus(args.seed, args.corpus_size, args.max_len)
    try:
        matrix = infection.run_kill_matrix(infection.VERNAM, args.mutants, corpus)
    except BrokenBaseline as e:
        print(f"BASELINE FAILED corpus_seed={args.seed} corpus_size={len(corpus)}", file=sys.stderr)
        print(str(e), file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(matrix.report())
    if not matrix.all_killed:
        names = ", ".join(m.value for m in matrix.survivors)
        print(f"surviving mutants: {names}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_triangle(args) -> int:
    print(infection.classify_triangle(args.a, args.b, args.c))
    return EXIT_OK


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ParserExit as e:
        return EXIT_OK if e.status == 0 else EXIT_USAGE

    try:
        if args.command == "encipher":
            return _cmd_xor(args, stream_io.encipher_file)
        if args.command == "decipher":
            return _cmd_xor(args, stream_io.decipher_file)
        if args.command == "keygen":
            return _cmd_keygen(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
        if args.command == "triangle":
            return _cmd_triangle(args)
    except VernamError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        # Keeps the exit-code mapping total; anything else is an environment problem.
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    parser.print_usage(sys.stderr)  # pragma: no cover
    return EXIT_USAGE  # pragma: no cover


def main() -> None:
    sys.exit(run_cli())
