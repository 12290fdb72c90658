"""
Command line interface: python -m torb <command> ...

Exit codes: 0 success, 1 domain error, 2 parse error, 3 inconclusive search.
"""

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO

from dotenv import load_dotenv

from torb.config import Config
from torb.errors import DomainError, ParseError, SearchInconclusive
from torb.services import records
from torb.services.debug_logger import DebugLogger
from torb.services.gl2z_core import Mat2, parse_matrix
from torb.services.records import OutputRecord


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON record instead of text")
    common.add_argument("--file", metavar="PATH",
                        help="read further matrices from PATH, one 'a b; c d' per line")
    common.add_argument("--log-level", default=None,
                        help=f"console log level on stderr (default {Config.CLI_LOG_LEVEL})")
    return common


def _orientation(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--oriented", dest="oriented", action="store_true")
    group.add_argument("--unoriented", dest="oriented", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="torb",
        description="Toric cobordism classes of torus bundles over the circle",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    p = commands.add_parser("class", parents=[common], help="cobordism class of M_phi")
    _orientation(p)
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("cobordant", parents=[common], help="are M_phi and M_psi cobordant")
    _orientation(p)
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("amphichiral", parents=[common], help="is M_phi cobordant to its reverse")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("decompose", parents=[common], help="word in A, B, R evaluating to M")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("normal-form", parents=[common], help="unique normal form of M")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("witness", parents=[common], help="commutator or square witness of M")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--commutators", dest="kind", action="store_const", const="commutators")
    kind.add_argument("--squares", dest="kind", action="store_const", const="squares")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("genus", parents=[common], help="least number of commutators giving M")
    p.add_argument("--max", dest="g_max", type=int, required=True, metavar="G")
    p.add_argument("--budget", type=int, default=None,
                   help="node cap per genus level (default TORB_GENUS_BUDGET)")
    p.add_argument("--pair-length", type=int, default=None,
                   help="syllable bound of the genus >= 2 candidates (default TORB_GENUS_PAIR_LENGTH)")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("bound", parents=[common], help="does the union of the M_i bound")
    base = p.add_mutually_exclusive_group(required=True)
    base.add_argument("--orientable", dest="orientable", action="store_true")
    base.add_argument("--nonorientable", dest="orientable", action="store_false")
    p.add_argument("matrices", nargs="*", metavar="M")

    p = commands.add_parser("build-cobordism", parents=[common], help="torus bundle over a surface bounding the M_i")
    p.add_argument("--nonorientable-base", action="store_true")
    p.add_argument("matrices", nargs="*", metavar="M")

    commands.add_parser("verify", parents=[common], help="check the presentations and quotients")

    p = commands.add_parser("check", parents=[common], help="re-evaluate a witness or cobordism JSON record")
    p.add_argument("record", metavar="FILE", help="JSON record, or - for stdin")

    return parser


def _read_matrices(args) -> List[Mat2]:
    texts = list(getattr(args, "matrices", None) or [])
    if args.file:
        try:
            with open(args.file, 'r', encoding='utf-8') as f:
                texts.extend(line.strip() for line in f if line.strip() and not line.lstrip().startswith('#'))
        except OSError as e:
            raise ParseError(f"cannot read {args.file}: {e.strerror}")
    return [parse_matrix(text) for text in texts]


def _single(ms: Sequence[Mat2], count: int, command: str) -> Sequence[Mat2]:
    if len(ms) != count:
        raise ParseError(f"{command} expects {count} matrix argument(s), got {len(ms)}")
    return ms


def _read_record(source: str, stdin: TextIO):
    try:
        if source == '-':
            text = stdin.read()
        else:
            with open(source, 'r', encoding='utf-8') as f:
                text = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {source}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON record: {e.msg} at line {e.lineno}")


def dispatch(args, stdin: TextIO = sys.stdin) -> OutputRecord:
    command = args.command
    if command == "verify":
        return records.verify_record()
    if command == "check":
        return records.check_record(_read_record(args.record, stdin))

    ms = _read_matrices(args)
    if command == "class":
        return records.class_record(*_single(ms, 1, command), oriented=args.oriented)
    if command == "cobordant":
        x, y = _single(ms, 2, command)
        return records.cobordant_record(x, y, oriented=args.oriented)
    if command == "amphichiral":
        return records.amphichiral_record(*_single(ms, 1, command))
    if command == "decompose":
        return records.decompose_record(*_single(ms, 1, command))
    if command == "normal-form":
        return records.normal_form_record(*_single(ms, 1, command))
    if command == "witness":
        return records.witness_record(*_single(ms, 1, command), kind=args.kind)
    if command == "genus":
        if args.g_max < 1:
            raise ParseError("--max must be a positive integer")
        if args.budget is not None and args.budget < 1:
            raise ParseError("--budget must be a positive integer")
        if args.pair_length is not None and args.pair_length < 1:
            raise ParseError("--pair-length must be a positive integer")
        return records.genus_record(*_single(ms, 1, command), g_max=args.g_max,
                                    budget=args.budget, pair_length=args.pair_length)
    if command == "bound":
        return records.bound_record(ms, orientable=args.orientable)
    if command == "build-cobordism":
        return records.cobordism_record(ms, base_orientable=not args.nonorientable_base)
    raise ParseError(f"unknown command {command!r}")


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
        stdin: Optional[TextIO] = None) -> int:
    """Run one command; the record goes to out (stdout), diagnostics to stderr"""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage or help
        return e.code if isinstance(e.code, int) else records.EXIT_PARSE

    DebugLogger.setup_logger(
        log_level=args.log_level or Config.CLI_LOG_LEVEL,
        log_file=Config.log_file() or None,
        stream=sys.stderr,
    )

    try:
        record = dispatch(args, stdin or sys.stdin)
    except ParseError as e:
        record = records.error_record(args.command, e, records.EXIT_PARSE)
    except DomainError as e:
        record = records.error_record(args.command, e, records.EXIT_DOMAIN)
    except SearchInconclusive as e:
        record = records.error_record(args.command, e, records.EXIT_INCONCLUSIVE)
    except MemoryError:
        # only words are written out letter by letter; classes never are
        record = records.error_record(args.command, DomainError("result too large to write out"), records.EXIT_DOMAIN)

    if record.exit_code in (records.EXIT_DOMAIN, records.EXIT_PARSE) and "error" in record.data:
        DebugLogger.log_warning(f"{args.command} failed", {"error": record.data["error"]})

    print(record.render(args.json), file=out)
    return record.exit_code


def main():
    load_dotenv()
    sys.exit(run())


if __name__ == '__main__':
    main()
