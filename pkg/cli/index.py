"""
Relational verifier - command-line entry point
Parses arguments and delegates to backend.command_logic
"""

import argparse
import sys
import os

# Add parent directory to path to import backend modules
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_dir)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from backend.command_logic import handle_command, render_response
from backend.config import CliConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relverify",
        description="Check Hoare assertions and query predicate transformers over quantale-valued relations.",
    )
    parser.add_argument("--quantale", choices=CliConfig.BUILTIN_QUANTALES,
                        help="override the document's quantale selector")
    parser.add_argument("--json", action="store_true", help="print machine-readable JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify every assertion in a document")
    check.add_argument("document")

    for name, help_text in (("sp", "strongest postcondition"), ("wlp", "weakest liberal precondition")):
        p = sub.add_parser(name, help=f"{help_text} of a program or matrix")
        p.add_argument("document")
        p.add_argument("target", help="program or matrix name")
        p.add_argument("predicate", help="predicate name")

    star = sub.add_parser("star", help="print the reflexive-transitive closure of a matrix")
    star.add_argument("document")
    star.add_argument("target", help="matrix name")

    dump = sub.add_parser("dump", help="print a named matrix")
    dump.add_argument("document")
    dump.add_argument("target", help="matrix name")

    comp = sub.add_parser("compile", help="print the matrix a program denotes")
    comp.add_argument("document")
    comp.add_argument("target", help="program name")
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    as_json = args.pop("json")
    code, response = handle_command(command, args)
    text = render_response(response, as_json)
    if code == CliConfig.EXIT_ERROR and not as_json:
        print(text, file=sys.stderr)
    elif text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
