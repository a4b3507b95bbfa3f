"""Command line entry point.

    python -m abmod analyze family.txt --b-order 8 --out report.json
    python -m abmod basis family.txt
    python -m abmod matrix family.txt --op nabla
    python -m abmod lattice-g family.txt
    python -m abmod check-criterion family.txt --k 1
    python -m abmod verify-paper-examples

Exit codes: 0 success, 1 usage or parse error, 2 unsupported family,
3 internal cap exceeded, 4 fixture failure.
"""

import argparse
import logging
import os
import sys

from abmod.core.errors import AbmodError, FixtureFailure, UsageError
from abmod.services.analysis_service import OPERATORS, AnalysisService
from abmod.storage.report_storage import dump_report

LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"

LOGGER = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_args(argv=None):
    common = _ArgumentParser(add_help=False)
    common.add_argument("--b-order", dest="b_order", type=int, help="truncation order N of E mod b^N")
    common.add_argument("--order", choices=("grevlex", "grlex"), help="monomial order")
    common.add_argument("--samples", help="comma separated parameter values, e.g. 0,1,1/2")
    common.add_argument("--out", help="write the JSON result to this path")
    common.add_argument("--mode", choices=("quick", "standard", "full"), help="analysis preset")
    common.add_argument("--verbose", action="store_true", help="log progress at INFO level")

    parser = _ArgumentParser(
        prog="abmod",
        description="Exact Brieskorn module and b^-1 nabla computations for mu-constant families.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "basis", "lattice-g"):
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument("family", help="family document")
    sub = commands.add_parser("matrix", parents=[common])
    sub.add_argument("family", help="family document")
    sub.add_argument("--op", choices=OPERATORS, required=True)
    sub = commands.add_parser("check-criterion", parents=[common])
    sub.add_argument("family", help="family document")
    sub.add_argument("--k", type=int, required=True)
    commands.add_parser("verify-paper-examples", parents=[common])
    return parser.parse_args(argv)


def _write(payload, out):
    if out is None:
        sys.stdout.write(payload)
        return
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(payload)
    LOGGER.info("Wrote %s", out)


def _fixture_table(result):
    rows = []
    for row in result["fixtures"]:
        line = f"{'PASS' if row['passed'] else 'FAIL'}  [{row['example']}] {row['name']}"
        if row.get("detail"):
            line += f"  ({row['detail']})"
        rows.append(line)
    passed = sum(row["passed"] for row in result["fixtures"])
    rows.append(f"{passed} of {len(result['fixtures'])} fixtures passed")
    return "\n".join(rows) + "\n"


def run(args, service):
    """Dispatch a parsed command; returns the process exit code."""
    if args.mode:
        service.set_analysis_mode(args.mode)

    if args.command == "verify-paper-examples":
        success, result = service.verify_paper_examples()
        if not success:
            raise AbmodError(result["error"])
        if args.out:
            _write(dump_report(result), args.out)
        else:
            sys.stdout.write(_fixture_table(result))
        return 0 if result["passed"] else FixtureFailure.exit_code

    overrides = {"b_order": args.b_order, "order": args.order, "samples": args.samples}
    spec = service.storage.load_family(args.family, defaults=service.config.settings())
    spec = spec.replace(**overrides)

    if args.command == "analyze":
        success, result = service.analyze(spec)
    elif args.command == "basis":
        success, result = service.basis(spec)
    elif args.command == "matrix":
        success, result = service.matrix(spec, args.op)
    elif args.command == "lattice-g":
        success, result = service.lattice_g(spec)
    else:
        success, result = service.check_criterion(spec, args.k)

    if not success:
        LOGGER.debug(result["trace"])
        sys.stderr.write(f"error: {result['error']}\n")
        return result["exit_code"]
    _write(dump_report(result), args.out)
    return 0


def main(argv=None):
    try:
        args = _parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return exc.exit_code

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        return run(args, AnalysisService(os.environ.get("ABMOD_DATA_DIR", "data")))
    except AbmodError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
