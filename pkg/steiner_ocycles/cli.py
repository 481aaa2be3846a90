"""
Command line interface.

    steiner-ocycles generate 37 --route af --out bundles/37
    steiner-ocycles generate --sweep 7..99 --route any --out bundles
    steiner-ocycles verify bundles/37/sts.txt bundles/37/ocycle.txt --af
    steiner-ocycles convert bundles/37/ocycle.txt --compress --out v37.ucycle
    steiner-ocycles convert v37.ucycle --decompress bundles/37/sts.txt

Exit status: 0 when every check is clean, 1 on a validation defect, 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import get_settings
from .errors import (
    ConfigurationError,
    CycleError,
    DesignError,
    FormatError,
    InadmissibleOrderError,
    ListingParseError,
    OcycleError,
)
from .orchestrator import ROUTES, OcycleOrchestrator, parse_factors, parse_sweep
from .reports import BundleSummary, VerificationSummary
from .utils.log import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DEFECT = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steiner-ocycles",
        description="Build and check Steiner triple systems with 1-overlap cycles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--data-dir", type=Path, default=None, help="base-case asset directory")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    parser.add_argument(
        "--format", dest="output_format", choices=("text", "json"), default="text", help="report format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build a design and its overlap cycle")
    gen.add_argument("order", type=int, nargs="?", help="order n of the STS(n)")
    gen.add_argument("--route", choices=ROUTES, default="any")
    gen.add_argument("--out", type=Path, default=Path("."), help="bundle directory")
    gen.add_argument("--sweep", default=None, metavar="A..B", help="build every order in [A, B]")
    gen.add_argument("--factors", default=None, metavar="U,W", help="factors for the product route")

    ver = sub.add_parser("verify", help="check an STS file and, optionally, a cycle file")
    ver.add_argument("sts_path", type=Path)
    ver.add_argument("ocycle_path", type=Path, nargs="?", default=None)
    ver.add_argument("--af", action="store_true", help="also check the design is automorphism free")
    ver.add_argument("--budget", type=int, default=None, help="node budget for --af")

    conv = sub.add_parser("convert", help="compress or decompress an overlap cycle")
    conv.add_argument("in_path", type=Path)
    mode = conv.add_mutually_exclusive_group(required=True)
    mode.add_argument("--compress", action="store_true", help="OCYCLE -> UCYCLE2")
    mode.add_argument("--decompress", type=Path, metavar="STS", help="UCYCLE2 -> OCYCLE using this STS file")
    conv.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    return parser


def _print_bundle(summary: BundleSummary, fmt: str) -> None:
    if fmt == "json":
        print(summary.model_dump_json())
    else:
        print(f"✅ STS({summary.n}) b={summary.b} route={summary.route} {summary.tree} -> {summary.out}")


def _print_verification(summary: VerificationSummary, fmt: str) -> None:
    if fmt == "json":
        print(summary.to_json())
        return
    reports = [summary.sts] + ([summary.ocycle] if summary.ocycle is not None else [])
    for report in reports:
        if report.ok:
            print(f"✅ {report.subject}: clean")
        else:
            print(f"❌ {report.subject}: {report.defect_total} defect(s)")
            for defect in report.defects:
                print(f"   • {defect}")
    if summary.automorphisms is not None:
        auts = summary.automorphisms
        if summary.af is True:
            print(f"✅ AF: automorphism group is trivial ({auts.nodes} nodes)")
        elif summary.af is False:
            print(f"❌ not AF: {auts.order_of_group}+ automorphisms, e.g. {auts.sample_nonidentity}")
        else:
            print(f"⚠️  AF inconclusive: budget exhausted after {auts.nodes} nodes")


def cmd_generate(args: argparse.Namespace, orchestrator: OcycleOrchestrator) -> int:
    factors = parse_factors(args.factors) if args.factors else None
    if args.sweep:
        if args.order is not None:
            raise FormatError("give either an order or --sweep, not both")
        low, high = parse_sweep(args.sweep)
        summaries = orchestrator.sweep(low, high, args.route, args.out)
        for summary in summaries:
            _print_bundle(summary, args.output_format)
        if not summaries:
            print(f"⚠️  no order in {low}..{high} fits route {args.route}")
        return EXIT_OK
    if args.order is None:
        raise FormatError("generate needs an order or --sweep A..B")
    summary = orchestrator.generate(args.order, args.route, args.out, factors)
    _print_bundle(summary, args.output_format)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, orchestrator: OcycleOrchestrator) -> int:
    summary = orchestrator.verify(args.sts_path, args.ocycle_path, args.af, args.budget)
    _print_verification(summary, args.output_format)
    return EXIT_OK if summary.ok else EXIT_DEFECT


def cmd_convert(args: argparse.Namespace, orchestrator: OcycleOrchestrator) -> int:
    if args.compress:
        mode, inputs = "compress", [args.in_path]
        text = orchestrator.compress_file(args.in_path)
    else:
        mode, inputs = "decompress", [args.in_path, args.decompress]
        text = orchestrator.decompress_file(args.in_path, args.decompress)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK

    manifest = orchestrator.write_conversion(text, args.out, mode, inputs)
    if args.output_format == "json":
        print(manifest.model_dump_json())
    else:
        print(f"✅ wrote {args.out} ({manifest.outputs[0].sha256[:12]})")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "convert": cmd_convert}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        settings = get_settings(
            data_dir=args.data_dir,
            log_level=args.log_level,
            af_budget=getattr(args, "budget", None),
        )
    except ConfigurationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings.log_level, settings.log_format)

    try:
        return COMMANDS[args.command](args, OcycleOrchestrator(settings))
    except (InadmissibleOrderError, FormatError, ListingParseError, ConfigurationError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DesignError, CycleError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_DEFECT
    except OcycleError as e:
        logger.exception("unexpected failure")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_DEFECT


if __name__ == "__main__":
    raise SystemExit(main())
