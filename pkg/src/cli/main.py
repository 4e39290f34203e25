"""fusionkit command line: reports to stdout, diagnostics to stderr."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Literal, Optional, Sequence

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src import config
from src.algebra.errors import FusionInputError, FusionKitError
from src.algebra.groups import BUILTIN_GROUPS, GroupTable, builtin_group
from src.algebra.reports import Report
from src.catalog.loader import GROUP_SUFFIX, load_group, load_ring
from src.catalog.models import CatalogEntry
from src.catalog.registry import Catalog
from src.pipeline import commands
from src.pipeline.graph import run_audit

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERRUPTED = 130


class RunConfig(BaseModel):
    """One parsed invocation; flags override environment defaults."""
    command: str
    inputs: list[str] = Field(default_factory=list)
    tolerance: float = Field(gt=0)
    seed: int = Field(ge=0, lt=2 ** 64)
    json_path: Optional[Path] = None
    dot_path: Optional[Path] = None
    output_format: Literal["json", "dot", "text"] = "json"
    n: int = commands.DEFAULT_INTERVALS
    samples: int = Field(default=100, ge=1)
    group: Optional[str] = None
    m: Optional[int] = None
    action: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None, help="Comparison tolerance (default: FUSIONKIT_TOLERANCE)")
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled checks (default: FUSIONKIT_SEED)")
    common.add_argument("--json", dest="json_path", help="Also write the JSON report to this file")
    common.add_argument(
        "--format",
        dest="output_format",
        choices=["json", "dot", "text"],
        default="json",
        help="Output format on stdout",
    )

    parser = argparse.ArgumentParser(
        prog="fusionkit",
        description="Fusion rings, modular data and Longo-Rehren index identities",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    for name, text in (
        ("validate", "Check the fusion-ring axioms"),
        ("dims", "Perron-Frobenius dimensions"),
        ("index", "Global, LR and graph indices"),
        ("double", "Compare the LR graph component with the full doubling"),
        ("modular", "Check S and T"),
        ("audit", "Run every check through the audit pipeline"),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.add_argument("ring", help="Ring file (*.ring.json) or catalog entry name")

    graph_parser = subparsers.add_parser("graph", parents=[common], help="Principal graph and DOT emission")
    graph_parser.add_argument("ring", help="Ring file (*.ring.json) or catalog entry name")
    graph_parser.add_argument("--dot", dest="dot_path", help="Write the principal graph in DOT to this file")

    multi_parser = subparsers.add_parser("multi", parents=[common], help="n-interval index ledger")
    multi_parser.add_argument("ring", help="Ring file (*.ring.json) or catalog entry name")
    multi_parser.add_argument("--n", type=int, default=commands.DEFAULT_INTERVALS, help="Number of intervals")

    dg_parser = subparsers.add_parser("dg", parents=[common], help="Drinfeld double of a finite group")
    dg_parser.add_argument("group", help=f"Group file (*{GROUP_SUFFIX}) or one of {', '.join(BUILTIN_GROUPS)}")

    oracle_parser = subparsers.add_parser("oracle", parents=[common], help="Crossed-product oracle")
    oracle_parser.add_argument("--group", required=True, help="Built-in group name or group file")
    oracle_parser.add_argument("--samples", type=int, default=100, help="Random samples per check")
    oracle_parser.add_argument("--m", type=int, default=None, help="Matrix size of the base algebra")

    catalog_parser = subparsers.add_parser("catalog", parents=[common], help="List or export catalog entries")
    catalog_parser.add_argument("action", choices=["list", "export"])
    catalog_parser.add_argument("name", nargs="?", help="Entry to export")

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    inputs = [value for value in (getattr(args, "ring", None), getattr(args, "name", None)) if value]
    if args.command == "dg":
        inputs = [args.group]
    return RunConfig(
        command=args.command,
        inputs=inputs,
        tolerance=args.tolerance if args.tolerance is not None else config.default_tolerance(),
        seed=args.seed if args.seed is not None else config.default_seed(),
        json_path=args.json_path,
        dot_path=getattr(args, "dot_path", None),
        output_format=args.output_format,
        n=getattr(args, "n", commands.DEFAULT_INTERVALS),
        samples=getattr(args, "samples", 100),
        group=args.group if args.command == "oracle" else None,
        m=getattr(args, "m", None),
        action=getattr(args, "action", None),
    )


def resolve_entry(reference: str, catalog: Catalog) -> CatalogEntry:
    """A ring file path, or a catalog entry name when no such file exists."""
    path = Path(reference)
    if path.suffix == ".json" or path.exists():
        return load_ring(path)
    return catalog.get(reference)


def resolve_group(reference: str) -> GroupTable:
    if reference.endswith(".json") or Path(reference).exists():
        return load_group(reference)
    return builtin_group(reference)


def _render_text(report: Report) -> str:
    status = "PASS" if report.passed else "FAIL"
    lines = [f"{report.command} {report.subject}: {status}"]
    for item in report.entries:
        mark = "ok" if item.passed else "FAILED"
        suffix = f" (residual {item.residual:.3g})" if item.residual is not None else ""
        lines.append(f"  {item.name}: {mark}{suffix}")
        if item.counterexample:
            lines.append(f"    counterexample: {', '.join(item.counterexample)}")
    return "\n".join(lines)


def emit(report: Report, run_config: RunConfig) -> int:
    """Print the report, write requested files, and map the outcome to an exit code."""
    text = report.model_dump_json(indent=2)
    if run_config.output_format == "text":
        print(_render_text(report))
    elif run_config.output_format == "dot" and "dot" in report.data:
        print(report.data["dot"], end="")
    else:
        print(text)

    if run_config.json_path is not None:
        run_config.json_path.write_text(text + "\n")
    if run_config.dot_path is not None and "dot" in report.data:
        run_config.dot_path.write_text(report.data["dot"])
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_entry(run_config: RunConfig, catalog: Catalog) -> int:
    entry = resolve_entry(run_config.inputs[0], catalog)
    tolerance = run_config.tolerance

    if run_config.command == "audit":
        return emit(run_audit(entry, tolerance), run_config)

    validation = commands.validate_report(entry, tolerance)
    if run_config.command == "validate" or not validation.passed:
        if not validation.passed and run_config.command != "validate":
            logger.warning("%s is not a valid fusion ring; skipping %s", entry.name, run_config.command)
        return emit(validation, run_config)

    if run_config.command == "multi":
        report = commands.multi_report(entry, tolerance, run_config.n)
    else:
        report = commands.ENTRY_COMMANDS[run_config.command](entry, tolerance)
    return emit(report, run_config)


def cmd_dg(run_config: RunConfig) -> int:
    reference = run_config.inputs[0]
    group = resolve_group(reference)
    return emit(commands.dg_report(group, Path(reference).name, run_config.tolerance), run_config)


def cmd_oracle(run_config: RunConfig) -> int:
    group = resolve_group(run_config.group)
    report = commands.oracle_report(group, run_config.group, run_config.m, run_config.samples, run_config.seed)
    return emit(report, run_config)


def cmd_catalog(run_config: RunConfig, catalog: Catalog) -> int:
    if run_config.action == "list":
        document = catalog.list_entries()
    else:
        if not run_config.inputs:
            raise FusionInputError("catalog export needs an entry name")
        document = catalog.export(run_config.inputs[0])
    text = json.dumps(document, indent=2)
    print(text)
    if run_config.json_path is not None:
        run_config.json_path.write_text(text + "\n")
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one subcommand and return its exit code.

    Returns:
        0 when every check passes, 1 when a check fails, 2 on input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_INPUT

    try:
        run_config = _run_config(args)
    except ValidationError as e:
        print(f"Error: invalid arguments: {e}", file=sys.stderr)
        return EXIT_INPUT

    catalog = Catalog(config.data_dir())
    try:
        if run_config.command == "dg":
            return cmd_dg(run_config)
        if run_config.command == "oracle":
            return cmd_oracle(run_config)
        if run_config.command == "catalog":
            return cmd_catalog(run_config, catalog)
        return cmd_entry(run_config, catalog)
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_INTERRUPTED
    except (FusionInputError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FusionKitError as e:
        logger.exception("Command %s failed", run_config.command)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED


def main() -> int:
    load_dotenv()
    config.configure_logging("WARNING")
    return run()


if __name__ == "__main__":
    sys.exit(main())
