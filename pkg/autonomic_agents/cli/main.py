"""Main CLI application for autonomic agent simulations."""

import argparse
import json
import logging
import platform
import sys
from pathlib import Path
from typing import List, Optional

from ..batch.comparator import BatchComparator
from ..batch.processor import BatchRunner
from ..config.manager import ConfigManager
from ..config.settings import SimConfig
from ..core.prompts import ROLE_TEMPLATES, grammar_for
from ..core.simulation import (
    EXIT_AUTH_ERROR,
    EXIT_CONFIG_ERROR,
    EXIT_FAILURE,
    EXIT_OK,
    LOG_FORMAT,
    run_simulation,
)
from ..llm.live import resolve_credentials
from ..reports.replay import replay_transcript
from ..utils.exceptions import AuthError, ConfigurationError, ConfigValidationError, ReplayError

_console_handler: Optional[logging.Handler] = None


def create_cli() -> argparse.ArgumentParser:
    """Create the command-line interface parser."""
    parser = argparse.ArgumentParser(
        prog="autonomic-agents",
        description="Autonomic Agents - LLM agents in a MAPE-K loop, trading in a book marketplace",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Run a scenario
  aga run autonomic_agents/scenarios/final_sale.json

  # Check a configuration without running it
  aga validate my_config.yaml

  # Recompute the outcome of a run and compare it with its report
  aga replay runs/latest/transcript.jsonl

  # Ten runs under seeds 0..9 with a comparison summary
  aga batch my_config.json --runs 10

Environment:
  LLM_API_KEY, LLM_API_BASE   credentials for the live backend
  AUTONOMIC_<FIELD>           config overrides, e.g. AUTONOMIC_ROUNDS=3
        """,
    )

    # Global options
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable debug logging",
    )
    parser.add_argument(
        "--quiet", "-q",
        action="store_true",
        help="Suppress progress output",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    run_parser = subparsers.add_parser("run", help="Run a simulation")
    run_parser.add_argument("config", help="Configuration file (JSON or YAML)")
    run_parser.add_argument("--output-dir", "-o", help="Override the output directory")
    run_parser.add_argument("--seed", type=int, help="Override the seed")
    run_parser.add_argument("--rounds", type=int, help="Override the number of rounds")
    run_parser.add_argument("--parallel", action="store_true", help="Run agent model calls in parallel")

    replay_parser = subparsers.add_parser(
        "replay",
        help="Recompute ledger, winners and anomalies from a transcript",
    )
    replay_parser.add_argument("transcript", help="Transcript file (transcript.jsonl)")

    validate_parser = subparsers.add_parser("validate", help="Validate a configuration file")
    validate_parser.add_argument("config", help="Configuration file (JSON or YAML)")

    batch_parser = subparsers.add_parser("batch", help="Run a configuration under several seeds")
    batch_parser.add_argument("config", help="Configuration file (JSON or YAML)")
    batch_parser.add_argument("--runs", "-n", type=int, default=5, help="Number of runs")
    batch_parser.add_argument("--output-dir", "-o", help="Override the output directory")
    batch_parser.add_argument("--workers", type=int, default=1, help="Runs executed concurrently")

    subparsers.add_parser("info", help="Show version, platform and the action grammar")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_cli()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_FAILURE

    _setup_console_logging(args.verbose)

    try:
        if args.command == "run":
            return handle_run_command(args)
        elif args.command == "replay":
            return handle_replay_command(args)
        elif args.command == "validate":
            return handle_validate_command(args)
        elif args.command == "batch":
            return handle_batch_command(args)
        elif args.command == "info":
            return handle_info_command(args)
        else:
            print(f"Unknown command: {args.command}", file=sys.stderr)
            return EXIT_FAILURE

    except ConfigurationError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except AuthError as e:
        print(f"Authentication error: {e}", file=sys.stderr)
        return EXIT_AUTH_ERROR
    except Exception as e:
        if args.verbose:
            import traceback
            traceback.print_exc()
        else:
            print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def _setup_console_logging(verbose: bool) -> None:
    global _console_handler
    package_logger = logging.getLogger("autonomic_agents")
    if _console_handler is not None:
        package_logger.removeHandler(_console_handler)
    _console_handler = logging.StreamHandler(sys.stderr)
    _console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    _console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger.addHandler(_console_handler)


def _load(args: argparse.Namespace) -> SimConfig:
    config = ConfigManager(args.config).load_config()
    if getattr(args, "output_dir", None):
        config.output_dir = args.output_dir
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "rounds", None) is not None:
        config.rounds = args.rounds
    if getattr(args, "parallel", False):
        config.parallel = True
    if args.verbose:
        config.log_level = "DEBUG"
    errors = config.validate()
    if errors:
        raise ConfigValidationError("Invalid command-line overrides", errors)
    return config


def _check_credentials(config: SimConfig) -> None:
    if config.backend.kind == "live":
        for agent in config.agents:
            resolve_credentials(agent.api_key, agent.api_base)


def _progress(args: argparse.Namespace):
    if args.quiet:
        return None
    return lambda message: print(message, file=sys.stderr)


def handle_run_command(args: argparse.Namespace) -> int:
    """Handle the run command."""
    config = _load(args)
    _check_credentials(config)

    result = run_simulation(config, progress=_progress(args))

    if not args.quiet:
        print(f"Transcript: {result.transcript_path}", file=sys.stderr)
        print(f"Report: {result.report_path}", file=sys.stderr)
    report_text = (result.output_dir / "report.txt").read_text(encoding="utf-8")
    print(report_text, end="")

    if result.exit_status == EXIT_AUTH_ERROR:
        print("Authentication failed during the run", file=sys.stderr)
    return result.exit_status


def handle_replay_command(args: argparse.Namespace) -> int:
    """Handle the replay command."""
    try:
        result = replay_transcript(args.transcript)
    except ReplayError as e:
        print(f"Replay failed: {e}", file=sys.stderr)
        return EXIT_FAILURE

    if result.matches:
        print(f"Replay of {result.run_id} matches the embedded report")
        return EXIT_OK

    print(f"Replay of {result.run_id} does NOT match the embedded report:")
    for difference in result.differences:
        print(f"  - {difference}")
    return EXIT_FAILURE


def handle_validate_command(args: argparse.Namespace) -> int:
    """Handle the validate command."""
    config = ConfigManager(args.config).load_config()
    sellers = sum(1 for a in config.agents if a.role == "seller")
    buyers = len(config.agents) - sellers
    print(
        f"Configuration valid: {sellers} sellers, {buyers} buyers, {config.rounds} rounds, "
        f"{config.backend.kind} backend"
    )
    if not args.quiet:
        print(json.dumps(config.to_dict(), indent=2, ensure_ascii=False))
    return EXIT_OK


def handle_batch_command(args: argparse.Namespace) -> int:
    """Handle the batch command."""
    config = _load(args)
    _check_credentials(config)

    runner = BatchRunner(max_workers=args.workers)
    if not args.quiet:
        runner.set_progress_callback(runner.create_progress_monitor())
        print(f"Running {args.runs} simulations...", file=sys.stderr)

    batch_results = runner.run_many(config, args.runs)

    comparator = BatchComparator()
    summary = comparator.compare_batch_results(batch_results)
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    summary_text = comparator.generate_comparison_report(summary)
    with open(output_dir / "batch_summary.txt", "w", encoding="utf-8") as f:
        f.write(summary_text + "\n")
    with open(output_dir / "batch_summary.json", "w", encoding="utf-8") as f:
        json.dump(comparator.export_comparison_data(summary), f, indent=2, ensure_ascii=False)

    print(summary_text)
    if not args.quiet:
        print(f"Batch results saved to {output_dir}", file=sys.stderr)

    if batch_results.failed_runs:
        if all(f["error_type"] == "AuthError" for f in batch_results.failed_runs):
            return EXIT_AUTH_ERROR
        return EXIT_FAILURE
    if any(r.exit_status == EXIT_AUTH_ERROR for r in batch_results.successful_results):
        return EXIT_AUTH_ERROR
    return EXIT_OK


def handle_info_command(args: argparse.Namespace) -> int:
    """Handle the info command."""
    from .. import __version__

    info = {
        "autonomic_agents": {
            "version": __version__,
            "description": "LLM-driven autonomic agents in a book marketplace",
        },
        "system": {
            "platform": platform.platform(),
            "python_version": platform.python_version(),
            "architecture": platform.architecture()[0],
        },
        "templates": sorted(ROLE_TEMPLATES),
        "backends": ["scripted", "live"],
        "action_grammar": grammar_for().splitlines()[1:-1],
    }

    print(json.dumps(info, indent=2, ensure_ascii=False))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
