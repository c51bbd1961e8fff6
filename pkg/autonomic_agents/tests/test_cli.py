"""Tests for command-line interface."""

import importlib
import json
import os
import tempfile
from pathlib import Path
from unittest.mock import Mock, patch

import pytest

from .helpers import SCENARIOS_DIR, read_lines
from ..cli.main import create_cli, main

# the package re-exports main(), which hides the submodule of the same name
cli_module = importlib.import_module("..cli.main", __package__)


class TestCLI:
    """Test command-line interface functionality."""

    def test_create_cli(self):
        parser = create_cli()
        assert parser.prog == "autonomic-agents"
        subparsers_actions = [
            action for action in parser._actions
            if hasattr(action, "choices") and action.choices is not None
        ]
        subcommands = subparsers_actions[0].choices
        for name in ("run", "replay", "validate", "batch", "info"):
            assert name in subcommands

    def test_main_no_command(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().out

    def test_run_success(self, capsys):
        with tempfile.TemporaryDirectory() as tmp:
            status = main(["-q", "run", str(SCENARIOS_DIR / "final_sale.json"), "--output-dir", tmp])
            assert status == 0
            assert (Path(tmp) / "transcript.jsonl").exists()
        out = capsys.readouterr().out
        assert "Seller: Agent1 (revenue 18.00)" in out

    def test_run_overrides(self):
        with tempfile.TemporaryDirectory() as tmp:
            status = main([
                "-q", "run", str(SCENARIOS_DIR / "final_sale.json"),
                "-o", tmp, "--rounds", "2", "--seed", "4", "--parallel",
            ])
            records = read_lines(Path(tmp) / "transcript.jsonl")
        assert status == 0
        assert records[0]["config"]["rounds"] == 2
        assert records[0]["config"]["seed"] == 4

    def test_invalid_override_is_config_error(self, capsys):
        status = main(["-q", "run", str(SCENARIOS_DIR / "final_sale.json"), "--rounds", "0"])
        assert status == 2
        assert "Configuration error" in capsys.readouterr().err

    def test_missing_config_file(self):
        assert main(["validate", "/nonexistent/config.json"]) == 2

    def test_validate(self, capsys):
        assert main(["validate", str(SCENARIOS_DIR / "final_sale.json")]) == 0
        out = capsys.readouterr().out
        assert "Configuration valid: 3 sellers, 2 buyers, 5 rounds, scripted backend" in out

    @patch.dict(os.environ, {}, clear=True)
    def test_live_without_key_is_auth_error(self, capsys):
        with tempfile.TemporaryDirectory() as tmp:
            status = main(["-q", "run", str(SCENARIOS_DIR / "live_smoke.json"), "-o", tmp])
        assert status == 3
        assert "Authentication error" in capsys.readouterr().err

    def test_replay(self, capsys):
        with tempfile.TemporaryDirectory() as tmp:
            main(["-q", "run", str(SCENARIOS_DIR / "final_sale.json"), "-o", tmp])
            transcript = Path(tmp) / "transcript.jsonl"
            assert main(["replay", str(transcript)]) == 0

            records = read_lines(transcript)
            records[-1]["totals"]["sales"] = 2
            with open(transcript, "w", encoding="utf-8") as f:
                for record in records:
                    f.write(json.dumps(record) + "\n")
            assert main(["replay", str(transcript)]) == 1
        assert "does NOT match" in capsys.readouterr().out

    def test_replay_unreadable(self):
        assert main(["replay", "/nonexistent/transcript.jsonl"]) == 1

    def test_batch(self, capsys):
        with tempfile.TemporaryDirectory() as tmp:
            status = main(["-q", "batch", str(SCENARIOS_DIR / "price_war.yaml"), "-n", "3", "-o", tmp])
            assert status == 0
            assert (Path(tmp) / "batch_summary.json").exists()
            assert (Path(tmp) / "run_2" / "report.json").exists()
        assert "Batch comparison" in capsys.readouterr().out

    def test_info(self, capsys):
        assert main(["info"]) == 0
        info = json.loads(capsys.readouterr().out)
        assert info["autonomic_agents"]["version"]
        assert "CONFIRM_SALE <buyer> <amount>" in info["action_grammar"]
        assert "seller_open" in info["templates"]

    @patch.object(cli_module, "run_simulation")
    def test_unexpected_error_is_failure(self, mock_run, capsys):
        mock_run.side_effect = RuntimeError("disk full")
        assert main(["-q", "run", str(SCENARIOS_DIR / "final_sale.json"), "-o", "unused"]) == 1
        assert "disk full" in capsys.readouterr().err

    @patch.object(cli_module, "run_simulation")
    def test_run_reports_auth_status(self, mock_run):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / "report.txt").write_text("report\n", encoding="utf-8")
            mock_run.return_value = Mock(
                exit_status=3,
                output_dir=Path(tmp),
                transcript_path=Path(tmp) / "transcript.jsonl",
                report_path=Path(tmp) / "report.json",
            )
            assert main(["-q", "run", str(SCENARIOS_DIR / "final_sale.json"), "-o", tmp]) == 3
