"""Transcripts, reports and replay."""

from .transcript import TranscriptWriter, make_record, read_transcript, iter_transcript
from .report import build_report, outcome_from_ledger, render_text, write_report
from .replay import ReplayResult, replay_records, replay_transcript

__all__ = [
    "TranscriptWriter",
    "make_record",
    "read_transcript",
    "iter_transcript",
    "build_report",
    "outcome_from_ledger",
    "render_text",
    "write_report",
    "ReplayResult",
    "replay_records",
    "replay_transcript",
]
