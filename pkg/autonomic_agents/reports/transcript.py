"""JSONL transcripts: one record per line, fixed key order."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

from ..utils.exceptions import ReplayError

RECORD_TYPES = (
    "config",
    "cycle",
    "action",
    "message",
    "settlement",
    "anomaly",
    "explanation",
    "report",
)


def make_record(
    record_type: str,
    run_id: str,
    round: int,
    agent: Optional[str],
    payload: Dict[str, Any],
) -> Dict[str, Any]:
    """Envelope first (record_type, run_id, round, agent), payload after, in insertion order."""
    if record_type not in RECORD_TYPES:
        raise ValueError(f"Unknown record type: {record_type}")
    record: Dict[str, Any] = {
        "record_type": record_type,
        "run_id": run_id,
        "round": round,
        "agent": agent,
    }
    for key, value in payload.items():
        if key not in record:
            record[key] = value
    return record


def dumps(record: Dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(", ", ": "))


class TranscriptWriter:
    """Appends records to ``transcript.jsonl`` and keeps them in memory for the report.

    Records must arrive in nondecreasing round order.
    """

    def __init__(self, path: Union[str, Path], run_id: str):
        self.path = Path(path)
        self.run_id = run_id
        self.records: List[Dict[str, Any]] = []
        self._last_round = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", encoding="utf-8", newline="\n")
        self.logger = logging.getLogger(__name__)

    def write(
        self,
        record_type: str,
        round: int,
        agent: Optional[str],
        payload: Dict[str, Any],
    ) -> Dict[str, Any]:
        if round < self._last_round:
            raise ValueError(f"Transcript round went backwards: {round} after {self._last_round}")
        record = make_record(record_type, self.run_id, round, agent, payload)
        self._file.write(dumps(record) + "\n")
        self.records.append(record)
        self._last_round = round
        return record

    def count(self, record_type: str) -> int:
        return sum(1 for r in self.records if r["record_type"] == record_type)

    def close(self) -> None:
        if not self._file.closed:
            self._file.close()
            self.logger.debug(f"Transcript closed: {self.path} ({len(self.records)} records)")

    def __enter__(self) -> "TranscriptWriter":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


def iter_transcript(path: Union[str, Path]) -> Iterator[Dict[str, Any]]:
    """Yield the records of a transcript file.

    Raises:
        ReplayError: unreadable file or a line that is not a JSON record
    """
    path = Path(path)
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as e:
        raise ReplayError(f"Cannot read transcript {path}: {e}") from e
    with handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ReplayError(f"{path}:{number}: invalid JSON: {e}") from e
            if not isinstance(record, dict) or record.get("record_type") not in RECORD_TYPES:
                raise ReplayError(f"{path}:{number}: not a transcript record")
            yield record


def read_transcript(path: Union[str, Path]) -> List[Dict[str, Any]]:
    return list(iter_transcript(path))
