"""Recompute a run's outcome from its transcript and check it against the embedded report."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

from .report import OUTCOME_FIELDS, outcome_from_ledger
from .transcript import make_record, read_transcript
from ..marketplace.anomalies import detect_anomalies
from ..marketplace.ledger import Ledger
from ..models.actions import parse_action
from ..models.domain import Role, RoundClock
from ..utils.exceptions import ReplayError

logger = logging.getLogger(__name__)


@dataclass
class ReplayResult:
    run_id: str
    expected: Dict[str, Any]
    actual: Dict[str, Any]
    differences: List[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.differences


def replay_records(records: List[Dict[str, Any]]) -> ReplayResult:
    """Re-apply every recorded action to a fresh ledger.

    Raises:
        ReplayError: the records do not form a complete transcript
    """
    if not records or records[0]["record_type"] != "config":
        raise ReplayError("Transcript must start with a config record")
    if records[-1]["record_type"] != "report":
        raise ReplayError("Transcript must end with a report record")

    config = records[0].get("config") or {}
    report = records[-1]
    run_id = records[0]["run_id"]
    try:
        rounds = int(config["rounds"])
        roles = {agent["id"]: Role(agent["role"]) for agent in config["agents"]}
    except (KeyError, TypeError, ValueError) as e:
        raise ReplayError(f"Config record is incomplete: {e}") from e

    ledger = Ledger()
    for agent in sorted(roles):
        ledger.register(agent, roles[agent])

    for record in records:
        if record["record_type"] != "action" or not record.get("applied", True):
            continue
        try:
            command = record["action"]["command"]
            clock = RoundClock(int(record["round"]), rounds)
            ledger.apply_action(record["agent"], parse_action(command), clock)
        except (KeyError, TypeError, ValueError) as e:
            raise ReplayError(f"Malformed action record in round {record.get('round')}: {e}") from e

    derived = [r for r in records if r["record_type"] == "message"]
    derived.extend(
        make_record("anomaly", run_id, event.round, event.agent, event.to_dict())
        for event in ledger.anomalies
    )
    derived.extend(
        make_record("settlement", run_id, s.round, s.seller, s.to_dict())
        for s in ledger.settlements
    )
    actual = outcome_from_ledger(ledger, detect_anomalies(derived))
    expected = {name: report.get(name) for name in OUTCOME_FIELDS}

    differences = [
        f"{name}: report has {expected[name]!r}, replay gives {actual[name]!r}"
        for name in OUTCOME_FIELDS
        if expected[name] != actual[name]
    ]
    recorded = [
        {"round": r["round"], "seller": r["seller"], "buyer": r["buyer"], "price": r["price"]}
        for r in records if r["record_type"] == "settlement"
    ]
    if recorded != actual["settlements"]:
        differences.append("settlement records do not match the replayed ledger")

    for difference in differences:
        logger.warning(f"Replay mismatch: {difference}")
    return ReplayResult(run_id, expected, actual, differences)


def replay_transcript(path: Union[str, Path]) -> ReplayResult:
    """Replay the transcript at ``path``."""
    return replay_records(read_transcript(path))
