"""Anomaly detection over transcript records."""

import logging
from typing import Any, Dict, Iterable, List

from .ledger import AnomalyEvent, AnomalyKind

logger = logging.getLogger(__name__)


def detect_anomalies(records: Iterable[Dict[str, Any]]) -> List[AnomalyEvent]:
    """Collect every anomaly evidenced by a transcript.

    SelfMessage events are re-derived from accepted bus messages whose sender is also the
    receiver. Anomalies recorded when actions were applied are taken over as they are, and
    settlement records are cross-checked for a seller selling to itself, which the ledger
    should never have allowed.

    Args:
        records: Transcript records (dicts) in any order

    Returns:
        Deduplicated anomalies sorted by round, agent, kind and detail
    """
    found = set()
    for record in records:
        record_type = record.get("record_type")
        if record_type == "message":
            if record.get("status") == "accepted" and record.get("sender") == record.get("receiver"):
                found.add(AnomalyEvent(
                    AnomalyKind.SELF_MESSAGE,
                    record["sender"],
                    int(record["round_sent"]),
                    f"{record['sender']} sent itself a {record['performative']} message: {record['body']}",
                ))
        elif record_type == "anomaly":
            found.add(AnomalyEvent(
                AnomalyKind(record["kind"]),
                record["agent"],
                int(record["round"]),
                record["detail"],
            ))
        elif record_type == "settlement":
            if record.get("seller") == record.get("buyer"):
                logger.error(f"Settlement where {record['seller']} sold to itself")
                found.add(AnomalyEvent(
                    AnomalyKind.SELF_SALE,
                    record["seller"],
                    int(record["round"]),
                    f"settled sale of {record['seller']} to itself at {record['price']}",
                ))
    return sorted(found, key=lambda event: event.sort_key)


def count_by_kind(anomalies: Iterable[AnomalyEvent]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for event in anomalies:
        counts[event.kind.value] = counts.get(event.kind.value, 0) + 1
    return dict(sorted(counts.items()))
