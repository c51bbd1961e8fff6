"""Final run report: JSON document and human-readable summary."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..knowledge.explanations import ExplanationLog
from ..marketplace.anomalies import count_by_kind
from ..marketplace.ledger import AnomalyEvent, Ledger
from ..marketplace.winners import NO_WINNER, determine_winners
from ..messaging.bus import BusStats
from ..models.domain import format_amount

# Fields replay recomputes and compares against the embedded report
OUTCOME_FIELDS = ("winners", "totals", "settlements", "anomalies")


def outcome_from_ledger(ledger: Ledger, anomalies: Sequence[AnomalyEvent]) -> Dict[str, Any]:
    """The verifiable part of a report: winners, totals, settlements and anomalies."""
    return {
        "winners": determine_winners(ledger).to_dict(),
        "totals": {
            "revenue": format_amount(ledger.total_revenue()),
            "spent": format_amount(ledger.total_spent()),
            "sales": len(ledger.settlements),
        },
        "settlements": [
            {"round": s.round, **s.to_dict()} for s in ledger.settlements
        ],
        "anomalies": [event.to_report() for event in anomalies],
    }


def build_report(
    run_id: str,
    rounds: int,
    agents: Dict[str, str],
    ledger: Ledger,
    anomalies: Sequence[AnomalyEvent],
    explanations: ExplanationLog,
    bus_stats: BusStats,
    cycles: int,
    backend_errors: int = 0,
    aborted_cycles: int = 0,
    auth_failure: bool = False,
    consistency: Optional[List[str]] = None,
) -> Dict[str, Any]:
    """Assemble the report record.

    Args:
        run_id: Identifier of the run
        rounds: Number of rounds played
        agents: Agent id to role name
        ledger: Final ledger
        anomalies: Output of anomaly detection
        explanations: End-of-run explanations
        bus_stats: Message bus counters
        cycles: Number of cycle records written

    Returns:
        Report dictionary with a fixed key order
    """
    report: Dict[str, Any] = {
        "run_id": run_id,
        "rounds": rounds,
        "agents": {agent: agents[agent] for agent in sorted(agents)},
    }
    report.update(outcome_from_ledger(ledger, anomalies))
    report["anomaly_counts"] = count_by_kind(anomalies)
    report["explanations"] = explanations.to_dict()
    report["bus"] = bus_stats.to_dict()
    report["cycles"] = cycles
    report["errors"] = {
        "backend_errors": backend_errors,
        "aborted_cycles": aborted_cycles,
        "auth_failure": auth_failure,
    }
    report["consistency"] = list(consistency or [])
    return report


def render_text(report: Dict[str, Any]) -> str:
    """Human-readable summary of a report."""
    lines = []
    lines.append("=" * 60)
    lines.append(f"Simulation report {report['run_id']}")
    lines.append("=" * 60)
    lines.append(f"Rounds: {report['rounds']}   Agents: {len(report['agents'])}   Cycles: {report['cycles']}")
    lines.append("")

    winners = report["winners"]
    seller, buyer = winners["seller"], winners["buyer"]
    lines.append("Winners:")
    if seller["agent"] == NO_WINNER:
        lines.append(f"  Seller: {NO_WINNER}")
    else:
        lines.append(f"  Seller: {seller['agent']} (revenue {seller['revenue']})")
    if buyer["agent"] == NO_WINNER:
        lines.append(f"  Buyer: {NO_WINNER}")
    else:
        lines.append(f"  Buyer: {buyer['agent']} (paid {buyer['price']})")
    lines.append("")

    lines.append("Totals:")
    for agent, revenue in winners["seller_totals"].items():
        lines.append(f"  {agent} (seller): revenue {revenue}")
    for agent, price in winners["buyer_totals"].items():
        lines.append(f"  {agent} (buyer): {'paid ' + price if price else 'no purchase'}")
    lines.append("")

    if report["settlements"]:
        lines.append("Settlements:")
        for s in report["settlements"]:
            lines.append(f"  iteration {s['round'] + 1}: {s['seller']} -> {s['buyer']} at {s['price']}")
        lines.append("")

    lines.append(f"Anomalies: {len(report['anomalies'])}")
    for event in report["anomalies"]:
        lines.append(f"  iteration {event['round'] + 1} {event['agent']} {event['kind']}: {event['detail']}")
    lines.append("")

    if report["explanations"]:
        lines.append("Explanations:")
        for agent, explanation in report["explanations"].items():
            if explanation["empty"]:
                lines.append(f"  {agent}: (empty)")
                continue
            lines.append(f"  {agent}:")
            for text_line in explanation["text"].splitlines():
                lines.append(f"    {text_line}")
        lines.append("")

    bus = report["bus"]
    lines.append(
        f"Messages: {bus['accepted']} accepted, {bus['delivered']} delivered, "
        f"{bus['dropped']} dropped, {bus['rejected']} rejected"
    )
    errors = report["errors"]
    if errors["backend_errors"] or errors["aborted_cycles"]:
        lines.append(
            f"Backend errors: {errors['backend_errors']}   Aborted cycles: {errors['aborted_cycles']}"
        )
    for problem in report["consistency"]:
        lines.append(f"Ledger inconsistency: {problem}")

    return "\n".join(lines)


def write_report(output_dir: Union[str, Path], report: Dict[str, Any]) -> Dict[str, Path]:
    """Write ``report.json`` and ``report.txt``; return their paths."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / "report.json"
    text_path = output_dir / "report.txt"
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
        f.write("\n")
    with open(text_path, "w", encoding="utf-8") as f:
        f.write(render_text(report) + "\n")
    return {"json": json_path, "text": text_path}
