"""Comparison of outcomes across the runs of a batch."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .processor import BatchResults
from ..marketplace.winners import NO_WINNER


@dataclass
class PriceStatistics:
    """Summary statistics of settlement prices."""
    values: List[float]
    mean: float = 0.0
    median: float = 0.0
    std_dev: float = 0.0
    min_value: float = 0.0
    max_value: float = 0.0

    def __post_init__(self) -> None:
        if self.values:
            array = np.asarray(self.values, dtype=float)
            self.mean = float(np.mean(array))
            self.median = float(np.median(array))
            self.std_dev = float(np.std(array, ddof=1)) if len(array) > 1 else 0.0
            self.min_value = float(np.min(array))
            self.max_value = float(np.max(array))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": len(self.values),
            "mean": round(self.mean, 2),
            "median": round(self.median, 2),
            "std_dev": round(self.std_dev, 2),
            "min": round(self.min_value, 2),
            "max": round(self.max_value, 2),
        }


@dataclass
class BatchSummary:
    """What happened across a batch of runs."""
    total_runs: int
    runs_with_sale: int = 0
    prices: Optional[PriceStatistics] = None
    seller_wins: Dict[str, int] = field(default_factory=dict)
    buyer_wins: Dict[str, int] = field(default_factory=dict)
    anomaly_counts: Dict[str, int] = field(default_factory=dict)
    runs_with_anomalies: int = 0
    failed_runs: int = 0

    @property
    def sale_rate(self) -> float:
        if self.total_runs == 0:
            return 0.0
        return self.runs_with_sale / self.total_runs


class BatchComparator:
    """Aggregates the reports of a batch into one summary."""

    def compare_batch_results(self, batch_results: BatchResults) -> BatchSummary:
        """Summarize sale rate, settlement prices, winners and anomalies.

        Args:
            batch_results: Results from BatchRunner.run_many

        Returns:
            BatchSummary over the successful runs
        """
        reports = [result.report for result in batch_results.successful_results]
        summary = BatchSummary(total_runs=len(reports), failed_runs=len(batch_results.failed_runs))
        if not reports:
            return summary

        prices = []
        seller_wins: Counter = Counter()
        buyer_wins: Counter = Counter()
        anomaly_counts: Counter = Counter()
        for report in reports:
            if report["settlements"]:
                summary.runs_with_sale += 1
            prices.extend(float(s["price"]) for s in report["settlements"])
            seller_wins[report["winners"]["seller"]["agent"]] += 1
            buyer_wins[report["winners"]["buyer"]["agent"]] += 1
            anomaly_counts.update(report["anomaly_counts"])
            if report["anomalies"]:
                summary.runs_with_anomalies += 1

        summary.prices = PriceStatistics(prices)
        summary.seller_wins = dict(sorted(seller_wins.items()))
        summary.buyer_wins = dict(sorted(buyer_wins.items()))
        summary.anomaly_counts = dict(sorted(anomaly_counts.items()))
        return summary

    def generate_comparison_report(self, summary: BatchSummary) -> str:
        """Text rendering of a BatchSummary."""
        lines = []
        lines.append("=" * 60)
        lines.append("Batch comparison")
        lines.append("=" * 60)
        lines.append(f"Runs: {summary.total_runs} (failed: {summary.failed_runs})")
        lines.append(f"Runs with a sale: {summary.runs_with_sale} ({summary.sale_rate * 100:.1f}%)")
        lines.append("")

        if summary.prices and summary.prices.values:
            p = summary.prices
            lines.append("Settlement prices:")
            lines.append(f"  mean {p.mean:.2f}, median {p.median:.2f}, std {p.std_dev:.2f}")
            lines.append(f"  range {p.min_value:.2f} - {p.max_value:.2f} over {len(p.values)} sales")
            lines.append("")

        for title, wins in (("Seller wins", summary.seller_wins), ("Buyer wins", summary.buyer_wins)):
            if wins:
                lines.append(f"{title}:")
                for agent, count in wins.items():
                    label = agent if agent != NO_WINNER else "(no winner)"
                    lines.append(f"  {label}: {count}")
                lines.append("")

        lines.append(f"Runs with anomalies: {summary.runs_with_anomalies}")
        for kind, count in summary.anomaly_counts.items():
            lines.append(f"  {kind}: {count}")

        return "\n".join(lines)

    def export_comparison_data(self, summary: BatchSummary) -> Dict[str, Any]:
        return {
            "runs": {
                "total": summary.total_runs,
                "failed": summary.failed_runs,
                "with_sale": summary.runs_with_sale,
                "sale_rate": round(summary.sale_rate, 4),
                "with_anomalies": summary.runs_with_anomalies,
            },
            "prices": summary.prices.to_dict() if summary.prices else None,
            "seller_wins": summary.seller_wins,
            "buyer_wins": summary.buyer_wins,
            "anomaly_counts": summary.anomaly_counts,
        }
