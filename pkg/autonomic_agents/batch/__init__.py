"""Multi-run executions and their comparison."""

from .processor import BatchProgress, BatchResults, BatchRunner
from .comparator import BatchComparator, BatchSummary, PriceStatistics

__all__ = [
    "BatchProgress",
    "BatchResults",
    "BatchRunner",
    "BatchComparator",
    "BatchSummary",
    "PriceStatistics",
]
