"""Book marketplace: ledger, winners and anomaly detection."""

from .ledger import (
    AnomalyEvent,
    AnomalyKind,
    BuyerState,
    Ledger,
    Purchase,
    Sale,
    SellerState,
    Settlement,
)
from .winners import NO_WINNER, WinnerReport, determine_winners
from .anomalies import count_by_kind, detect_anomalies
from .scenario import MarketplaceScenario

__all__ = [
    "AnomalyEvent",
    "AnomalyKind",
    "BuyerState",
    "Ledger",
    "Purchase",
    "Sale",
    "SellerState",
    "Settlement",
    "NO_WINNER",
    "WinnerReport",
    "determine_winners",
    "count_by_kind",
    "detect_anomalies",
    "MarketplaceScenario",
]
