"""Winner determination: the highest-earning seller and the cheapest-buying buyer."""

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Dict, Optional

from .ledger import Ledger
from ..models.domain import AgentId, format_amount

NO_WINNER = "no winner"


@dataclass(frozen=True)
class WinnerReport:
    seller: Optional[AgentId]
    seller_revenue: Optional[Decimal]
    buyer: Optional[AgentId]
    buyer_price: Optional[Decimal]
    seller_totals: Dict[AgentId, Decimal] = field(default_factory=dict)
    buyer_totals: Dict[AgentId, Optional[Decimal]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seller": {
                "agent": self.seller or NO_WINNER,
                "revenue": _fmt(self.seller_revenue),
            },
            "buyer": {
                "agent": self.buyer or NO_WINNER,
                "price": _fmt(self.buyer_price),
            },
            "seller_totals": {a: format_amount(v) for a, v in sorted(self.seller_totals.items())},
            "buyer_totals": {a: _fmt(v) for a, v in sorted(self.buyer_totals.items())},
        }


def _fmt(amount: Optional[Decimal]) -> Optional[str]:
    return format_amount(amount) if amount is not None else None


def determine_winners(ledger: Ledger) -> WinnerReport:
    """Pick the winning seller (most revenue, at least one sale) and buyer (lowest price paid).

    Ties go to the lexicographically smallest agent id. A category with no eligible agent
    has no winner.
    """
    seller_totals = {agent: state.revenue for agent, state in ledger.sellers.items()}
    buyer_totals = {
        agent: state.purchase.price if state.purchase else None
        for agent, state in ledger.buyers.items()
    }

    eligible_sellers = [(a, s.revenue) for a, s in ledger.sellers.items() if s.sales]
    seller = seller_revenue = None
    if eligible_sellers:
        # max revenue first, then smallest id
        seller, seller_revenue = min(eligible_sellers, key=lambda item: (-item[1], item[0]))

    eligible_buyers = [(a, p) for a, p in buyer_totals.items() if p is not None]
    buyer = buyer_price = None
    if eligible_buyers:
        buyer, buyer_price = min(eligible_buyers, key=lambda item: (item[1], item[0]))

    return WinnerReport(
        seller=seller,
        seller_revenue=seller_revenue,
        buyer=buyer,
        buyer_price=buyer_price,
        seller_totals=seller_totals,
        buyer_totals=buyer_totals,
    )

