"""The book marketplace scenario."""

from typing import Any, Dict, List

from .ledger import ROLE_VERBS, Ledger
from .winners import determine_winners
from ..core.base_scenario import BaseScenario
from ..models.actions import ActionCommand, Verb
from ..models.domain import AgentId, Role, RoundClock, format_amount
from ..models.events import ScenarioEvent


class MarketplaceScenario(BaseScenario):
    """Sellers of identical books and buyers after a single copy, settled by a Ledger."""

    def __init__(self) -> None:
        super().__init__("marketplace")
        self.ledger = Ledger()

    def register_agent(self, agent: AgentId, role: Role) -> None:
        super().register_agent(agent, role)
        self.ledger.register(agent, role)

    def describe_state(self, agent: AgentId) -> str:
        role = self.role_of(agent)
        if role is Role.SELLER:
            state = self.ledger.sellers[agent]
            price = format_amount(state.listed_price) if state.listed_price is not None else "not set"
            offers = [
                f"{buyer} {format_amount(b.outstanding_offers[agent])}"
                for buyer, b in sorted(self.ledger.buyers.items())
                if agent in b.outstanding_offers and not b.has_purchase
            ]
            return "\n".join([
                "Role: seller",
                f"Your price: {price}",
                f"Books sold: {len(state.sales)} (revenue {format_amount(state.revenue)})",
                "Standing offers to you: " + (", ".join(offers) or "none"),
            ])

        buyer = self.ledger.buyers[agent]
        if buyer.purchase:
            bought = (
                f"bought from {buyer.purchase.seller} at "
                f"{format_amount(buyer.purchase.price)} in iteration {buyer.purchase.round + 1}"
            )
        else:
            bought = "nothing yet"
        offers = [f"{s} {format_amount(a)}" for s, a in sorted(buyer.outstanding_offers.items())]
        return "\n".join([
            "Role: buyer",
            f"Purchase: {bought}",
            "Your standing offers: " + (", ".join(offers) or "none"),
        ])

    def apply_action(
        self, agent: AgentId, action: ActionCommand, clock: RoundClock
    ) -> List[ScenarioEvent]:
        return self.ledger.apply_action(agent, action, clock)

    def allowed_verbs(self, role: Role) -> List[Verb]:
        return list(ROLE_VERBS[role])

    def check_consistency(self) -> List[str]:
        return self.ledger.check_consistency()

    def summary(self) -> Dict[str, Any]:
        return {
            "winners": determine_winners(self.ledger).to_dict(),
            "ledger": self.ledger.to_dict(),
            "settlements": [
                dict(s.to_dict(), round=s.round) for s in self.ledger.settlements
            ],
        }
