"""Settlement ledger for the book marketplace.

Sellers hold unlimited identical copies and may list any price; each buyer may buy
exactly one copy. A sale only settles against a standing offer (seller confirms) or the
seller's published price (buyer accepts). A price set in round k is published from
round k+1, the same lag the directory has. Every other attempt is recorded as an anomaly and
leaves revenues and purchases untouched.
"""

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..models.actions import ActionCommand, Verb
from ..models.domain import (
    ZERO,
    AgentId,
    Performative,
    Role,
    RoundClock,
    format_amount,
    parse_amount,
)
from ..models.events import OutgoingMessage, PriceUpdate, ScenarioEvent

SELLER_VERBS = [
    Verb.SET_PRICE,
    Verb.SEND,
    Verb.QUERY_PRICE,
    Verb.CONFIRM_SALE,
    Verb.EXPLAIN,
    Verb.NOOP,
]
BUYER_VERBS = [
    Verb.SEND,
    Verb.OFFER,
    Verb.QUERY_PRICE,
    Verb.ACCEPT,
    Verb.EXPLAIN,
    Verb.NOOP,
]
ROLE_VERBS = {Role.SELLER: SELLER_VERBS, Role.BUYER: BUYER_VERBS}


class AnomalyKind(Enum):
    SELF_SALE = "SelfSale"
    CONFIRM_TO_NON_BUYER = "ConfirmToNonBuyer"
    CONFIRM_WITHOUT_OFFER = "ConfirmWithoutOffer"
    DOUBLE_PURCHASE_ATTEMPT = "DoublePurchaseAttempt"
    SELF_MESSAGE = "SelfMessage"
    ROLE_VIOLATION = "RoleViolation"
    INVALID_COUNTERPARTY = "InvalidCounterparty"


@dataclass(frozen=True)
class AnomalyEvent(ScenarioEvent):
    kind: AnomalyKind
    agent: AgentId
    round: int
    detail: str

    record_type = "anomaly"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "detail": self.detail}

    def to_report(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "agent": self.agent, "round": self.round, "detail": self.detail}

    @property
    def sort_key(self):
        return (self.round, self.agent, self.kind.value, self.detail)


@dataclass(frozen=True)
class Settlement(ScenarioEvent):
    seller: AgentId
    buyer: AgentId
    price: Decimal
    round: int

    record_type = "settlement"

    def to_dict(self) -> Dict[str, Any]:
        return {"seller": self.seller, "buyer": self.buyer, "price": format_amount(self.price)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], round: int) -> "Settlement":
        return cls(data["seller"], data["buyer"], parse_amount(data["price"]), round)


@dataclass(frozen=True)
class Sale:
    buyer: AgentId
    price: Decimal
    round: int


@dataclass(frozen=True)
class Purchase:
    seller: AgentId
    price: Decimal
    round: int


@dataclass
class SellerState:
    listed_price: Optional[Decimal] = None
    sales: List[Sale] = field(default_factory=list)
    revenue: Decimal = ZERO
    price_updates: List[Tuple[int, Decimal]] = field(default_factory=list)

    def set_price(self, price: Decimal, round: int) -> None:
        self.listed_price = price
        self.price_updates.append((round, price))

    def published_price(self, round: int) -> Optional[Decimal]:
        """Price buyers see in ``round``: the last one set before it."""
        published = None
        for set_in, price in self.price_updates:
            if set_in >= round:
                break
            published = price
        return published

    def record_sale(self, sale: Sale) -> None:
        self.sales.append(sale)
        self.revenue += sale.price


@dataclass
class BuyerState:
    purchase: Optional[Purchase] = None
    outstanding_offers: Dict[AgentId, Decimal] = field(default_factory=dict)

    @property
    def has_purchase(self) -> bool:
        return self.purchase is not None


class Ledger:
    """Marketplace accounts, mutated only through :meth:`apply_action`."""

    def __init__(self) -> None:
        self.sellers: Dict[AgentId, SellerState] = {}
        self.buyers: Dict[AgentId, BuyerState] = {}
        self.anomalies: List[AnomalyEvent] = []
        self.settlements: List[Settlement] = []
        self.logger = logging.getLogger(__name__)

    def register(self, agent: AgentId, role: Role) -> None:
        if agent in self.sellers or agent in self.buyers:
            raise ValueError(f"Agent already in ledger: {agent}")
        if role is Role.SELLER:
            self.sellers[agent] = SellerState()
        else:
            self.buyers[agent] = BuyerState()

    def role_of(self, agent: AgentId) -> Optional[Role]:
        if agent in self.sellers:
            return Role.SELLER
        if agent in self.buyers:
            return Role.BUYER
        return None

    def apply_action(
        self, agent: AgentId, action: ActionCommand, clock: RoundClock
    ) -> List[ScenarioEvent]:
        """Apply ``action`` for ``agent`` and return the resulting events.

        Raises:
            KeyError: ``agent`` is not registered.
        """
        role = self.role_of(agent)
        if role is None:
            raise KeyError(f"Unknown agent: {agent}")
        verb = action.verb
        round = clock.current

        if verb not in ROLE_VERBS[role]:
            return [self._anomaly(AnomalyKind.ROLE_VIOLATION, agent, round,
                                  f"{role.value} may not use {verb.value}")]

        if verb is Verb.SET_PRICE:
            assert action.amount is not None
            self.sellers[agent].set_price(action.amount, round)
            return [PriceUpdate(agent, action.amount)]
        if verb is Verb.CONFIRM_SALE:
            return self._confirm_sale(agent, action.target, action.amount, round)
        if verb is Verb.OFFER:
            return self._offer(agent, action.target, action.amount, round)
        if verb is Verb.ACCEPT:
            return self._accept(agent, action.target, action.amount, round)
        if verb is Verb.QUERY_PRICE:
            return [OutgoingMessage(action.target, Performative.QUERY, "QUERY_PRICE")]
        if verb is Verb.SEND:
            return [OutgoingMessage(action.target, Performative.INFORM, action.text)]
        # EXPLAIN and NOOP have no market effect
        return []

    def _confirm_sale(
        self, seller: AgentId, buyer: AgentId, price: Decimal, round: int
    ) -> List[ScenarioEvent]:
        if buyer == seller:
            return [self._anomaly(AnomalyKind.SELF_SALE, seller, round,
                                  f"{seller} confirmed a sale to itself at {format_amount(price)}")]
        if buyer not in self.buyers:
            return [self._anomaly(AnomalyKind.CONFIRM_TO_NON_BUYER, seller, round,
                                  f"{buyer} is not a buyer")]
        state = self.buyers[buyer]
        if state.has_purchase:
            return [self._anomaly(AnomalyKind.DOUBLE_PURCHASE_ATTEMPT, seller, round,
                                  f"{buyer} already bought from {state.purchase.seller}")]
        offer = state.outstanding_offers.get(seller)
        if offer is None or offer < price:
            standing = format_amount(offer) if offer is not None else "none"
            return [self._anomaly(AnomalyKind.CONFIRM_WITHOUT_OFFER, seller, round,
                                  f"no offer from {buyer} covers {format_amount(price)} "
                                  f"(standing offer: {standing})")]
        settlement = self._settle(seller, buyer, price, round)
        return [settlement, OutgoingMessage(buyer, Performative.CONFIRM,
                                            f"CONFIRM_SALE {format_amount(price)}")]

    def _offer(
        self, buyer: AgentId, seller: AgentId, amount: Decimal, round: int
    ) -> List[ScenarioEvent]:
        if seller not in self.sellers:
            return [self._anomaly(AnomalyKind.INVALID_COUNTERPARTY, buyer, round,
                                  f"offer to {seller}, which is not a seller")]
        state = self.buyers[buyer]
        if state.has_purchase:
            return [self._anomaly(AnomalyKind.DOUBLE_PURCHASE_ATTEMPT, buyer, round,
                                  f"offer to {seller} after buying from {state.purchase.seller}")]
        state.outstanding_offers[seller] = amount
        return [OutgoingMessage(seller, Performative.PROPOSE, f"OFFER {format_amount(amount)}")]

    def _accept(
        self, buyer: AgentId, seller: AgentId, price: Decimal, round: int
    ) -> List[ScenarioEvent]:
        if seller not in self.sellers:
            return [self._anomaly(AnomalyKind.INVALID_COUNTERPARTY, buyer, round,
                                  f"accept naming {seller}, which is not a seller")]
        state = self.buyers[buyer]
        if state.has_purchase:
            return [self._anomaly(AnomalyKind.DOUBLE_PURCHASE_ATTEMPT, buyer, round,
                                  f"accept from {seller} after buying from {state.purchase.seller}")]
        listed = self.sellers[seller].published_price(round)
        if listed is None or listed != price:
            shown = format_amount(listed) if listed is not None else "none"
            return [self._anomaly(AnomalyKind.CONFIRM_WITHOUT_OFFER, buyer, round,
                                  f"accept at {format_amount(price)} but {seller} lists {shown}")]
        settlement = self._settle(seller, buyer, price, round)
        return [settlement, OutgoingMessage(seller, Performative.CONFIRM,
                                            f"ACCEPT {format_amount(price)}")]

    def _settle(self, seller: AgentId, buyer: AgentId, price: Decimal, round: int) -> Settlement:
        self.sellers[seller].record_sale(Sale(buyer, price, round))
        self.buyers[buyer].purchase = Purchase(seller, price, round)
        settlement = Settlement(seller, buyer, price, round)
        self.settlements.append(settlement)
        self.logger.info(f"Settled: {seller} -> {buyer} at {format_amount(price)} in round {round}")
        return settlement

    def _anomaly(self, kind: AnomalyKind, agent: AgentId, round: int, detail: str) -> AnomalyEvent:
        event = AnomalyEvent(kind, agent, round, detail)
        self.anomalies.append(event)
        self.logger.warning(f"Anomaly {kind.value} by {agent} in round {round}: {detail}")
        return event

    # Totals and checks

    def total_revenue(self) -> Decimal:
        return sum((state.revenue for state in self.sellers.values()), ZERO)

    def total_spent(self) -> Decimal:
        return sum(
            (state.purchase.price for state in self.buyers.values() if state.purchase),
            ZERO,
        )

    def check_consistency(self) -> List[str]:
        """Return double-entry violations; empty when the books balance."""
        problems = []
        for seller, state in sorted(self.sellers.items()):
            total = sum((sale.price for sale in state.sales), ZERO)
            if total != state.revenue:
                problems.append(f"{seller}: revenue {state.revenue} != sum of sales {total}")
            for sale in state.sales:
                buyer_state = self.buyers.get(sale.buyer)
                purchase = buyer_state.purchase if buyer_state else None
                if purchase != Purchase(seller, sale.price, sale.round):
                    problems.append(f"{seller}: sale to {sale.buyer} has no matching purchase")
        for buyer, state in sorted(self.buyers.items()):
            purchase = state.purchase
            if purchase is None:
                continue
            seller_state = self.sellers.get(purchase.seller)
            matches = [] if seller_state is None else [
                sale for sale in seller_state.sales
                if sale == Sale(buyer, purchase.price, purchase.round)
            ]
            if len(matches) != 1:
                problems.append(f"{buyer}: purchase from {purchase.seller} has {len(matches)} matching sales")
        if self.total_revenue() != self.total_spent():
            problems.append(
                f"total revenue {self.total_revenue()} != total spent {self.total_spent()}"
            )
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sellers": {
                agent: {
                    "listed_price": format_amount(s.listed_price) if s.listed_price is not None else None,
                    "revenue": format_amount(s.revenue),
                    "sales": [
                        {"buyer": x.buyer, "price": format_amount(x.price), "round": x.round}
                        for x in s.sales
                    ],
                }
                for agent, s in sorted(self.sellers.items())
            },
            "buyers": {
                agent: {
                    "purchase": (
                        {"seller": b.purchase.seller, "price": format_amount(b.purchase.price),
                         "round": b.purchase.round}
                        if b.purchase else None
                    ),
                    "outstanding_offers": {
                        seller: format_amount(amount)
                        for seller, amount in sorted(b.outstanding_offers.items())
                    },
                }
                for agent, b in sorted(self.buyers.items())
            },
        }
