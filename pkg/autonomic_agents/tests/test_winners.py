"""Tests for winner determination."""

import random
from decimal import Decimal

from ..marketplace.ledger import Ledger
from ..marketplace.winners import NO_WINNER, determine_winners
from ..models.actions import parse_action
from ..models.domain import Role, RoundClock

PRICES = ["10.00", "12.50", "18.00", "25.00"]
SCALES = ["0.5", "1.5", "2", "3"]


def random_market(rng):
    sellers = [f"S{i}" for i in range(rng.randint(1, 6))]
    buyers = [f"B{i}" for i in range(rng.randint(1, 8))]
    deals = [
        (rng.choice(sellers), buyer, Decimal(rng.choice(PRICES)))
        for buyer in buyers
        if rng.random() >= 0.3
    ]
    return sellers, buyers, deals


def build_ledger(sellers, buyers, deals, scale=Decimal("1")):
    """Each deal lists a price in one round and accepts it in the next."""
    ledger = Ledger()
    for agent in sellers:
        ledger.register(agent, Role.SELLER)
    for agent in buyers:
        ledger.register(agent, Role.BUYER)
    total = 2 * len(deals) + 1
    for i, (seller, buyer, price) in enumerate(deals):
        price = (price * scale).quantize(Decimal("0.01"))
        ledger.apply_action(seller, parse_action(f"SET_PRICE {price}"), RoundClock(2 * i, total))
        ledger.apply_action(buyer, parse_action(f"ACCEPT {seller} {price}"), RoundClock(2 * i + 1, total))
    return ledger


def oracle(ledger):
    """Independent scan over agents in id order."""
    best_seller, best_revenue = None, None
    for agent in sorted(ledger.sellers):
        state = ledger.sellers[agent]
        revenue = sum((s.price for s in state.sales), Decimal("0.00"))
        if not state.sales:
            continue
        if best_revenue is None or revenue > best_revenue:
            best_seller, best_revenue = agent, revenue

    best_buyer, best_price = None, None
    for agent in sorted(ledger.buyers):
        purchase = ledger.buyers[agent].purchase
        if purchase is None:
            continue
        if best_price is None or purchase.price < best_price:
            best_buyer, best_price = agent, purchase.price
    return best_seller, best_revenue, best_buyer, best_price


class TestDetermineWinners:

    def test_empty_market_has_no_winner(self):
        ledger = Ledger()
        ledger.register("Agent1", Role.SELLER)
        ledger.register("Agent4", Role.BUYER)
        report = determine_winners(ledger).to_dict()
        assert report["seller"] == {"agent": NO_WINNER, "revenue": None}
        assert report["buyer"] == {"agent": NO_WINNER, "price": None}
        assert report["seller_totals"] == {"Agent1": "0.00"}
        assert report["buyer_totals"] == {"Agent4": None}

    def test_ties_go_to_smallest_id(self):
        deals = [("S2", "B2", Decimal("15.00")), ("S1", "B1", Decimal("15.00"))]
        report = determine_winners(build_ledger(["S2", "S1"], ["B2", "B1"], deals))
        assert report.seller == "S1"
        assert report.buyer == "B1"

    def test_matches_oracle_on_random_ledgers(self):
        rng = random.Random(2024)
        for _ in range(1000):
            sellers, buyers, deals = random_market(rng)
            ledger = build_ledger(sellers, buyers, deals)
            report = determine_winners(ledger)
            assert (report.seller, report.seller_revenue, report.buyer, report.buyer_price) == oracle(ledger)

            scale = Decimal(rng.choice(SCALES))
            scaled = determine_winners(build_ledger(sellers, buyers, deals, scale))
            assert (scaled.seller, scaled.buyer) == (report.seller, report.buyer)

    def test_large_market(self):
        sellers = [f"S{i:03d}" for i in range(300)]
        buyers = [f"B{i:03d}" for i in range(300)]
        deals = [(f"S{i % 50:03d}", buyers[i], Decimal(10 + i % 7)) for i in range(300)]
        ledger = build_ledger(sellers, buyers, deals)
        report = determine_winners(ledger)
        assert len(ledger.settlements) == 300
        assert report.seller == oracle(ledger)[0]
        assert report.buyer_price == Decimal("10.00")
        assert report.buyer == "B000"
