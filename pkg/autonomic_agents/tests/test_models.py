"""Tests for the shared domain types."""

from decimal import Decimal

import pytest

from ..models.domain import (
    Message,
    Performative,
    RoundClock,
    format_amount,
    is_agent_id,
    parse_amount,
    validate_amount,
)
from ..models.events import OutgoingMessage, PriceUpdate


class TestCurrency:

    def test_parse_and_format(self):
        assert format_amount(parse_amount("18")) == "18.00"
        assert parse_amount("$0.5") == Decimal("0.50")

    @pytest.mark.parametrize("literal", [
        "", "abc", "1.234", "+3", "1,000", "1000000.01", "0.00", "9" * 40, "9" * 30 + ".99",
    ])
    def test_rejected_literals(self, literal):
        with pytest.raises(ValueError):
            parse_amount(literal)

    def test_validate_rejects_floats_and_sub_cent(self):
        with pytest.raises(ValueError):
            validate_amount(18.0)
        with pytest.raises(ValueError):
            validate_amount(Decimal("1.001"))

    @pytest.mark.parametrize("value", ["9" * 40, "1E+50", "NaN", "Infinity"])
    def test_validate_rejects_unrepresentable(self, value):
        with pytest.raises(ValueError):
            validate_amount(Decimal(value))


class TestAgentIds:

    @pytest.mark.parametrize("name,valid", [
        ("Agent1", True),
        ("seller_2-b", True),
        ("", False),
        ("Agent 1", False),
        ("Agent.1", False),
    ])
    def test_is_agent_id(self, name, valid):
        assert is_agent_id(name) is valid


class TestMessage:

    def test_delivery_key_and_self_addressed(self):
        msg = Message("Agent1", "Agent1", Performative.INFORM, "hello", 2, 0)
        assert msg.self_addressed
        assert msg.delivery_key == (2, "Agent1", 0)

    def test_empty_body_rejected(self):
        with pytest.raises(ValueError):
            Message("Agent1", "Agent2", Performative.INFORM, "  ", 0, 0)

    def test_dict_round_trip(self):
        msg = Message("Agent4", "Agent1", Performative.PROPOSE, "OFFER 18.00", 3, 1)
        assert Message.from_dict(msg.to_dict()) == msg


class TestRoundClock:

    def test_banner_is_one_based(self):
        assert RoundClock(0, 5).banner == "Iteration 1 of 5"
        assert RoundClock(4, 5).banner == "Iteration 5 of 5"

    def test_final_round_and_explanation_phase(self):
        clock = RoundClock(4, 5)
        assert clock.is_final_round
        assert not clock.in_explanation_phase
        after = clock.advance()
        assert after.in_explanation_phase
        with pytest.raises(ValueError):
            after.advance()

    @pytest.mark.parametrize("current,total", [(0, 0), (-1, 3), (4, 3)])
    def test_invalid_clock(self, current, total):
        with pytest.raises(ValueError):
            RoundClock(current, total)


class TestEvents:

    def test_event_payloads(self):
        assert PriceUpdate("Agent1", Decimal("20.00")).to_dict() == {"seller": "Agent1", "price": "20.00"}
        outgoing = OutgoingMessage("Agent1", Performative.QUERY, "QUERY_PRICE")
        assert outgoing.to_dict()["performative"] == "query"
