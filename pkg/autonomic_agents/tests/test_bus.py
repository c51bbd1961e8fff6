"""Tests for the lockstep message bus."""

import random
from collections import Counter
from decimal import Decimal

import pytest

from ..messaging.bus import MessageBus
from ..models.domain import Performative, Role
from ..utils.exceptions import (
    MessagingError,
    StaleRoundError,
    UnknownAgentError,
    UnknownReceiverError,
)


def make_bus(*agents):
    bus = MessageBus()
    for agent, role in agents:
        bus.register(agent, role)
    return bus


class TestMessageBus:

    def setup_method(self):
        self.bus = make_bus(
            ("Agent1", Role.SELLER),
            ("Agent2", Role.SELLER),
            ("Agent4", Role.BUYER),
        )

    def send(self, sender, receiver, body="hi"):
        msg = self.bus.compose(sender, receiver, Performative.INFORM, body)
        return self.bus.send(msg)

    def test_message_not_visible_in_send_round(self):
        ack = self.send("Agent4", "Agent1")
        assert ack.deliver_round == 1
        assert self.bus.collect_inbox("Agent1", 0) == []
        self.bus.end_round()
        inbox = self.bus.collect_inbox("Agent1", 1)
        assert [m.body for m in inbox] == ["hi"]

    def test_exactly_once_delivery(self):
        self.send("Agent4", "Agent1")
        self.bus.end_round()
        assert len(self.bus.collect_inbox("Agent1", 1)) == 1
        assert self.bus.collect_inbox("Agent1", 1) == []
        self.bus.end_round()
        assert self.bus.collect_inbox("Agent1", 2) == []

    def test_delivery_order_round_sender_seq(self):
        self.send("Agent4", "Agent1", "b1")
        self.send("Agent2", "Agent1", "a1")
        self.send("Agent4", "Agent1", "b2")
        self.bus.end_round()
        inbox = self.bus.collect_inbox("Agent1", 1)
        assert [m.body for m in inbox] == ["a1", "b1", "b2"]

    def test_stale_round_rejected(self):
        msg = self.bus.compose("Agent4", "Agent1", Performative.INFORM, "late")
        self.bus.end_round()
        with pytest.raises(StaleRoundError):
            self.bus.send(msg)
        assert self.bus.stats().rejected == 1
        with pytest.raises(StaleRoundError):
            self.bus.collect_inbox("Agent1", 0)

    def test_unknown_receiver_dropped(self):
        with pytest.raises(UnknownReceiverError):
            self.send("Agent4", "Ghost")
        stats = self.bus.stats()
        assert stats.dropped == 1
        assert stats.accepted == 0
        assert self.bus.drain_events()[0].status == "dropped"

    def test_unknown_sender(self):
        with pytest.raises(UnknownAgentError):
            self.bus.compose("Ghost", "Agent1", Performative.INFORM, "hi")

    def test_duplicate_sequence_rejected(self):
        msg = self.bus.compose("Agent4", "Agent1", Performative.INFORM, "once")
        self.bus.send(msg)
        with pytest.raises(MessagingError):
            self.bus.send(msg)

    def test_self_addressed_is_accepted_and_flagged(self):
        ack = self.send("Agent1", "Agent1")
        assert ack.self_addressed
        events = self.bus.drain_events()
        assert events[0].status == "accepted"
        assert events[0].to_dict()["self_addressed"] is True

    def test_drain_events_only_returns_new(self):
        self.send("Agent4", "Agent1")
        assert len(self.bus.drain_events()) == 1
        assert self.bus.drain_events() == []
        assert len(self.bus.event_log) == 1

    def test_prices_publish_at_round_end(self):
        self.bus.list_price("Agent1", Decimal("20.00"))
        snapshot = {e.agent: e.listed_price for e in self.bus.directory_snapshot()}
        assert snapshot["Agent1"] is None
        self.bus.end_round()
        snapshot = {e.agent: e.listed_price for e in self.bus.directory_snapshot()}
        assert snapshot["Agent1"] == Decimal("20.00")

    def test_buyers_cannot_list(self):
        with pytest.raises(MessagingError):
            self.bus.list_price("Agent4", Decimal("1.00"))

    def test_directory_sorted(self):
        assert [e.agent for e in self.bus.directory_snapshot()] == ["Agent1", "Agent2", "Agent4"]
        assert self.bus.directory_snapshot()[2].to_dict()["role"] == "buyer"

    def test_duplicate_registration(self):
        with pytest.raises(MessagingError):
            self.bus.register("Agent1", Role.BUYER)


class TestConservation:
    """Randomized traffic: delivered multiset equals accepted multiset."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_traffic(self, seed):
        rng = random.Random(seed)
        agents = [f"A{i}" for i in range(rng.randint(2, 6))]
        bus = make_bus(*[(a, Role.SELLER if i == 0 else Role.BUYER) for i, a in enumerate(agents)])
        rounds = rng.randint(2, 6)
        delivered = Counter()

        for current in range(rounds):
            for agent in agents:
                for message in bus.collect_inbox(agent, current):
                    assert message.round_sent == current - 1
                    assert message.receiver == agent
                    delivered[(message.sender, message.seq)] += 1
            for _ in range(rng.randint(0, 8)):
                sender = rng.choice(agents)
                receiver = rng.choice(agents + ["Ghost"])
                msg = bus.compose(sender, receiver, Performative.INFORM, f"r{current}")
                try:
                    bus.send(msg)
                except UnknownReceiverError:
                    pass
            stats = bus.stats()
            assert stats.accepted == stats.delivered + bus.pending_count()
            bus.end_round()

        # drain what the last round sent
        for agent in agents:
            for message in bus.collect_inbox(agent, rounds):
                delivered[(message.sender, message.seq)] += 1

        accepted = Counter(
            (e.message.sender, e.message.seq) for e in bus.event_log if e.status == "accepted"
        )
        assert delivered == accepted
        assert all(count == 1 for count in delivered.values())
        assert bus.pending_count() == 0
