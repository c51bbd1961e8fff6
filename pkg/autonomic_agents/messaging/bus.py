"""Round-synchronized message bus and public agent directory."""

import logging
import threading
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Dict, List, Optional, Set, Tuple

from ..models.domain import AgentId, Message, Performative, Role, format_amount
from ..utils.exceptions import (
    MessagingError,
    StaleRoundError,
    UnknownAgentError,
    UnknownReceiverError,
)


@dataclass(frozen=True)
class DirectoryEntry:
    """Public listing of one agent. Sellers expose their price once they have set one."""
    agent: AgentId
    role: Role
    listed_price: Optional[Decimal] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "agent": self.agent,
            "role": self.role.value,
            "listed_price": format_amount(self.listed_price) if self.listed_price is not None else None,
        }


@dataclass(frozen=True)
class BusEvent:
    """One entry of the bus event log."""
    status: str  # "accepted", "dropped" or "rejected"
    message: Message
    reason: Optional[str] = None

    @property
    def self_addressed(self) -> bool:
        return self.message.self_addressed

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "status": self.status,
            "self_addressed": self.self_addressed,
            "reason": self.reason,
        }
        data.update(self.message.to_dict())
        return data


@dataclass(frozen=True)
class SendAck:
    """Acknowledgment for an accepted message."""
    sender: AgentId
    seq: int
    deliver_round: int
    self_addressed: bool


@dataclass
class BusStats:
    accepted: int = 0
    delivered: int = 0
    dropped: int = 0
    rejected: int = 0

    @property
    def in_flight(self) -> int:
        return self.accepted - self.delivered

    def to_dict(self) -> Dict[str, int]:
        return {
            "accepted": self.accepted,
            "delivered": self.delivered,
            "dropped": self.dropped,
            "rejected": self.rejected,
        }


class Mailbox:
    """Pending messages for one agent, kept in canonical delivery order."""

    def __init__(self, owner: AgentId):
        self.owner = owner
        self.pending: List[Message] = []

    def put(self, message: Message) -> None:
        self.pending.append(message)
        self.pending.sort(key=lambda m: m.delivery_key)

    def take_round(self, round_sent: int) -> List[Message]:
        """Remove and return every message sent in ``round_sent``."""
        taken = [m for m in self.pending if m.round_sent == round_sent]
        self.pending = [m for m in self.pending if m.round_sent != round_sent]
        return taken


class MessageBus:
    """Lockstep message bus.

    A message sent in round k becomes readable in round k+1 and is delivered exactly once.
    Seller prices listed during a round become public when the driver closes the round
    with :meth:`end_round`, so directory snapshots always show the previous round's prices.
    """

    def __init__(self) -> None:
        self.logger = logging.getLogger(__name__)
        self.current_round = 0
        self._roles: Dict[AgentId, Role] = {}
        self._mailboxes: Dict[AgentId, Mailbox] = {}
        self._published_prices: Dict[AgentId, Decimal] = {}
        self._staged_prices: Dict[AgentId, Decimal] = {}
        self._next_seq: Dict[AgentId, int] = {}
        self._used_keys: Set[Tuple[AgentId, int]] = set()
        self._events: List[BusEvent] = []
        self._event_cursor = 0
        self._stats = BusStats()
        self._lock = threading.Lock()

    def register(self, agent: AgentId, role: Role) -> None:
        """Add an agent to the bus and the directory."""
        with self._lock:
            if agent in self._roles:
                raise MessagingError(f"Agent already registered: {agent}")
            self._roles[agent] = role
            self._mailboxes[agent] = Mailbox(agent)
            self._next_seq[agent] = 0
        self.logger.debug(f"Registered {role.value} {agent}")

    def is_registered(self, agent: AgentId) -> bool:
        return agent in self._roles

    def role_of(self, agent: AgentId) -> Role:
        if agent not in self._roles:
            raise UnknownAgentError(agent)
        return self._roles[agent]

    @property
    def agents(self) -> List[AgentId]:
        """Registered agents in canonical order."""
        return sorted(self._roles)

    def compose(
        self, sender: AgentId, receiver: AgentId, performative: Performative, body: str
    ) -> Message:
        """Build a message stamped with the current round and the sender's next seq."""
        with self._lock:
            if sender not in self._roles:
                raise UnknownAgentError(sender)
            seq = self._next_seq[sender]
            self._next_seq[sender] = seq + 1
        return Message(
            sender=sender,
            receiver=receiver,
            performative=performative,
            body=body,
            round_sent=self.current_round,
            seq=seq,
        )

    def send(self, msg: Message) -> SendAck:
        """Queue ``msg`` for delivery in the next round.

        Raises:
            StaleRoundError: the message is not stamped with the current round (rejected).
            UnknownAgentError: the sender is not registered (rejected).
            UnknownReceiverError: the receiver is not registered (dropped and logged).
        """
        with self._lock:
            if msg.round_sent != self.current_round:
                self._log(BusEvent("rejected", msg, "stale round"))
                self._stats.rejected += 1
                raise StaleRoundError(msg.round_sent, self.current_round)
            if msg.sender not in self._roles:
                self._log(BusEvent("rejected", msg, "unknown sender"))
                self._stats.rejected += 1
                raise UnknownAgentError(msg.sender)
            key = (msg.sender, msg.seq)
            if key in self._used_keys:
                self._log(BusEvent("rejected", msg, "duplicate sequence number"))
                self._stats.rejected += 1
                raise MessagingError(f"Duplicate message {msg.sender}#{msg.seq}")
            self._used_keys.add(key)
            if msg.receiver not in self._roles:
                self._log(BusEvent("dropped", msg, "unknown receiver"))
                self._stats.dropped += 1
                self.logger.warning(f"Dropped message {msg.sender}#{msg.seq}: unknown receiver {msg.receiver}")
                raise UnknownReceiverError(msg.receiver)

            self._mailboxes[msg.receiver].put(msg)
            self._log(BusEvent("accepted", msg))
            self._stats.accepted += 1

        if msg.self_addressed:
            self.logger.warning(f"Self-addressed message from {msg.sender} in round {msg.round_sent}")
        return SendAck(msg.sender, msg.seq, msg.round_sent + 1, msg.self_addressed)

    def collect_inbox(self, agent: AgentId, round: int) -> List[Message]:
        """Return the agent's messages sent in the previous round, in delivery order.

        Returned messages leave the mailbox, so a second call in the same round returns
        an empty list.
        """
        with self._lock:
            if round != self.current_round:
                raise StaleRoundError(round, self.current_round)
            if agent not in self._mailboxes:
                raise UnknownAgentError(agent)
            if round == 0:
                return []
            inbox = self._mailboxes[agent].take_round(round - 1)
            self._stats.delivered += len(inbox)
        return inbox

    def list_price(self, seller: AgentId, price: Decimal) -> None:
        """Stage a seller's new price; it becomes public at the end of the round."""
        with self._lock:
            if self._roles.get(seller) is not Role.SELLER:
                raise MessagingError(f"Only sellers can list a price: {seller}")
            self._staged_prices[seller] = price

    def directory_snapshot(self) -> List[DirectoryEntry]:
        """Directory sorted by agent id, with prices as of the end of the previous round."""
        with self._lock:
            return [
                DirectoryEntry(
                    agent=agent,
                    role=self._roles[agent],
                    listed_price=self._published_prices.get(agent),
                )
                for agent in sorted(self._roles)
            ]

    def end_round(self) -> None:
        """Close the current round: publish staged prices and advance the round counter."""
        with self._lock:
            self._published_prices.update(self._staged_prices)
            self._staged_prices.clear()
            self.current_round += 1

    def drain_events(self) -> List[BusEvent]:
        """Return bus events logged since the previous drain."""
        with self._lock:
            events = self._events[self._event_cursor:]
            self._event_cursor = len(self._events)
        return events

    @property
    def event_log(self) -> List[BusEvent]:
        return list(self._events)

    def pending_count(self) -> int:
        return sum(len(box.pending) for box in self._mailboxes.values())

    def stats(self) -> BusStats:
        with self._lock:
            return BusStats(**self._stats.to_dict())

    def _log(self, event: BusEvent) -> None:
        self._events.append(event)
