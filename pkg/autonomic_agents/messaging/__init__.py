"""Message bus and agent directory."""

from .bus import MessageBus, Mailbox, DirectoryEntry, BusEvent, BusStats, SendAck

__all__ = ["MessageBus", "Mailbox", "DirectoryEntry", "BusEvent", "BusStats", "SendAck"]
