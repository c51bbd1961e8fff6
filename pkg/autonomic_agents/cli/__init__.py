"""Command-line interface for autonomic agent simulations."""

from .main import main, create_cli

__all__ = ["main", "create_cli"]
