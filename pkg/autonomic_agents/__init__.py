"""
Autonomic Agents - LLM-driven agents run through an adapted MAPE-K control loop.

Each agent monitors its environment and inbox, asks a language model for its next move and
executes the answer as a command in a constrained grammar. The bundled scenario is a book
marketplace with sellers and buyers, run in lockstep rounds with reproducible transcripts.
"""

__version__ = "1.0.0"
__author__ = "Autonomic Agents Team"

from .core.simulation import Simulation, SimulationResult, run_simulation
from .config.settings import SimConfig
from .config.manager import load_config
from .models.actions import ActionCommand, parse_action, render_action

__all__ = [
    "Simulation",
    "SimulationResult",
    "run_simulation",
    "SimConfig",
    "load_config",
    "ActionCommand",
    "parse_action",
    "render_action",
]
