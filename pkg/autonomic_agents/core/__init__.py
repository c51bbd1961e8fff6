"""Agent runtime, prompt assembly and the scenario interface.

The round driver lives in :mod:`autonomic_agents.core.simulation`.
"""

from .base_scenario import BaseScenario
from .agent import AgentRuntime, AgentSettings, CycleRecord, Perception
from .prompts import Prompt, assemble_prompt, render_system_prompt

__all__ = [
    "BaseScenario",
    "AgentRuntime",
    "AgentSettings",
    "CycleRecord",
    "Perception",
    "Prompt",
    "assemble_prompt",
    "render_system_prompt",
]
