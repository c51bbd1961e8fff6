"""Tests for prompt assembly and the agent runtime cycle."""

from decimal import Decimal

import pytest

from .helpers import FailingBackend, scripted
from ..core.agent import AgentRuntime, AgentSettings
from ..core.prompts import (
    ROLE_TEMPLATES,
    assemble_prompt,
    render_inbox,
    render_system_prompt,
    template_role,
)
from ..knowledge.history import EntryKind, window
from ..llm.tokens import estimate_tokens
from ..marketplace.scenario import MarketplaceScenario
from ..messaging.bus import MessageBus
from ..models.actions import Verb
from ..models.domain import Performative, Role, RoundClock
from ..utils.exceptions import AuthError, BackendUnavailableError, BudgetUnsatisfiableError, PhaseError


class World:
    """A bus and marketplace with two sellers and two buyers."""

    AGENTS = {"Agent1": Role.SELLER, "Agent2": Role.SELLER, "Agent4": Role.BUYER, "Agent5": Role.BUYER}

    def __init__(self, backend, total=3, settings=None):
        self.bus = MessageBus()
        self.scenario = MarketplaceScenario()
        self.total = total
        self.runtimes = {}
        for agent, role in self.AGENTS.items():
            self.bus.register(agent, role)
            self.scenario.register_agent(agent, role)
            template = "seller" if role is Role.SELLER else "buyer"
            self.runtimes[agent] = AgentRuntime(
                agent,
                role,
                self.scenario,
                self.bus,
                backend,
                render_system_prompt(template, agent, total),
                settings or AgentSettings(),
            )

    def clock(self, current):
        return RoundClock(current, self.total)


class TestPrompts:

    def test_templates(self):
        text = render_system_prompt("seller", "Agent1", 5)
        assert "Agent1" in text and "5 iterations" in text
        assert template_role("buyer_open") is Role.BUYER
        assert template_role("missing") is None
        assert set(ROLE_TEMPLATES) == {"seller", "buyer", "seller_open", "buyer_open"}

    def test_section_order_and_measure(self):
        world = World(scripted({}))
        directory = world.bus.directory_snapshot()
        prompt = assemble_prompt(
            "system text",
            RoundClock(0, 3),
            "Role: seller",
            directory,
            window([], 10),
            [],
            [Verb.SET_PRICE, Verb.NOOP],
        )
        user = prompt.user
        assert user.startswith("Iteration 1 of 3\n\n")
        positions = [user.index(s) for s in ("Your state:", "Directory:", "History:", "Messages received:", "Reply with")]
        assert positions == sorted(positions)
        assert "- Agent1 (seller): no price listed" in user
        assert "- Agent4 (buyer)" in user
        assert "OFFER" not in user
        assert prompt.tokens == estimate_tokens("system text") + estimate_tokens(user)


class TestAgentCycle:

    def test_banner_in_every_prompt(self):
        world = World(scripted({}), total=3)
        for current in range(3):
            cycle = world.runtimes["Agent1"].step(world.clock(current))
            assert cycle.prompt.user.startswith(f"Iteration {current + 1} of 3")
            world.bus.end_round()
        assert "(final iteration)" in cycle.prompt.user

    def test_inbox_concatenated_in_delivery_order(self):
        world = World(scripted({}))
        for sender, body in [("Agent5", "second sender"), ("Agent4", "first a"), ("Agent4", "first b")]:
            world.bus.send(world.bus.compose(sender, "Agent1", Performative.INFORM, body))
        world.bus.end_round()

        cycle = world.runtimes["Agent1"].step(world.clock(1))

        assert [m.body for m in cycle.inbox] == ["first a", "first b", "second sender"]
        assert render_inbox(cycle.inbox) in cycle.prompt.user
        received = [e for e in world.runtimes["Agent1"].history.entries if e.kind is EntryKind.RECEIVED]
        assert len(received) == 3

    def test_stage_order_and_history(self):
        backend = scripted({("Agent1", 0): ["SET_PRICE 20.00\nopening price"]})
        world = World(backend)
        cycle = world.runtimes["Agent1"].step(world.clock(0))

        assert cycle.stages == ["inbox", "prompt", "response", "action"]
        assert cycle.action.verb is Verb.SET_PRICE
        kinds = [e.kind for e in world.runtimes["Agent1"].history.entries]
        assert kinds == [EntryKind.OBSERVATION, EntryKind.ACTION_TAKEN]
        assert world.scenario.ledger.sellers["Agent1"].listed_price == Decimal("20.00")

    def test_offer_sends_message_and_records_sent(self):
        world = World(scripted({("Agent4", 0): ["OFFER Agent1 18.00"]}))
        cycle = world.runtimes["Agent4"].step(world.clock(0))

        assert len(cycle.sent) == 1
        assert cycle.sent[0].performative is Performative.PROPOSE
        kinds = [e.kind for e in world.runtimes["Agent4"].history.entries]
        assert EntryKind.SENT in kinds

    def test_send_to_unknown_agent_is_dropped(self):
        world = World(scripted({("Agent4", 0): ["SEND Ghost hello"]}))
        cycle = world.runtimes["Agent4"].step(world.clock(0))
        assert cycle.sent == []
        assert world.bus.stats().dropped == 1

    def test_history_window_shrinks_to_fit_context(self):
        settings = AgentSettings(history_budget=3000, context_budget=500)
        world = World(scripted({}, default_reply="EXPLAIN still thinking about the right price"), total=30, settings=settings)
        runtime = world.runtimes["Agent1"]
        for current in range(30):
            cycle = runtime.step(world.clock(current))
            world.bus.end_round()
            assert cycle.prompt.tokens <= 500
        # the last prompt was built before round 29's observation and action were recorded
        prior = runtime.history.entries[:-2]
        kept = len(cycle.prompt.window)
        assert 0 < kept < len(prior)
        assert list(cycle.prompt.window.entries) == prior[len(prior) - kept:]

    def test_window_respects_history_budget(self):
        settings = AgentSettings(history_budget=40, context_budget=6000)
        world = World(scripted({}), total=10, settings=settings)
        runtime = world.runtimes["Agent4"]
        for current in range(10):
            cycle = runtime.step(world.clock(current))
            world.bus.end_round()
            assert cycle.prompt.window.tokens <= 40

    def test_budget_unsatisfiable_aborts_cycle(self):
        backend = scripted({("Agent1", 0): ["SET_PRICE 20.00"]})
        world = World(backend, settings=AgentSettings(context_budget=10))
        runtime = world.runtimes["Agent1"]

        with pytest.raises(BudgetUnsatisfiableError):
            runtime.monitor([], world.bus.directory_snapshot(), world.clock(0))

        cycle = runtime.step(world.clock(0))
        assert cycle.action.is_noop
        assert cycle.error_type == "BudgetUnsatisfiableError"
        assert cycle.stages == ["inbox", "action"]
        assert world.scenario.ledger.sellers["Agent1"].listed_price is None
        # the scripted reply was never requested
        assert backend.policy.remaining() == 1

    @pytest.mark.parametrize("error", [
        BackendUnavailableError(4, "HTTP 503"),
        AuthError("Credentials rejected (HTTP 401)"),
        RuntimeError("boom"),
    ])
    def test_backend_failure_becomes_noop(self, error):
        backend = FailingBackend(error)
        world = World(backend)
        cycle = world.runtimes["Agent4"].step(world.clock(0))

        assert backend.calls == 1
        assert cycle.action.is_noop
        assert cycle.action.reason.startswith("backend error: ")
        assert cycle.error_type == type(error).__name__
        assert cycle.stages == ["inbox", "prompt", "action"]

    def test_unparseable_reply_becomes_noop(self):
        world = World(scripted({("Agent4", 0): ["I think I will wait."]}))
        cycle = world.runtimes["Agent4"].step(world.clock(0))
        assert cycle.action.is_noop
        assert cycle.action.raw == "I think I will wait."
        assert cycle.error is None

    def test_explain_requires_final_phase(self):
        world = World(scripted({("Agent1", 3): ["I kept my price."]}))
        runtime = world.runtimes["Agent1"]
        with pytest.raises(PhaseError):
            runtime.explain(world.clock(1))
        result = runtime.explain(world.clock(3))
        assert result["response"].content == "I kept my price."
        assert "Iteration" not in result["prompt"].user
        assert result["error"] is None
