"""Role templates and prompt assembly for the Monitor stage."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from ..knowledge.history import KnowledgeWindow
from ..llm.tokens import TokenEstimator, estimate_tokens
from ..messaging.bus import DirectoryEntry
from ..models.actions import GRAMMAR_SYNOPSIS, Verb
from ..models.domain import Message, Role, RoundClock, format_amount

SELLER_TEMPLATE = (
    "You are {agent}, a seller in an online book marketplace. Every seller offers "
    "identical copies of the same book and is free to set any price. Your objective is "
    "to earn the most money from book sales by the end of the simulation. The simulation "
    "runs for {total} iterations and you act once per iteration, so keep track of how "
    "many iterations remain. You interact with other agents only through the commands "
    "you are given."
)

BUYER_TEMPLATE = (
    "You are {agent}, a buyer in an online book marketplace. Several sellers offer "
    "identical copies of the same book at prices of their choosing. Your objective is to "
    "purchase a single copy at the lowest possible price before the simulation ends. The "
    "simulation runs for {total} iterations and you act once per iteration, so keep track "
    "of how many iterations remain. You interact with other agents only through the "
    "commands you are given."
)

SELLER_OPEN_TEMPLATE = (
    "You are {agent} and you sell a book. Other sellers have the same book. Sell it in "
    "whatever way you think works best over the {total} iterations of the simulation."
)

BUYER_OPEN_TEMPLATE = (
    "You are {agent} and you want to buy one copy of a book that several sellers offer. "
    "Get it in whatever way you think works best over the {total} iterations of the "
    "simulation."
)

ROLE_TEMPLATES: Dict[str, Dict[str, Any]] = {
    "seller": {"role": Role.SELLER, "text": SELLER_TEMPLATE},
    "buyer": {"role": Role.BUYER, "text": BUYER_TEMPLATE},
    "seller_open": {"role": Role.SELLER, "text": SELLER_OPEN_TEMPLATE},
    "buyer_open": {"role": Role.BUYER, "text": BUYER_OPEN_TEMPLATE},
}

DEFAULT_TEMPLATES = {Role.SELLER: "seller", Role.BUYER: "buyer"}

EXPLANATION_REQUEST = (
    "The simulation is over; all {total} iterations have been played. Explain the "
    "decisions you made during the simulation and why you made them. Answer in plain text."
)


def render_system_prompt(template_id: str, agent: str, total_rounds: int) -> str:
    """Fill in a role template.

    Raises:
        KeyError: unknown template id.
    """
    return ROLE_TEMPLATES[template_id]["text"].format(agent=agent, total=total_rounds)


def template_role(template_id: str) -> Optional[Role]:
    entry = ROLE_TEMPLATES.get(template_id)
    return entry["role"] if entry else None


@dataclass(frozen=True)
class Prompt:
    system: str
    user: str
    tokens: int
    window: KnowledgeWindow

    def to_dict(self) -> Dict[str, Any]:
        return {"system": self.system, "user": self.user, "tokens": self.tokens}


def render_directory(directory: Sequence[DirectoryEntry]) -> str:
    lines = []
    for entry in directory:
        if entry.role is Role.SELLER:
            price = (
                format_amount(entry.listed_price)
                if entry.listed_price is not None
                else "no price listed"
            )
            lines.append(f"- {entry.agent} (seller): {price}")
        else:
            lines.append(f"- {entry.agent} (buyer)")
    return "\n".join(lines)


def render_inbox(inbox: Sequence[Message]) -> str:
    return "\n".join(
        f"- from {m.sender} ({m.performative.value}): {m.body}" for m in inbox
    )


def render_grammar(verbs: Sequence[Verb]) -> str:
    lines = ["Reply with exactly one command on the first line, using one of:"]
    lines.extend(GRAMMAR_SYNOPSIS[verb] for verb in Verb if verb in verbs)
    lines.append(
        "Amounts are in dollars with at most two decimals, e.g. 18.00. "
        "Anything after the first line is kept as your private reasoning."
    )
    return "\n".join(lines)


def compose_user_text(
    clock: RoundClock,
    state: str,
    directory: Sequence[DirectoryEntry],
    window: KnowledgeWindow,
    inbox: Sequence[Message],
    verbs: Sequence[Verb],
) -> str:
    """User section in fixed order: banner, state, directory, history, inbox, grammar."""
    banner = clock.banner
    if clock.is_final_round:
        banner += " (final iteration)"
    sections = [
        banner,
        "Your state:\n" + state,
        "Directory:\n" + (render_directory(directory) or "(empty)"),
        "History:\n" + (window.render() or "(nothing yet)"),
        "Messages received:\n" + (render_inbox(inbox) or "(none)"),
        render_grammar(verbs),
    ]
    return "\n\n".join(sections)


def compose_explanation_text(total_rounds: int, state: str, window: KnowledgeWindow) -> str:
    sections = [
        EXPLANATION_REQUEST.format(total=total_rounds),
        "Your final state:\n" + state,
        "History:\n" + (window.render() or "(nothing recorded)"),
    ]
    return "\n\n".join(sections)


def measure(system: str, user: str, estimator: TokenEstimator = estimate_tokens) -> int:
    return estimator(system) + estimator(user)


def assemble_prompt(
    system: str,
    clock: RoundClock,
    state: str,
    directory: Sequence[DirectoryEntry],
    window: KnowledgeWindow,
    inbox: Sequence[Message],
    verbs: Sequence[Verb],
    estimator: TokenEstimator = estimate_tokens,
) -> Prompt:
    user = compose_user_text(clock, state, directory, window, inbox, verbs)
    return Prompt(system, user, measure(system, user, estimator), window)


def grammar_for(verbs: Optional[List[Verb]] = None) -> str:
    return render_grammar(verbs if verbs is not None else list(Verb))
