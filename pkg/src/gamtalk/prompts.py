"""Conversation construction: system prompt, dataset turn, graph messages, CoT turns.

Templates live in plain-text files under ``gamtalk/templates`` and can be
overridden per run by pointing :class:`PromptTemplates` at another directory;
results are known to depend on prompting, so nothing is hardcoded.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .graphtext import GraphText, TokenEstimator


class Role(str, enum.Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self):
        object.__setattr__(self, "role", Role(self.role).value)
        if not self.content:
            raise ValueError("message content must be non-empty")


class TaskKind(str, enum.Enum):
    DESCRIBE = "describe"
    READ_VALUE = "read_value"
    MONOTONICITY = "monotonicity"
    LARGEST_JUMP = "largest_jump"
    ANOMALY = "anomaly"
    SUMMARIZE_GRAPH = "summarize_graph"
    SUMMARIZE_MODEL = "summarize_model"


@dataclass(frozen=True)
class GraphTask:
    """A task to run against one graph; read_value carries its query point."""

    kind: TaskKind
    query_point: float | str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TaskKind(self.kind))
        if self.kind is TaskKind.READ_VALUE and self.query_point is None:
            raise ValueError("read_value tasks need a query point")


@dataclass(frozen=True)
class DatasetContext:
    """What the LLM is told about the dataset and the meaning of the y-axis."""

    description: str
    target_semantics: str

    def __post_init__(self):
        if not self.description or not self.target_semantics:
            raise ValueError("description and target_semantics must be non-empty")


class PromptTemplates:
    """Named text templates, loaded from the packaged defaults or a directory."""

    def __init__(self, directory: str | Path | None = None):
        self._dir = Path(directory) if directory is not None else None
        self._cache: dict[str, str] = {}

    def get(self, name: str) -> str:
        if name not in self._cache:
            if self._dir is not None:
                path = self._dir / f"{name}.txt"
                if not path.exists():
                    raise FileNotFoundError(f"no template {name!r} in {self._dir}")
                raw = path.read_text(encoding="utf-8")
            else:
                raw = (resources.files("gamtalk") / "templates" / f"{name}.txt") \
                    .read_text(encoding="utf-8")
            self._cache[name] = raw.rstrip("\n")
        return self._cache[name]


_DEFAULT_TEMPLATES = PromptTemplates()


def _templates(templates: PromptTemplates | None) -> PromptTemplates:
    return templates or _DEFAULT_TEMPLATES


def format_query_point(x: float | str) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(float(x))


def build_system_prompt(ctx: DatasetContext,
                        templates: PromptTemplates | None = None) -> Message:
    """The fixed system prompt with the dataset's y-axis semantics substituted in."""
    text = _templates(templates).get("system").format(target_semantics=ctx.target_semantics)
    return Message(role="system", content=text)


_SINGLE_TURN = (TaskKind.READ_VALUE, TaskKind.MONOTONICITY, TaskKind.ANOMALY,
                TaskKind.SUMMARIZE_GRAPH)


def next_turn(task: GraphTask, turn_index: int,
              templates: PromptTemplates | None = None) -> Message | None:
    """User message for the given turn of a task, or None once the task is over.

    The describe task runs three turns (pattern, surprising regions, 7-sentence
    summary); largest_jump runs two (list jumps, then pick the largest); every
    other graph task is a single question.
    """
    if turn_index not in (1, 2, 3):
        raise ValueError(f"turn_index must be 1, 2, or 3, got {turn_index}")
    t = _templates(templates)
    kind = TaskKind(task.kind)
    if kind is TaskKind.SUMMARIZE_MODEL:
        raise ValueError("summarize_model is not a per-graph task; "
                         "use build_model_summary_prompt")
    if kind is TaskKind.DESCRIBE:
        name = {1: "task_describe", 2: "task_describe_turn2", 3: "task_describe_turn3"}
        return Message(role="user", content=t.get(name[turn_index]))
    if kind is TaskKind.LARGEST_JUMP:
        if turn_index == 3:
            return None
        name = {1: "task_largest_jump_turn1", 2: "task_largest_jump_turn2"}
        return Message(role="user", content=t.get(name[turn_index]))
    if turn_index > 1:
        return None
    if kind is TaskKind.READ_VALUE:
        content = t.get("task_read_value").format(x=format_query_point(task.query_point))
    else:
        content = t.get(f"task_{kind.value}")
    return Message(role="user", content=content)


def _graph_intro(graph: GraphText, templates: PromptTemplates) -> str:
    kind = graph.feature_kind
    return templates.get(f"graph_intro_{kind.value}")


def build_graph_conversation(ctx: DatasetContext, graph: GraphText, task: GraphTask,
                             templates: PromptTemplates | None = None) -> list[Message]:
    """System prompt, dataset description, fixed acknowledgment, then the graph
    message with the task's first question. The graph text is embedded verbatim."""
    t = _templates(templates)
    first = next_turn(task, 1, templates=t)
    graph_message = "\n\n".join([_graph_intro(graph, t), graph.text, first.content])
    return [
        build_system_prompt(ctx, templates=t),
        Message(role="user", content=ctx.description),
        Message(role="assistant", content=t.get("acknowledgment")),
        Message(role="user", content=graph_message),
    ]


def build_model_summary_prompt(ctx: DatasetContext,
                               graph_summaries: Mapping[str, str],
                               importances: Mapping[str, float],
                               templates: PromptTemplates | None = None,
                               estimator: TokenEstimator | None = None,
                               ) -> tuple[list[Message], int]:
    """Aggregate per-graph summaries into one whole-model summary request.

    Summaries appear in importance-descending order together with an importance
    table. Returns the conversation and its estimated token count so callers
    can check context-window budgets.
    """
    if not graph_summaries:
        raise ValueError("graph_summaries must be non-empty")
    if set(graph_summaries) != set(importances):
        missing = set(graph_summaries) ^ set(importances)
        raise ValueError(f"summary/importance name mismatch: {sorted(missing)}")
    t = _templates(templates)
    order = sorted(graph_summaries, key=lambda name: -importances[name])

    lines = [t.get("model_summary_intro"), "", "Global feature importances:"]
    lines += [f"- {name}: {json.dumps(round(float(importances[name]), 3))}"
              for name in order]
    for name in order:
        lines += ["", f"Summary of the graph for feature '{name}':",
                  graph_summaries[name]]
    lines += ["", t.get("model_summary_request")]

    messages = [
        build_system_prompt(ctx, templates=t),
        Message(role="user", content=ctx.description),
        Message(role="assistant", content=t.get("acknowledgment")),
        Message(role="user", content="\n".join(lines)),
    ]
    est = estimator or TokenEstimator()
    tokens = sum(est.count(m.content) for m in messages)
    return messages, tokens


def validate_conversation(messages: Sequence[Message]) -> None:
    """Raise if the sequence breaks the conversation invariants: exactly one
    system message, first, and no two consecutive same-role messages."""
    if not messages:
        raise ValueError("conversation is empty")
    if messages[0].role != Role.SYSTEM.value:
        raise ValueError("conversation must start with the system message")
    if any(m.role == Role.SYSTEM.value for m in messages[1:]):
        raise ValueError("conversation must contain exactly one system message")
    for prev, cur in zip(messages, messages[1:]):
        if prev.role == cur.role:
            raise ValueError(f"two consecutive {cur.role!r} messages")
