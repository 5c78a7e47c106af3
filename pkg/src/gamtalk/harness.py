"""Exact oracles, counterfactual perturbations, graders, and the benchmark runner.

Every baseline task has an algorithmic ground truth (value lookup, non-strict
monotonicity over bin means, max absolute adjacent difference); LLM answers are
parsed out of free text and compared against it. Reports carry per-case
verdicts plus per-task success/total counts.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

import numpy as np

from .gam.model import (
    CategoricalAxis,
    ContinuousAxis,
    GamModel,
    GraphTerm,
    term_value_at,
)
from .gateway import ChatParams, LiveTransport, Transport, TransportError, complete_chat
from .graphtext import RenderOptions, render_graph_text, required_decimals
from .prompts import (
    DatasetContext,
    GraphTask,
    PromptTemplates,
    TaskKind,
    build_graph_conversation,
    next_turn,
)

REPORT_SCHEMA = "gamtalk-report/1"
READ_VALUE_CASES_TARGET = 75  # per-graph sample count defaults to ceil(75 / graphs)

TASK_LABELS = {
    TaskKind.READ_VALUE: "Reading a Value from a Graph",
    TaskKind.MONOTONICITY: "Deciding Monotonicity",
    TaskKind.LARGEST_JUMP: "Finding the Largest Jump",
}
BASELINE_TASKS = (TaskKind.READ_VALUE, TaskKind.MONOTONICITY, TaskKind.LARGEST_JUMP)


class OracleError(ValueError):
    """The oracle is undefined for this graph (e.g. adjacency without an order)."""


class MonotonicityClass(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    NOT_MONOTONE = "not_monotone"


@dataclass(frozen=True)
class JumpResult:
    boundary_x: float
    delta: float
    magnitude: float

    def __post_init__(self):
        if not math.isclose(self.magnitude, abs(self.delta), rel_tol=0, abs_tol=0):
            raise ValueError("magnitude must equal |delta|")


# -- oracles -------------------------------------------------------------------

def oracle_value_at(term: GraphTerm, x) -> float:
    """Ground truth for value reading; same boundary convention as prediction."""
    return term_value_at(term, x)


def oracle_monotonicity(term: GraphTerm) -> MonotonicityClass:
    """Non-strict classification of the bin-mean sequence."""
    diffs = np.diff(term.means)
    if len(diffs) == 0 or np.all(diffs == 0):
        return MonotonicityClass.CONSTANT
    if np.all(diffs >= 0):
        return MonotonicityClass.INCREASING
    if np.all(diffs <= 0):
        return MonotonicityClass.DECREASING
    return MonotonicityClass.NOT_MONOTONE


def oracle_largest_jump(term: GraphTerm) -> JumpResult:
    """Largest |difference| between adjacent bin means; ties go to the leftmost
    boundary. Categorical axes have no adjacency order and are rejected."""
    if isinstance(term.axis, CategoricalAxis):
        raise OracleError(f"{term.feature_name}: largest-jump is undefined for "
                          "categorical axes (no adjacency order)")
    if term.n_bins < 2:
        raise OracleError(f"{term.feature_name}: largest-jump needs at least two bins")
    diffs = np.diff(term.means)
    i = int(np.argmax(np.abs(diffs)))  # first max = smallest boundary
    delta = float(diffs[i])
    return JumpResult(boundary_x=float(term.axis.edges[i + 1]),
                      delta=delta, magnitude=abs(delta))


def near_monotonicity_scores(term: GraphTerm) -> dict[str, float]:
    """Fraction of adjacent pairs consistent with each direction ("honest
    mistake" diagnostics, recorded in verdict metadata)."""
    diffs = np.diff(term.means)
    if len(diffs) == 0:
        return {"near_increasing": 1.0, "near_decreasing": 1.0}
    return {"near_increasing": float(np.mean(diffs >= 0)),
            "near_decreasing": float(np.mean(diffs <= 0))}


# -- counterfactual perturbations -----------------------------------------------

def perturb_invert_y(term: GraphTerm) -> GraphTerm:
    """Mirror the graph on the y-axis; the CI band flips with it."""
    return replace(
        term,
        means=tuple(-v for v in term.means),
        lower_ci=tuple(-v for v in term.upper_ci),
        upper_ci=tuple(-v for v in term.lower_ci),
    )


def perturb_swap_categories(term: GraphTerm, a: str, b: str) -> GraphTerm:
    """Exchange two categories' means, bounds, and weights; all else unchanged."""
    if not isinstance(term.axis, CategoricalAxis):
        raise OracleError(f"{term.feature_name}: category swap needs a categorical term")
    cats = term.axis.categories
    for label in (a, b):
        if label not in cats:
            raise OracleError(f"{term.feature_name}: unknown category {label!r}")
    ia, ib = cats.index(a), cats.index(b)

    def swapped(values: tuple[float, ...]) -> tuple[float, ...]:
        out = list(values)
        out[ia], out[ib] = out[ib], out[ia]
        return tuple(out)

    return replace(term, means=swapped(term.means), lower_ci=swapped(term.lower_ci),
                   upper_ci=swapped(term.upper_ci), weights=swapped(term.weights))


def invert_model(model: GamModel, feature: str | None = None) -> GamModel:
    """Y-invert the whole model's graphs, or just one feature's graph."""
    terms = tuple(
        perturb_invert_y(t) if feature is None or t.feature_name == feature else t
        for t in model.terms)
    if feature is not None and feature not in model.feature_names:
        raise OracleError(f"model has no feature {feature!r}")
    return replace(model, terms=terms)


def swap_model_categories(model: GamModel, feature: str, a: str, b: str) -> GamModel:
    terms = tuple(
        perturb_swap_categories(t, a, b) if t.feature_name == feature else t
        for t in model.terms)
    if feature not in model.feature_names:
        raise OracleError(f"model has no feature {feature!r}")
    return replace(model, terms=terms)


# -- answer parsing --------------------------------------------------------------

_NUMBER = re.compile(r"[-+]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][-+]?\d+)?")
_INTERVAL = re.compile(
    r"\(\s*[-+]?(?:\d+\.?\d*|\.\d+)\s*,\s*[-+]?(?:\d+\.?\d*|\.\d+)\s*\)")
_MONO_PATTERNS = [
    (re.compile(r"(?:not|non)[\s-]*monoton(?:e|ic(?:ally)?)", re.IGNORECASE),
     MonotonicityClass.NOT_MONOTONE),
    (re.compile(r"increasing", re.IGNORECASE), MonotonicityClass.INCREASING),
    (re.compile(r"decreasing", re.IGNORECASE), MonotonicityClass.DECREASING),
    (re.compile(r"constant|flat", re.IGNORECASE), MonotonicityClass.CONSTANT),
]


def _normalize(text: str) -> str:
    return text.replace("−", "-").replace("–", "-")


def _numbers_with_spans(text: str) -> list[tuple[float, int, int]]:
    return [(float(m.group()), m.start(), m.end()) for m in _NUMBER.finditer(text)]


def parse_numeric_answer(response: str) -> float | None:
    """The final decimal number in the response.

    Numbers inside interval notation "(a, b)" are skipped when a standalone
    number follows the interval; with no standalone number after the last
    interval the final number wins regardless. Returns None when the response
    contains no number at all.
    """
    text = _normalize(response)
    numbers = _numbers_with_spans(text)
    if not numbers:
        return None
    interval_spans = [(m.start(), m.end()) for m in _INTERVAL.finditer(text)]

    def in_interval(start: int, end: int) -> bool:
        return any(s <= start and end <= e for s, e in interval_spans)

    last_interval_end = max((e for _, e in interval_spans), default=-1)
    trailing = [v for v, s, e in numbers
                if s >= last_interval_end and not in_interval(s, e)]
    return trailing[-1] if trailing else numbers[-1][0]


def parse_monotonicity_answer(response: str) -> MonotonicityClass | None:
    """The final monotonicity classification keyword in the response."""
    text = _normalize(response)
    best: tuple[int, MonotonicityClass] | None = None
    for pattern, cls in _MONO_PATTERNS:  # NOT_MONOTONE first wins start-position ties
        for m in pattern.finditer(text):
            if best is None or m.start() > best[0]:
                best = (m.start(), cls)
    return best[1] if best else None


# -- grading -----------------------------------------------------------------------

@dataclass(frozen=True)
class GradeOptions:
    decimals: int = 3
    term: GraphTerm | None = None  # graph context, required for largest_jump


@dataclass(frozen=True)
class CaseVerdict:
    task: TaskKind
    graph_id: str
    truth: Any
    llm_answer: str
    parsed_answer: Any
    correct: bool
    unparseable: bool = False
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        truth = self.truth
        if isinstance(truth, JumpResult):
            truth = {"boundary_x": truth.boundary_x, "delta": truth.delta,
                     "magnitude": truth.magnitude}
        if isinstance(truth, MonotonicityClass):
            truth = truth.value
        parsed = self.parsed_answer
        if isinstance(parsed, MonotonicityClass):
            parsed = parsed.value
        return {
            "task": self.task.value,
            "graph_id": self.graph_id,
            "truth": truth,
            "llm_answer": self.llm_answer,
            "parsed_answer": parsed,
            "correct": self.correct,
            "unparseable": self.unparseable,
            "metadata": dict(self.metadata),
        }


def _half_ulp(decimals: int) -> float:
    return 0.5 * 10.0 ** (-decimals) + 1e-12


def _jump_context(term: GraphTerm, truth: JumpResult) -> tuple[float, float, float]:
    assert isinstance(term.axis, ContinuousAxis)
    edges = term.axis.edges
    i = edges.index(truth.boundary_x) - 1
    width_tol = max(edges[i + 1] - edges[i], edges[i + 2] - edges[i + 1])
    return term.means[i], term.means[i + 1], width_tol


def grade_case(task: TaskKind, truth, response: str,
               opts: GradeOptions | None = None, graph_id: str = "") -> CaseVerdict:
    """Grade one LLM response against its oracle truth.

    read_value tolerates half a unit in the last rendered decimal; monotonicity
    matches the final classification keyword (a constant truth accepts any of
    increasing/decreasing/constant); largest_jump accepts either the boundary
    within one bin width or both adjacent bin values at rendering precision.
    Unparseable responses are incorrect, never errors.
    """
    opts = opts or GradeOptions()
    task = TaskKind(task)
    metadata: dict[str, Any] = {}

    if task is TaskKind.READ_VALUE:
        parsed: Any = parse_numeric_answer(response)
        correct = parsed is not None and abs(parsed - float(truth)) <= _half_ulp(opts.decimals)
        unparseable = parsed is None
    elif task is TaskKind.MONOTONICITY:
        truth = MonotonicityClass(truth)
        parsed = parse_monotonicity_answer(response)
        if truth is MonotonicityClass.CONSTANT:
            accepted = (MonotonicityClass.INCREASING, MonotonicityClass.DECREASING,
                        MonotonicityClass.CONSTANT)
            correct = parsed in accepted
        else:
            correct = parsed == truth
        unparseable = parsed is None
        if opts.term is not None:
            metadata.update(near_monotonicity_scores(opts.term))
    elif task is TaskKind.LARGEST_JUMP:
        if opts.term is None:
            raise ValueError("largest_jump grading needs the graph term in GradeOptions")
        if not isinstance(truth, JumpResult):
            raise ValueError("largest_jump truth must be a JumpResult")
        left, right, width_tol = _jump_context(opts.term, truth)
        numbers = [v for v, _, _ in _numbers_with_spans(_normalize(response))]
        tol = _half_ulp(opts.decimals)
        named_boundary = any(abs(v - truth.boundary_x) <= width_tol for v in numbers)
        named_endpoints = (any(abs(v - round(left, opts.decimals)) <= tol for v in numbers)
                           and any(abs(v - round(right, opts.decimals)) <= tol
                                   for v in numbers))
        parsed = numbers[-1] if numbers else None
        correct = bool(numbers) and (named_boundary or named_endpoints)
        unparseable = not numbers
        metadata["boundary_tolerance"] = width_tol
    else:
        raise ValueError(f"task {task.value!r} has no exact grader")

    return CaseVerdict(task=task, graph_id=graph_id, truth=truth, llm_answer=response,
                       parsed_answer=parsed, correct=correct, unparseable=unparseable,
                       metadata=metadata)


# -- benchmark planning and execution ------------------------------------------------

@dataclass(frozen=True)
class PlannedCase:
    task: TaskKind
    graph_id: str
    term: GraphTerm
    truth: Any
    query_point: float | str | None = None
    turns: int = 1      # chat completions needed (largest_jump runs two)
    decimals: int = 3   # rendering/grading precision this graph needs


def _continuous_jumpable(term: GraphTerm) -> bool:
    return isinstance(term.axis, ContinuousAxis) and term.n_bins >= 2


def plan_cases(model: GamModel, tasks: Sequence[TaskKind], seed: int,
               reads_per_graph: int | None = None, decimals: int = 3,
               graph_prefix: str = "") -> list[PlannedCase]:
    """Deterministic case list for one model: tasks in canonical order, graphs
    in model order, query points drawn from ``seed``."""
    tasks = [TaskKind(t) for t in tasks]
    rng = np.random.default_rng(seed)
    cases: list[PlannedCase] = []
    per_graph = reads_per_graph or max(1, math.ceil(READ_VALUE_CASES_TARGET
                                                    / max(1, len(model.terms))))
    for task in BASELINE_TASKS:
        if task not in tasks:
            continue
        for term in model.terms:
            gid = graph_prefix + term.feature_name
            d = required_decimals(term, base=decimals)
            if task is TaskKind.READ_VALUE:
                for _ in range(per_graph):
                    if isinstance(term.axis, ContinuousAxis):
                        lo, hi = term.axis.edges[0], term.axis.edges[-1]
                        x: float | str = float(np.clip(
                            round(float(rng.uniform(lo, hi)), d), lo, hi))
                    else:
                        x = term.axis.categories[int(rng.integers(term.n_bins))]
                    cases.append(PlannedCase(task, gid, term,
                                             truth=oracle_value_at(term, x),
                                             query_point=x, decimals=d))
            elif task is TaskKind.MONOTONICITY:
                cases.append(PlannedCase(task, gid, term,
                                         truth=oracle_monotonicity(term),
                                         decimals=d))
                inverted = perturb_invert_y(term)
                cases.append(PlannedCase(task, gid + "/inverted", inverted,
                                         truth=oracle_monotonicity(inverted),
                                         decimals=d))
            elif task is TaskKind.LARGEST_JUMP:
                if _continuous_jumpable(term):
                    cases.append(PlannedCase(task, gid, term,
                                             truth=oracle_largest_jump(term),
                                             turns=2, decimals=d))
    return cases


def oracle_response(case: PlannedCase, decimals: int | None = None) -> list[str]:
    """Scripted responses that restate the oracle truth, one per chat turn.

    Used for harness soundness checks: grading these must always succeed.
    """
    decimals = case.decimals if decimals is None else decimals
    fmt = lambda v: json.dumps(round(float(v), decimals))
    if case.task is TaskKind.READ_VALUE:
        return [f"The mean value of the graph at {case.query_point} is {fmt(case.truth)}."]
    if case.task is TaskKind.MONOTONICITY:
        phrasing = {
            MonotonicityClass.INCREASING: "The graph is monotone increasing.",
            MonotonicityClass.DECREASING: "The graph is monotone decreasing.",
            MonotonicityClass.CONSTANT: "The graph is constant.",
            MonotonicityClass.NOT_MONOTONE: "The graph is not monotone.",
        }
        return [phrasing[case.truth]]
    if case.task is TaskKind.LARGEST_JUMP:
        term, truth = case.term, case.truth
        assert isinstance(term.axis, ContinuousAxis)
        i = term.axis.edges.index(truth.boundary_x) - 1
        return [
            "The most important jumps are at the interval boundaries with the "
            "largest changes in value.",
            f"The largest jump is at {fmt(truth.boundary_x)}, where the value "
            f"changes from {fmt(term.means[i])} to {fmt(term.means[i + 1])}.",
        ]
    raise ValueError(f"no oracle response for task {case.task}")


def grader_self_check(cases: Sequence[PlannedCase], decimals: int | None = None
                      ) -> list[str]:
    """Sanity-check the graders against every planned case: restating the truth
    must grade correct and an empty answer incorrect. Returns failure strings."""
    failures = []
    for case in cases:
        opts = GradeOptions(decimals=decimals or case.decimals, term=case.term)
        echo = grade_case(case.task, case.truth, oracle_response(case, decimals)[-1],
                          opts, case.graph_id)
        if not echo.correct:
            failures.append(f"echo graded incorrect: {case.task.value} {case.graph_id}")
        blank = grade_case(case.task, case.truth, "", opts, case.graph_id)
        if blank.correct:
            failures.append(f"empty answer graded correct: {case.task.value} "
                            f"{case.graph_id}")
    return failures


@dataclass(frozen=True)
class BenchmarkReport:
    """Per-task success/total counts plus ordered per-case verdicts."""

    task_counts: Mapping[str, tuple[int, int]]
    verdicts: tuple[CaseVerdict, ...]
    metadata: Mapping[str, Any]

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "metadata": dict(self.metadata),
            "tasks": {task: {"successes": s, "total": t, "label":
                             TASK_LABELS[TaskKind(task)]}
                      for task, (s, t) in self.task_counts.items()},
            "cases": [v.to_dict() for v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @property
    def report_id(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()[:12]

    def to_table(self) -> str:
        """Human-readable success table, one row per task."""
        rows = [(TASK_LABELS[TaskKind(task)], f"{s}/{t}")
                for task, (s, t) in self.task_counts.items()]
        width = max((len(r[0]) for r in rows), default=4)
        lines = [f"{'Task'.ljust(width)}  {self.metadata.get('model_name', '')}".rstrip()]
        lines += [f"{label.ljust(width)}  {score}" for label, score in rows]
        return "\n".join(lines)


def _tally(verdicts: Sequence[CaseVerdict]) -> dict[str, tuple[int, int]]:
    counts: dict[str, tuple[int, int]] = {}
    for task in BASELINE_TASKS:
        sub = [v for v in verdicts if v.task is task]
        if sub:
            counts[task.value] = (sum(v.correct for v in sub), len(sub))
    return counts


def merge_reports(reports: Sequence[BenchmarkReport],
                  metadata: Mapping[str, Any] | None = None) -> BenchmarkReport:
    """Combine per-model reports into one suite report (totals summed,
    verdicts concatenated in report order)."""
    verdicts = tuple(v for r in reports for v in r.verdicts)
    return BenchmarkReport(task_counts=_tally(verdicts), verdicts=verdicts,
                           metadata=dict(metadata or (reports[0].metadata if reports else {})))


def _run_case(case: PlannedCase, ctx: DatasetContext, params: ChatParams,
              transport: Transport, templates: PromptTemplates | None,
              cache=None) -> CaseVerdict:
    opts = GradeOptions(decimals=case.decimals, term=case.term)
    gtext = render_graph_text(case.term, RenderOptions(decimals=case.decimals))
    task = GraphTask(kind=case.task, query_point=case.query_point)
    conversation = build_graph_conversation(ctx, gtext, task, templates=templates)
    try:
        reply = complete_chat(conversation, params, transport, cache)
        for turn in range(2, case.turns + 1):
            conversation = conversation + [reply, next_turn(task, turn, templates)]
            reply = complete_chat(conversation, params, transport, cache)
    except TransportError as exc:
        return CaseVerdict(task=case.task, graph_id=case.graph_id, truth=case.truth,
                           llm_answer="", parsed_answer=None, correct=False,
                           unparseable=True, metadata={"transport_error": str(exc)})
    return grade_case(case.task, case.truth, reply.content, opts, case.graph_id)


def run_benchmark(model: GamModel, tasks: Sequence[TaskKind], transport: Transport,
                  params: ChatParams, seed: int, ctx: DatasetContext,
                  reads_per_graph: int | None = None, decimals: int = 3,
                  templates: PromptTemplates | None = None, cache=None,
                  concurrency: int = 1, graph_prefix: str = "",
                  metadata: Mapping[str, Any] | None = None) -> BenchmarkReport:
    """Run the baseline tasks over every graph of a model and grade the answers.

    Value reading samples points uniformly from each graph's x-domain under
    ``seed``; monotonicity evaluates each graph and its y-inverted twin;
    largest-jump runs one chain-of-thought case per continuous graph. Transport
    failures are recorded per case as incorrect, never aborting the run, and
    verdicts come back in deterministic case order.
    """
    if not model.terms:
        raise ValueError("model has no terms to benchmark")
    cases = plan_cases(model, tasks, seed, reads_per_graph, decimals, graph_prefix)
    live = isinstance(transport, LiveTransport)
    if live and concurrency > 1:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            futures = [pool.submit(_run_case, c, ctx, params, transport,
                                   templates, cache) for c in cases]
            verdicts = tuple(f.result() for f in futures)
    else:
        verdicts = tuple(_run_case(c, ctx, params, transport, templates, cache)
                         for c in cases)
    meta = {
        "model_name": params.model_name,
        "transport": type(transport).__name__.removesuffix("Transport").lower(),
        "seed": seed,
        "decimals": decimals,
        "reads_per_graph": reads_per_graph or max(
            1, math.ceil(READ_VALUE_CASES_TARGET / max(1, len(model.terms)))),
        "read_value_allocation": "uniform per graph; paper does not state the split",
    }
    meta.update(metadata or {})
    return BenchmarkReport(task_counts=_tally(verdicts), verdicts=verdicts, metadata=meta)
