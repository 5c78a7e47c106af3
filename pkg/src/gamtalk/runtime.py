"""Operations shared by the CLI and the HTTP service.

Both shells call through this module so that training, rendering, chatting,
perturbing, and benchmark runs behave identically whichever way they are
invoked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

from .datasets import LoadedDataset, load_bundled_dataset
from .gam.fit import FitConfig, fit_gam
from .gam.model import GamModel
from .gateway import (
    ChatParams,
    LiveTransport,
    ReplayTransport,
    ResponseCache,
    ScriptedTransport,
    Transport,
    complete_chat,
)
from .graphtext import (
    GraphText,
    RenderOptions,
    SimplifyResult,
    TokenEstimator,
    render_graph_text,
    simplify_graph,
)
from .harness import (
    BenchmarkReport,
    TaskKind,
    grader_self_check,
    invert_model,
    merge_reports,
    plan_cases,
    run_benchmark,
    swap_model_categories,
)
from .prompts import (
    DatasetContext,
    GraphTask,
    Message,
    PromptTemplates,
    build_graph_conversation,
    build_model_summary_prompt,
    build_system_prompt,
    next_turn,
)
from .store import Session, Store, StorePaths


@dataclass
class AppConfig:
    """Run configuration; file values are overridden by explicit flags."""

    store_root: str = "gamtalk-store"
    endpoint_url: str = "https://api.openai.com/v1"
    model_name: str = "gpt-4-0613"
    api_key_env: str = "GAMTALK_API_KEY"
    temperature: float = 0.0
    max_output_tokens: int = 1024
    request_timeout: float = 60.0
    max_retries: int = 3
    concurrency_limit: int = 4
    token_budget: int | None = None
    decimals: int = 3
    template_dir: str | None = None
    cache_enabled: bool = False
    transport: dict = field(default_factory=lambda: {"kind": "live"})

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "AppConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_dict({**data, **overrides})

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AppConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @property
    def paths(self) -> StorePaths:
        return StorePaths(Path(self.store_root))

    def chat_params(self) -> ChatParams:
        return ChatParams(model_name=self.model_name, temperature=self.temperature,
                          max_output_tokens=self.max_output_tokens,
                          request_timeout=self.request_timeout,
                          max_retries=self.max_retries)

    def templates(self) -> PromptTemplates:
        return PromptTemplates(self.template_dir)

    def render_options(self, include_ci: bool = True,
                       include_weights: bool = False) -> RenderOptions:
        return RenderOptions(decimals=self.decimals, include_ci=include_ci,
                             include_weights=include_weights)


def make_transport(config: AppConfig, spec: Mapping[str, Any] | None = None) -> Transport:
    """Build a transport from a spec dict: {"kind": "live"|"replay"|"scripted", ...}.

    live accepts "record" (cassette name) to capture traffic; replay needs
    "cassette"; scripted needs "responses" (list of strings) or "responses_file".
    """
    spec = dict(spec if spec is not None else config.transport)
    kind = spec.get("kind", "live")
    paths = config.paths
    if kind == "live":
        record = spec.get("record")
        return LiveTransport(
            endpoint_url=spec.get("endpoint_url", config.endpoint_url),
            api_key_env=spec.get("api_key_env", config.api_key_env),
            record_path=paths.cassette_path(record) if record else None,
            concurrency_limit=config.concurrency_limit,
        )
    if kind == "replay":
        cassette = spec.get("cassette")
        if not cassette:
            raise ValueError("replay transport needs a cassette name")
        return ReplayTransport(paths.cassette_path(cassette))
    if kind == "scripted":
        responses = spec.get("responses")
        if responses is None and spec.get("responses_file"):
            responses = json.loads(Path(spec["responses_file"]).read_text(encoding="utf-8"))
        if not responses:
            raise ValueError("scripted transport needs responses")
        return ScriptedTransport(list(responses))
    raise ValueError(f"unknown transport kind {kind!r}")


def make_cache(config: AppConfig) -> ResponseCache | None:
    return ResponseCache(config.paths.cache) if config.cache_enabled else None


# -- training ------------------------------------------------------------------

def train_model(config: AppConfig, store: Store, dataset: str, seed: int = 0,
                model_id: str | None = None, csv_path: str | None = None,
                fit_overrides: Mapping[str, Any] | None = None,
                n_rows: int = 2000, n_features: int = 2,
                overwrite: bool = False) -> tuple[str, GamModel, LoadedDataset]:
    loaded = load_bundled_dataset(dataset, csv_path=csv_path, seed=seed,
                                  n_rows=n_rows, n_features=n_features)
    fit_config = FitConfig(**{"random_seed": seed, **(fit_overrides or {})})
    model = fit_gam(loaded.table, target=loaded.target, config=fit_config,
                    link=loaded.link,
                    target_description=loaded.context.target_semantics)
    model_id = model_id or dataset
    store.save_model(model_id, model, meta={
        "dataset": dataset,
        "seed": seed,
        "description": loaded.context.description,
        "target_semantics": loaded.context.target_semantics,
    }, overwrite=overwrite)
    return model_id, model, loaded


def model_context(store: Store, model_id: str) -> DatasetContext:
    """Dataset context for a stored model; falls back to the model's own
    target description when the model was uploaded without one."""
    meta = store.load_model_meta(model_id)
    model = store.load_model(model_id)
    target_semantics = meta.get("target_semantics") or model.target_description \
        or "the model's prediction"
    description = meta.get("description") or (
        f"This dataset is used to model {target_semantics}.")
    return DatasetContext(description=description, target_semantics=target_semantics)


# -- graph text -----------------------------------------------------------------

def graph_text_for(model: GamModel, feature: str, config: AppConfig,
                   budget: int | None = None, include_ci: bool = True,
                   include_weights: bool = False,
                   estimator: TokenEstimator | None = None
                   ) -> tuple[GraphText, SimplifyResult | None]:
    """Canonical text of one graph, simplified to ``budget`` tokens if given."""
    term = model.term(feature)
    opts = config.render_options(include_ci, include_weights)
    estimator = estimator or TokenEstimator()
    if budget is None:
        return render_graph_text(term, opts), None
    result = simplify_graph(term, budget, estimator, opts)
    return render_graph_text(result.term, opts), result


# -- perturbation -----------------------------------------------------------------

def perturb_model(store: Store, model_id: str, invert_y: bool = False,
                  feature: str | None = None,
                  swap: tuple[str, str] | None = None,
                  as_id: str | None = None) -> tuple[str, GamModel]:
    """Apply a counterfactual perturbation, saving the variant copy-on-write."""
    if invert_y == bool(swap):
        raise ValueError("choose exactly one of invert_y or swap")
    model = store.load_model(model_id)
    if invert_y:
        variant = invert_model(model, feature)
        suffix = "inv" if feature is None else f"inv-{feature}"
    else:
        if feature is None:
            raise ValueError("category swap needs a feature")
        variant = swap_model_categories(model, feature, swap[0], swap[1])
        suffix = f"swap-{feature}"
    new_id = as_id or f"{model_id}--{suffix}"
    meta = store.load_model_meta(model_id)
    meta = {k: v for k, v in meta.items() if k != "created"}
    meta.update({"perturbed_from": model_id,
                 "perturbation": {"invert_y": invert_y, "feature": feature,
                                  "swap": list(swap) if swap else None}})
    store.save_model(new_id, variant, meta=meta, overwrite=as_id is None)
    return new_id, variant


# -- sessions ----------------------------------------------------------------------

def create_session(store: Store, config: AppConfig, model_id: str,
                   feature: str | None = None, description: str | None = None,
                   target_semantics: str | None = None) -> Session:
    """New session seeded with the system prompt, the dataset description, and
    the fixed acknowledgment."""
    model = store.load_model(model_id)
    if feature is not None:
        model.term(feature)  # raises MissingFeatureError for unknown features
    base = model_context(store, model_id)
    ctx = DatasetContext(description=description or base.description,
                         target_semantics=target_semantics or base.target_semantics)
    templates = config.templates()
    prefix = [
        build_system_prompt(ctx, templates),
        Message(role="user", content=ctx.description),
        Message(role="assistant", content=templates.get("acknowledgment")),
    ]
    session = Session(session_id=store.new_session_id(), model_id=model_id,
                      feature=feature, context=ctx, transcript=prefix)
    store.save_session(session)
    return session


def post_user_message(store: Store, config: AppConfig, session_id: str, content: str,
                      transport: Transport, budget: int | None = None
                      ) -> tuple[Session, Message]:
    """Append a user question and the assistant's reply to a session.

    The first question about a session's active graph embeds the graph text
    (simplified to the configured token budget when one is set).
    """
    if not content or not content.strip():
        raise ValueError("message content must be non-empty")
    templates = config.templates()
    with store.session_lock(session_id):
        session = store.load_session(session_id)
        text = content
        if session.feature is not None and not session.graph_presented:
            model = store.load_model(session.model_id)
            gtext, _ = graph_text_for(model, session.feature, config,
                                      budget=budget or config.token_budget)
            intro = templates.get(f"graph_intro_{gtext.feature_kind.value}")
            text = "\n\n".join([intro, gtext.text, content])
            session.graph_presented = True
        user = Message(role="user", content=text)
        reply = complete_chat(session.transcript + [user], config.chat_params(),
                              transport, make_cache(config))
        session.transcript.extend([user, reply])
        store.save_session(session)
    return session, reply


# -- describe / summarize ------------------------------------------------------------

def describe_graph(config: AppConfig, ctx: DatasetContext, gtext: GraphText,
                   transport: Transport, task_kind: TaskKind = TaskKind.DESCRIBE
                   ) -> list[Message]:
    """Run the multi-turn conversation for one graph; returns the full transcript."""
    templates = config.templates()
    params = config.chat_params()
    cache = make_cache(config)
    task = GraphTask(kind=task_kind)
    conversation = build_graph_conversation(ctx, gtext, task, templates)
    conversation.append(complete_chat(conversation, params, transport, cache))
    for turn in (2, 3):
        question = next_turn(task, turn, templates)
        if question is None:
            break
        conversation.append(question)
        conversation.append(complete_chat(conversation, params, transport, cache))
    return conversation


def summarize_model(config: AppConfig, store: Store, model_id: str,
                    transport: Transport, budget: int | None = None
                    ) -> tuple[str, dict[str, str], int]:
    """Per-graph describe conversations, aggregated into a whole-model summary.

    Returns (model summary, per-graph summaries, token estimate of the final
    aggregation prompt).
    """
    model = store.load_model(model_id)
    ctx = model_context(store, model_id)
    summaries: dict[str, str] = {}
    for term in model.terms:
        gtext, _ = graph_text_for(model, term.feature_name, config,
                                  budget=budget or config.token_budget)
        transcript = describe_graph(config, ctx, gtext, transport)
        summaries[term.feature_name] = transcript[-1].content
    importances = dict(zip(model.feature_names, model.importances))
    messages, tokens = build_model_summary_prompt(
        ctx, summaries, importances, templates=config.templates())
    reply = complete_chat(messages, config.chat_params(), transport,
                          make_cache(config))
    return reply.content, summaries, tokens


# -- evaluation -------------------------------------------------------------------

def run_eval(config: AppConfig, store: Store, model_ids: Sequence[str],
             tasks: Sequence[TaskKind], transport: Transport, seed: int = 0,
             reads_per_graph: int | None = None) -> BenchmarkReport:
    """Benchmark one or more stored models and merge the reports.

    Runs the grader soundness self-check first; a failing grader aborts the run.
    """
    params = config.chat_params()
    failures: list[str] = []
    for model_id in model_ids:
        model = store.load_model(model_id)
        failures += grader_self_check(
            plan_cases(model, tasks, seed, reads_per_graph, config.decimals,
                       graph_prefix=f"{model_id}/"), config.decimals)
    if failures:
        raise RuntimeError("grader self-check failed: " + "; ".join(failures[:5]))

    reports = []
    for model_id in model_ids:
        model = store.load_model(model_id)
        ctx = model_context(store, model_id)
        reports.append(run_benchmark(
            model, tasks, transport, params, seed, ctx,
            reads_per_graph=reads_per_graph, decimals=config.decimals,
            templates=config.templates(), cache=make_cache(config),
            concurrency=config.concurrency_limit,
            graph_prefix=f"{model_id}/"))
    merged = merge_reports(reports, metadata={
        **dict(reports[0].metadata), "models": list(model_ids),
        "tasks": [TaskKind(t).value for t in tasks],
    })
    return merged
