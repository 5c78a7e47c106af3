"""Command-line interface: train, render, describe, summarize-model, eval,
perturb, serve, and a terminal chat REPL."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import runtime
from .gateway import TransportError
from .graphtext import estimate_tokens
from .harness import TaskKind
from .runtime import AppConfig
from .store import Store


def _load_config(config_path: str | None, store: str | None, transport: str | None,
                 cassette: str | None, scripted: str | None, record: str | None,
                 endpoint: str | None, model_name: str | None) -> AppConfig:
    cfg = AppConfig.from_file(config_path) if config_path else AppConfig()
    if store:
        cfg.store_root = store
    if endpoint:
        cfg.endpoint_url = endpoint
    if model_name:
        cfg.model_name = model_name
    if transport:
        spec: dict = {"kind": transport}
        if transport == "replay":
            if not cassette:
                raise click.UsageError("--transport replay needs --cassette")
            spec["cassette"] = cassette
        if transport == "scripted":
            if not scripted:
                raise click.UsageError("--transport scripted needs --scripted FILE")
            spec["responses_file"] = scripted
        if transport == "live" and record:
            spec["record"] = record
        cfg.transport = spec
    return cfg


def common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="JSON config file.")(fn)
    fn = click.option("--store", default=None, help="Store root directory.")(fn)
    fn = click.option("--transport", type=click.Choice(["live", "replay", "scripted"]),
                      default=None, help="Chat transport.")(fn)
    fn = click.option("--cassette", default=None,
                      help="Cassette name for replay transport.")(fn)
    fn = click.option("--record", default=None,
                      help="Cassette name to record live traffic into.")(fn)
    fn = click.option("--scripted", default=None, type=click.Path(exists=True),
                      help="JSON file with scripted responses.")(fn)
    fn = click.option("--endpoint", default=None, help="Chat endpoint base URL.")(fn)
    fn = click.option("--model-name", default=None, help="LLM model name.")(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    return fn


@click.group()
def main():
    """Glass-box additive models, talked about with an LLM."""


@main.command()
@common_options
@click.option("--dataset", required=True, help="Bundled dataset name.")
@click.option("--csv", "csv_path", type=click.Path(exists=True), default=None,
              help="CSV path for the Kaggle datasets.")
@click.option("--id", "model_id", default=None, help="Model id (default: dataset name).")
@click.option("--max-bins", default=64, show_default=True, type=int)
@click.option("--outer-bags", default=8, show_default=True, type=int)
@click.option("--learning-rate", default=0.1, show_default=True, type=float)
@click.option("--rounds", default=2000, show_default=True, type=int)
@click.option("--n-rows", default=2000, show_default=True, type=int,
              help="Rows for synthetic_additive.")
@click.option("--n-features", default=2, show_default=True, type=int,
              help="Features for synthetic_additive.")
@click.option("--overwrite", is_flag=True, default=False)
def train(config_path, store, transport, cassette, record, scripted, endpoint,
          model_name, seed, dataset, csv_path, model_id, max_bins, outer_bags,
          learning_rate, rounds, n_rows, n_features, overwrite):
    """Fit a model on a bundled dataset and save it to the store."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    model_id, model, _ = runtime.train_model(
        cfg, Store(cfg.paths), dataset, seed=seed, model_id=model_id,
        csv_path=csv_path, n_rows=n_rows, n_features=n_features,
        overwrite=overwrite,
        fit_overrides={"max_bins": max_bins, "outer_bags": outer_bags,
                       "learning_rate": learning_rate, "boosting_rounds": rounds})
    click.echo(f"trained {model_id}: {len(model.terms)} terms, link={model.link}, "
               f"intercept={model.intercept:.4f}")


@main.command()
@common_options
@click.option("--model-id", required=True)
@click.option("--feature", required=True)
@click.option("--budget", default=None, type=int, help="Token budget for the text.")
@click.option("--decimals", default=None, type=int)
@click.option("--no-ci", is_flag=True, default=False)
@click.option("--weights", "include_weights", is_flag=True, default=False)
@click.option("--out", "out_path", type=click.Path(), default=None)
def render(config_path, store, transport, cassette, record, scripted, endpoint,
           model_name, seed, model_id, feature, budget, decimals, no_ci,
           include_weights, out_path):
    """Render one graph to its canonical text."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    if decimals is not None:
        cfg.decimals = decimals
    model = Store(cfg.paths).load_model(model_id)
    gtext, simplified = runtime.graph_text_for(
        model, feature, cfg, budget=budget, include_ci=not no_ci,
        include_weights=include_weights)
    if out_path:
        Path(out_path).write_text(gtext.text + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path} ({estimate_tokens(gtext)} tokens"
                   + (f", {simplified.merge_count} merges" if simplified else "") + ")")
    else:
        click.echo(gtext.text)


@main.command()
@common_options
@click.option("--model-id", required=True)
@click.option("--feature", required=True)
@click.option("--budget", default=None, type=int)
def describe(config_path, store, transport, cassette, record, scripted, endpoint,
             model_name, seed, model_id, feature, budget):
    """Run the three-turn describe conversation for one graph."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    st = Store(cfg.paths)
    model = st.load_model(model_id)
    ctx = runtime.model_context(st, model_id)
    gtext, _ = runtime.graph_text_for(model, feature, cfg,
                                      budget=budget or cfg.token_budget)
    transcript = runtime.describe_graph(cfg, ctx, gtext,
                                        runtime.make_transport(cfg))
    for message in transcript:
        click.echo(f"[{message.role}]\n{message.content}\n")


@main.command("summarize-model")
@common_options
@click.option("--model-id", required=True)
@click.option("--budget", default=None, type=int)
def summarize_model_cmd(config_path, store, transport, cassette, record, scripted,
                        endpoint, model_name, seed, model_id, budget):
    """Summarize every graph, then ask for a whole-model summary."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    summary, graph_summaries, tokens = runtime.summarize_model(
        cfg, Store(cfg.paths), model_id, runtime.make_transport(cfg), budget=budget)
    click.echo(f"[aggregation prompt: ~{tokens} tokens]\n")
    for name, text in graph_summaries.items():
        click.echo(f"--- {name} ---\n{text}\n")
    click.echo(f"=== model summary ===\n{summary}")


@main.command("eval")
@common_options
@click.option("--model-id", "model_ids", multiple=True, required=True)
@click.option("--tasks", default="read_value,monotonicity,largest_jump",
              show_default=True)
@click.option("--reads-per-graph", default=None, type=int)
@click.option("--report-out", type=click.Path(), default=None,
              help="Where to write the JSON report (default: store/reports).")
def eval_cmd(config_path, store, transport, cassette, record, scripted, endpoint,
             model_name, seed, model_ids, tasks, reads_per_graph, report_out):
    """Run the benchmark tasks and write a Table-style report."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    st = Store(cfg.paths)
    try:
        task_list = [TaskKind(t.strip()) for t in tasks.split(",") if t.strip()]
    except ValueError as exc:
        raise click.UsageError(f"unknown task: {exc}")
    try:
        report = runtime.run_eval(cfg, st, list(model_ids), task_list,
                                  runtime.make_transport(cfg), seed=seed,
                                  reads_per_graph=reads_per_graph)
    except RuntimeError as exc:  # grader self-check failure
        click.echo(str(exc), err=True)
        sys.exit(3)
    run_id = report.report_id
    st.save_report(run_id, report.to_json())
    if report_out:
        Path(report_out).write_text(report.to_json(), encoding="utf-8")
    click.echo(report.to_table())
    click.echo(f"report: {run_id}")


@main.command()
@common_options
@click.option("--model-id", required=True)
@click.option("--invert-y", is_flag=True, default=False)
@click.option("--swap", nargs=2, default=None, type=str)
@click.option("--feature", default=None)
@click.option("--as-id", default=None)
def perturb(config_path, store, transport, cassette, record, scripted, endpoint,
            model_name, seed, model_id, invert_y, swap, feature, as_id):
    """Apply a counterfactual perturbation and save the variant model."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    new_id, variant = runtime.perturb_model(
        Store(cfg.paths), model_id, invert_y=invert_y, feature=feature,
        swap=tuple(swap) if swap else None, as_id=as_id)
    click.echo(f"saved {new_id} ({len(variant.terms)} terms)")


@main.command()
@common_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True, type=int)
def serve(config_path, store, transport, cassette, record, scripted, endpoint,
          model_name, seed, host, port):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    uvicorn.run(create_app(cfg), host=host, port=port)


@main.command()
@common_options
@click.option("--model-id", required=True)
@click.option("--feature", default=None)
@click.option("--session-id", default=None, help="Resume an existing session.")
def chat(config_path, store, transport, cassette, record, scripted, endpoint,
         model_name, seed, model_id, feature, session_id):
    """Interactive terminal session about a model ('exit' to quit)."""
    cfg = _load_config(config_path, store, transport, cassette, scripted, record,
                       endpoint, model_name)
    st = Store(cfg.paths)
    tr = runtime.make_transport(cfg)
    if session_id:
        session = st.load_session(session_id)
    else:
        session = runtime.create_session(st, cfg, model_id, feature=feature)
        click.echo(f"session {session.session_id}")
    while True:
        try:
            line = click.prompt("you", prompt_suffix="> ", default="",
                                show_default=False)
        except (EOFError, click.Abort):
            break
        if not line.strip():
            continue
        if line.strip() in ("exit", "quit"):
            break
        try:
            _, reply = runtime.post_user_message(st, cfg, session.session_id,
                                                 line, tr)
        except TransportError as exc:
            click.echo(f"[transport error: {exc}]", err=True)
            continue
        click.echo(f"assistant> {reply.content}")
    click.echo(f"transcript saved in session {session.session_id}")


if __name__ == "__main__":
    main()
