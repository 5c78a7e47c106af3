"""HTTP service exposing models, graph texts, sessions, perturbations, and eval runs.

State is durable under the store root; sessions are single-writer (concurrent
posts to one session serialize in arrival order) and every write is atomic.
"""

from __future__ import annotations

import threading
import uuid
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import runtime
from .gam.model import MissingFeatureError, model_from_dict, model_to_dict
from .gateway import TransportError
from .graphtext import estimate_tokens
from .harness import TaskKind
from .runtime import AppConfig
from .store import DuplicateError, NotFoundError, Store


class TrainSpec(BaseModel):
    dataset: str
    seed: int = 0
    csv_path: str | None = None
    n_rows: int = 2000
    n_features: int = 2
    fit: dict[str, Any] = {}


class ModelUpload(BaseModel):
    id: str | None = None
    model: dict | None = None
    train: TrainSpec | None = None


class PerturbRequest(BaseModel):
    invert_y: bool = False
    swap: list[str] | None = None
    feature: str | None = None
    as_id: str | None = None


class SessionCreate(BaseModel):
    model_id: str
    feature: str | None = None
    description: str | None = None
    target_semantics: str | None = None


class MessageIn(BaseModel):
    content: str
    budget: int | None = None


class EvalRequest(BaseModel):
    model_ids: list[str]
    tasks: list[str] = [t.value for t in (TaskKind.READ_VALUE, TaskKind.MONOTONICITY,
                                          TaskKind.LARGEST_JUMP)]
    seed: int = 0
    reads_per_graph: int | None = None
    transport: dict[str, Any] | None = None
    background: bool = False


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, (NotFoundError, MissingFeatureError)):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, DuplicateError):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, TransportError):
        return HTTPException(status_code=502, detail={
            "error": str(exc), "attempts": exc.attempts})
    return HTTPException(status_code=400, detail=str(exc))


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    store = Store(config.paths)
    app = FastAPI(title="gamtalk", version="0.1.0")
    run_status: dict[str, str] = {}
    run_lock = threading.Lock()
    chat_transport: list = []  # lazy singleton; session chat is a single consumer

    def session_transport():
        if not chat_transport:
            chat_transport.append(runtime.make_transport(config))
        return chat_transport[0]

    def fresh_transport(spec: dict | None = None):
        return runtime.make_transport(config, spec)

    # -- models ---------------------------------------------------------------

    @app.post("/models", status_code=201)
    def create_model(body: ModelUpload):
        try:
            if (body.model is None) == (body.train is None):
                raise ValueError("provide exactly one of 'model' or 'train'")
            if body.model is not None:
                model = model_from_dict(body.model)
                model_id = body.id or uuid.uuid4().hex[:12]
                store.save_model(model_id, model, meta={})
            else:
                spec = body.train
                model_id, model, _ = runtime.train_model(
                    config, store, spec.dataset, seed=spec.seed,
                    model_id=body.id, csv_path=spec.csv_path,
                    fit_overrides=spec.fit, n_rows=spec.n_rows,
                    n_features=spec.n_features)
            return {"id": model_id, "n_terms": len(model.terms), "link": model.link}
        except Exception as exc:
            raise _http_error(exc)

    @app.get("/models")
    def list_models():
        out = []
        for model_id in store.list_models():
            model = store.load_model(model_id)
            meta = store.load_model_meta(model_id)
            out.append({"id": model_id, "n_terms": len(model.terms),
                        "link": model.link,
                        "target_description": model.target_description,
                        "dataset": meta.get("dataset")})
        return {"models": out}

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        try:
            return {"id": model_id, "model": store.model_dict(model_id)}
        except Exception as exc:
            raise _http_error(exc)

    @app.get("/models/{model_id}/graphs")
    def list_graphs(model_id: str):
        try:
            model = store.load_model(model_id)
        except Exception as exc:
            raise _http_error(exc)
        return {"graphs": [
            {"feature": t.feature_name, "kind": t.kind.value, "n_bins": t.n_bins,
             "importance": model.importances[i]}
            for i, t in enumerate(model.terms)]}

    @app.get("/models/{model_id}/graphs/{feature}/text")
    def graph_text(model_id: str, feature: str, budget: int | None = None,
                   decimals: int | None = None, include_ci: bool = True):
        try:
            model = store.load_model(model_id)
            cfg = config if decimals is None else runtime.AppConfig(
                **{**config.__dict__, "decimals": decimals})
            gtext, simplified = runtime.graph_text_for(
                model, feature, cfg, budget=budget, include_ci=include_ci)
        except Exception as exc:
            raise _http_error(exc)
        return {"feature": feature, "text": gtext.text,
                "tokens": estimate_tokens(gtext),
                "budget": budget,
                "merged_bins": simplified.merge_count if simplified else 0}

    @app.post("/models/{model_id}/perturb", status_code=201)
    def perturb(model_id: str, body: PerturbRequest):
        try:
            new_id, variant = runtime.perturb_model(
                store, model_id, invert_y=body.invert_y, feature=body.feature,
                swap=tuple(body.swap) if body.swap else None, as_id=body.as_id)
        except Exception as exc:
            raise _http_error(exc)
        return {"id": new_id, "model": model_to_dict(variant)}

    # -- sessions ---------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreate):
        try:
            session = runtime.create_session(
                store, config, body.model_id, feature=body.feature,
                description=body.description,
                target_semantics=body.target_semantics)
        except Exception as exc:
            raise _http_error(exc)
        return session.to_dict()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            return store.load_session(session_id).to_dict()
        except Exception as exc:
            raise _http_error(exc)

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageIn):
        try:
            session, reply = runtime.post_user_message(
                store, config, session_id, body.content, session_transport(),
                budget=body.budget)
        except Exception as exc:
            raise _http_error(exc)
        return {"reply": {"role": reply.role, "content": reply.content},
                "transcript_length": len(session.transcript)}

    # -- evaluation ----------------------------------------------------------------

    def _execute_eval(run_id: str, body: EvalRequest):
        try:
            report = runtime.run_eval(
                config, store, body.model_ids,
                [TaskKind(t) for t in body.tasks], fresh_transport(body.transport),
                seed=body.seed, reads_per_graph=body.reads_per_graph)
            store.save_report(run_id, report.to_json())
            with run_lock:
                run_status[run_id] = "done"
        except Exception as exc:
            with run_lock:
                run_status[run_id] = f"failed: {exc}"

    @app.post("/eval/run", status_code=202)
    def eval_run(body: EvalRequest):
        for model_id in body.model_ids:
            if not store.model_exists(model_id):
                raise HTTPException(status_code=404, detail=f"no model {model_id!r}")
        run_id = uuid.uuid4().hex[:12]
        with run_lock:
            run_status[run_id] = "running"
        if body.background:
            threading.Thread(target=_execute_eval, args=(run_id, body),
                             daemon=True).start()
            return {"run_id": run_id, "status": "running"}
        _execute_eval(run_id, body)
        with run_lock:
            status = run_status[run_id]
        if status != "done":
            raise HTTPException(status_code=400, detail=status)
        return {"run_id": run_id, "status": status,
                "report": store.load_report(run_id)}

    @app.get("/reports")
    def list_reports():
        with run_lock:
            pending = {rid: s for rid, s in run_status.items() if s != "done"}
        done = {rid: "done" for rid in store.list_reports()}
        return {"reports": {**pending, **done}}

    @app.get("/reports/{run_id}")
    def get_report(run_id: str):
        with run_lock:
            status = run_status.get(run_id)
        if store.report_exists(run_id):
            return {"run_id": run_id, "status": "done",
                    "report": store.load_report(run_id)}
        if status is None:
            raise HTTPException(status_code=404, detail=f"no report {run_id!r}")
        if status.startswith("failed"):
            raise HTTPException(status_code=400, detail=status)
        return {"run_id": run_id, "status": status}

    @app.get("/reports/{run_id}/table", response_class=PlainTextResponse)
    def get_report_table(run_id: str):
        try:
            doc = store.load_report(run_id)
        except Exception as exc:
            raise _http_error(exc)
        lines = [f"{body['label']}: {body['successes']}/{body['total']}"
                 for body in doc["tasks"].values()]
        return "\n".join(lines) + "\n"

    return app
