/** DOM wiring for the single-page app. All data comes from the service API. */

import { ApiClient } from "./api.js";
import { ChatController } from "./chat.js";
import { EvalController } from "./evalview.js";
import { GraphPanel } from "./graphpanel.js";
import { renderReport } from "./report.js";
import {
  ViewState,
  displayedModelId,
  initialState,
  pushVariant,
  selectFeature,
  selectModel,
} from "./state.js";

const api = new ApiClient(
  (document.querySelector("meta[name=gamtalk-base]") as HTMLMetaElement)?.content ?? "",
);

let state: ViewState = initialState();
let features: string[] = [];

const el = (id: string) => document.getElementById(id)!;

const panel = new GraphPanel(api, (view) => {
  const host = el("graph-plot");
  if (view.error) {
    host.innerHTML = `<div class="error">${view.error}</div>`;
  } else if (view.svg) {
    host.innerHTML = view.svg;
    el("graph-tokens").textContent = `${view.tokens} tokens`;
  }
  el("graph-text").textContent = view.text ?? "";
  const swap = el("swap-controls") as HTMLSpanElement;
  const categorical = view.plot?.kind === "categorical" || view.plot?.kind === "boolean";
  swap.hidden = !categorical;
  if (categorical && view.plot) {
    const labels = view.plot.steps.map((s) => s.label);
    const options = labels.map((c) => `<option value="${c}">${c}</option>`).join("");
    (el("swap-a") as HTMLSelectElement).innerHTML = options;
    (el("swap-b") as HTMLSelectElement).innerHTML = options;
    (el("swap-b") as HTMLSelectElement).selectedIndex = Math.min(1, labels.length - 1);
  }
});

const chat = new ChatController(api, null, (view) => {
  const host = el("chat-transcript");
  host.innerHTML = view.transcript
    .map((m) => `<div class="msg ${m.role}"><span>${m.role}</span><p>${m.content}</p></div>`)
    .join("");
  if (view.pending) {
    host.innerHTML += `<div class="msg pending"><span>user</span><p>${view.pending}</p></div>`;
  }
  if (view.error) {
    host.innerHTML += `<div class="error">send failed: ${view.error} <button id="chat-retry">retry</button></div>`;
  }
  host.scrollTop = host.scrollHeight;
});

const evaluator = new EvalController(api, (view) => {
  const host = el("report");
  if (view.status === "running") {
    host.innerHTML = `<p class="progress">running ${view.runId ?? ""}…</p>`;
  } else if (view.status === "failed") {
    host.innerHTML = `<div class="error">${view.error}</div>`;
  } else if (view.report) {
    host.innerHTML = renderReport(view.report, state.reportFilter);
  }
});

async function refreshGraph(): Promise<void> {
  const modelId = displayedModelId(state);
  if (modelId && state.selectedFeature) {
    await panel.show(modelId, state.selectedFeature);
  }
}

async function loadModels(): Promise<void> {
  const { models } = await api.listModels();
  const picker = el("model-picker") as HTMLSelectElement;
  picker.innerHTML = models
    .map((m) => `<option value="${m.id}">${m.id} (${m.n_terms} graphs)</option>`)
    .join("");
  if (models.length > 0) {
    await pickModel(models[0].id);
  }
}

async function pickModel(modelId: string): Promise<void> {
  const { graphs } = await api.listGraphs(modelId);
  features = graphs.map((g) => g.feature);
  state = selectModel(state, modelId, features);
  const picker = el("feature-picker") as HTMLSelectElement;
  picker.innerHTML = graphs
    .map((g) => `<option value="${g.feature}">${g.feature} (${g.kind}, ${g.n_bins} bins)</option>`)
    .join("");
  await refreshGraph();
  await chat.open(modelId, state.selectedFeature ?? undefined);
  state = { ...state, activeSession: chat.session };
}

function bind(): void {
  (el("model-picker") as HTMLSelectElement).addEventListener("change", (ev) => {
    void pickModel((ev.target as HTMLSelectElement).value);
  });
  (el("feature-picker") as HTMLSelectElement).addEventListener("change", async (ev) => {
    state = selectFeature(state, (ev.target as HTMLSelectElement).value, features);
    await refreshGraph();
  });
  el("invert-toggle").addEventListener("click", async () => {
    const variantId = await panel.toggleInvertY();
    state = pushVariant(state, variantId, true);
    el("invert-state").textContent = state.invertY ? "inverted" : "original";
  });
  el("swap-apply").addEventListener("click", async () => {
    const a = (el("swap-a") as HTMLSelectElement).value;
    const b = (el("swap-b") as HTMLSelectElement).value;
    if (!a || !b || a === b) return;
    const variantId = await panel.swapCategories(a, b);
    state = pushVariant(state, variantId, false);
  });
  el("chat-form").addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const input = el("chat-input") as HTMLInputElement;
    const text = input.value;
    input.value = "";
    try {
      await chat.send(text);
    } catch {
      /* surfaced in the transcript error row */
    }
  });
  el("run-eval").addEventListener("click", () => {
    const modelId = displayedModelId(state);
    if (!modelId) return;
    const tasks = Array.from(
      document.querySelectorAll<HTMLInputElement>("input[name=task]:checked"),
    ).map((box) => box.value);
    void evaluator.run([modelId], tasks);
  });
  el("report-filter").addEventListener("change", (ev) => {
    state = {
      ...state,
      reportFilter: (ev.target as HTMLSelectElement).value as "all" | "incorrect",
    };
    if (evaluator.state.report) {
      el("report").innerHTML = renderReport(evaluator.state.report, state.reportFilter);
    }
  });
}

bind();
void loadModels();
