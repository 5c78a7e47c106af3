/** Typed client for the gamtalk service; every UI number is fetched from here. */

export interface ModelSummary {
  id: string;
  n_terms: number;
  link: string;
  target_description: string;
  dataset: string | null;
}

export interface GraphSummary {
  feature: string;
  kind: string;
  n_bins: number;
  importance: number;
}

export interface GraphTextResponse {
  feature: string;
  text: string;
  tokens: number;
  budget: number | null;
  merged_bins: number;
}

export interface ChatMessage {
  role: "system" | "user" | "assistant";
  content: string;
}

export interface SessionDoc {
  session_id: string;
  model_id: string;
  feature: string | null;
  transcript: ChatMessage[];
}

export interface MessageResponse {
  reply: ChatMessage;
  transcript_length: number;
}

export interface TaskStats {
  successes: number;
  total: number;
  label: string;
}

export interface CaseVerdict {
  task: string;
  graph_id: string;
  truth: unknown;
  llm_answer: string;
  parsed_answer: unknown;
  correct: boolean;
  unparseable: boolean;
  metadata: Record<string, unknown>;
}

export interface ReportDoc {
  schema: string;
  metadata: Record<string, unknown>;
  tasks: Record<string, TaskStats>;
  cases: CaseVerdict[];
}

export interface ReportStatus {
  run_id: string;
  status: string;
  report?: ReportDoc;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listModels(): Promise<{ models: ModelSummary[] }> {
    return this.request("/models");
  }

  listGraphs(modelId: string): Promise<{ graphs: GraphSummary[] }> {
    return this.request(`/models/${encodeURIComponent(modelId)}/graphs`);
  }

  graphText(modelId: string, feature: string, budget?: number): Promise<GraphTextResponse> {
    const query = budget ? `?budget=${budget}` : "";
    return this.request(
      `/models/${encodeURIComponent(modelId)}/graphs/${encodeURIComponent(feature)}/text${query}`,
    );
  }

  perturb(
    modelId: string,
    body: { invert_y?: boolean; swap?: [string, string]; feature?: string },
  ): Promise<{ id: string }> {
    return this.post(`/models/${encodeURIComponent(modelId)}/perturb`, body);
  }

  createSession(modelId: string, feature?: string): Promise<SessionDoc> {
    return this.post("/sessions", { model_id: modelId, feature });
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  postMessage(sessionId: string, content: string): Promise<MessageResponse> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/messages`, { content });
  }

  runEval(body: {
    model_ids: string[];
    tasks?: string[];
    seed?: number;
    reads_per_graph?: number;
    background?: boolean;
  }): Promise<{ run_id: string; status: string; report?: ReportDoc }> {
    return this.post("/eval/run", body);
  }

  getReport(runId: string): Promise<ReportStatus> {
    return this.request(`/reports/${encodeURIComponent(runId)}`);
  }
}
