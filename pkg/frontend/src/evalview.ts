/** Benchmark run view: start a background run and poll its report status. */

import type { ApiClient, ReportDoc } from "./api.js";

export interface EvalView {
  runId: string | null;
  status: "idle" | "running" | "done" | "failed";
  report: ReportDoc | null;
  error: string | null;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export class EvalController {
  private view: EvalView = { runId: null, status: "idle", report: null, error: null };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (view: EvalView) => void = () => undefined,
    private readonly pollIntervalMs: number = 500,
  ) {}

  get state(): EvalView {
    return this.view;
  }

  private update(patch: Partial<EvalView>): void {
    this.view = { ...this.view, ...patch };
    this.onChange(this.view);
  }

  async run(modelIds: string[], tasks: string[], seed = 0): Promise<void> {
    this.update({ status: "running", report: null, error: null });
    try {
      const started = await this.api.runEval({
        model_ids: modelIds,
        tasks,
        seed,
        background: true,
      });
      this.update({ runId: started.run_id });
      for (;;) {
        const status = await this.api.getReport(started.run_id);
        if (status.status === "done" && status.report) {
          this.update({ status: "done", report: status.report });
          return;
        }
        await sleep(this.pollIntervalMs);
      }
    } catch (err) {
      this.update({ status: "failed", error: String(err) });
    }
  }
}
