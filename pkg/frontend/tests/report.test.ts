import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { EvalController } from "../src/evalview.js";
import { filterCases, renderCaseRows, renderReport, renderTaskTable } from "../src/report.js";
import { MockService } from "./mockservice.js";

describe("report rendering", () => {
  const service = new MockService();

  it("task table shows successes over totals with the row labels", () => {
    const html = renderTaskTable(service.report);
    expect(html).toContain("Reading a Value from a Graph");
    expect(html).toContain("2/3");
    expect(html).toContain("Deciding Monotonicity");
    expect(html).toContain("2/2");
  });

  it("incorrect-only filter keeps exactly the failed cases", () => {
    const incorrect = filterCases(service.report.cases, "incorrect");
    expect(incorrect).toHaveLength(1);
    expect(incorrect[0].llm_answer).toBe("0.8");
    expect(filterCases(service.report.cases, "all")).toHaveLength(3);
  });

  it("case drill-down shows truth, answer, and verdict", () => {
    const html = renderCaseRows(service.report.cases);
    expect(html).toContain("✓ m1/Age · read_value");
    expect(html).toContain("✗ m1/Age · read_value");
    expect(html).toContain("0.254");
    expect(html).toContain("not monotone");
  });

  it("escapes HTML in answers", () => {
    const html = renderCaseRows([{ ...service.report.cases[0],
                                   llm_answer: "<script>alert(1)</script>" }]);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("full report render respects the filter", () => {
    const all = renderReport(service.report, "all");
    const incorrect = renderReport(service.report, "incorrect");
    expect(all).toContain("3 cases shown");
    expect(incorrect).toContain("1 case shown");
  });
});

describe("EvalController", () => {
  it("starts a background run and polls until the report arrives", async () => {
    const service = new MockService();
    const api = new ApiClient("", service.fetch);
    const states: string[] = [];
    const controller = new EvalController(api, (view) => states.push(view.status), 1);
    await controller.run(["m1"], ["read_value", "monotonicity"], 7);
    expect(controller.state.status).toBe("done");
    expect(controller.state.report!.schema).toBe("gamtalk-report/1");
    expect(states[0]).toBe("running");
    expect(states[states.length - 1]).toBe("done");
    const polls = service.requests.filter((r) => r.path.startsWith("/reports/"));
    expect(polls.length).toBeGreaterThan(1); // progressed via polled status
  });
});
