/** Benchmark report rendering: per-task totals plus a per-case drill-down. */

import type { CaseVerdict, ReportDoc } from "./api.js";

export function filterCases(cases: CaseVerdict[], filter: "all" | "incorrect"): CaseVerdict[] {
  return filter === "incorrect" ? cases.filter((c) => !c.correct) : cases;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderTaskTable(report: ReportDoc): string {
  const rows = Object.entries(report.tasks)
    .map(
      ([task, stats]) =>
        `<tr data-task="${task}"><td>${escapeHtml(stats.label)}</td>` +
        `<td class="score">${stats.successes}/${stats.total}</td></tr>`,
    )
    .join("");
  return `<table class="task-table"><thead><tr><th>Task</th><th>Correct</th></tr></thead><tbody>${rows}</tbody></table>`;
}

function describeTruth(verdict: CaseVerdict): string {
  const truth = verdict.truth;
  if (truth !== null && typeof truth === "object" && "boundary_x" in (truth as object)) {
    const jump = truth as { boundary_x: number; delta: number };
    return `boundary ${jump.boundary_x}, delta ${jump.delta}`;
  }
  return String(truth);
}

export function renderCaseRows(cases: CaseVerdict[]): string {
  return cases
    .map(
      (c, i) =>
        `<details class="case ${c.correct ? "correct" : "incorrect"}" data-index="${i}">` +
        `<summary>${c.correct ? "✓" : "✗"} ${escapeHtml(c.graph_id)} · ${escapeHtml(c.task)}</summary>` +
        `<dl><dt>truth</dt><dd>${escapeHtml(describeTruth(c))}</dd>` +
        `<dt>answer</dt><dd>${escapeHtml(c.llm_answer || "(none)")}</dd>` +
        `<dt>parsed</dt><dd>${escapeHtml(String(c.parsed_answer))}</dd></dl>` +
        `</details>`,
    )
    .join("");
}

export function renderReport(report: ReportDoc, filter: "all" | "incorrect"): string {
  const cases = filterCases(report.cases, filter);
  return (
    renderTaskTable(report) +
    `<p class="case-count">${cases.length} case${cases.length === 1 ? "" : "s"} shown</p>` +
    renderCaseRows(cases)
  );
}
