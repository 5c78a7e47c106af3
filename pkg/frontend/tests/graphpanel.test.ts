import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { GraphPanel } from "../src/graphpanel.js";
import { MockService } from "./mockservice.js";
import { AGE_TEXT, AGE_TEXT_INVERTED, SEX_TEXT } from "./fixtures.js";

function makePanel() {
  const service = new MockService();
  const api = new ApiClient("", service.fetch);
  return { service, panel: new GraphPanel(api, () => undefined, true) };
}

describe("GraphPanel", () => {
  it("shows a plot whose values equal the served text", async () => {
    const { panel } = makePanel();
    await panel.show("m1", "Age");
    expect(panel.state.error).toBeNull();
    expect(panel.state.text).toBe(AGE_TEXT);
    expect(panel.state.plot!.steps).toHaveLength(31);
    expect(panel.state.plot!.steps[0].y).toBe(-0.308);
  });

  it("invert-y toggle mirrors every value", async () => {
    const { panel } = makePanel();
    await panel.show("m1", "Age");
    const original = panel.state.plot!;
    await panel.toggleInvertY();
    expect(panel.state.modelId).toBe("m1--inv");
    expect(panel.state.text).toBe(AGE_TEXT_INVERTED);
    panel.state.plot!.steps.forEach((step, i) => {
      expect(step.y).toBe(-original.steps[i].y);
      expect(step.lo).toBe(-original.steps[i].hi);
      expect(step.hi).toBe(-original.steps[i].lo);
    });
  });

  it("toggling invert-y twice restores the original plot bit for bit", async () => {
    const { panel } = makePanel();
    await panel.show("m1", "Age");
    const originalSvg = panel.state.svg!;
    const originalPlot = panel.state.plot!;
    await panel.toggleInvertY();
    expect(panel.state.svg).not.toBe(originalSvg);
    await panel.toggleInvertY();
    expect(panel.state.modelId).toBe("m1--inv--inv");
    expect(panel.state.text).toBe(AGE_TEXT);
    expect(panel.state.plot).toStrictEqual(originalPlot);
    expect(panel.state.svg).toBe(originalSvg); // byte-identical SVG
  });

  it("category swap exchanges the two labels' values and round-trips", async () => {
    const { panel } = makePanel();
    await panel.show("m1", "Sex");
    expect(panel.state.text).toBe(SEX_TEXT);
    expect(panel.state.plot!.steps.map((s) => s.y)).toEqual([1.397, -1.397]);
    const original = panel.state.svg!;
    await panel.swapCategories("female", "male");
    expect(panel.state.plot!.steps.map((s) => s.y)).toEqual([-1.397, 1.397]);
    expect(panel.state.plot!.steps.map((s) => s.label)).toEqual([
      "female",
      "male",
    ]);
    await panel.swapCategories("female", "male");
    expect(panel.state.svg).toBe(original);
  });

  it("fetch failures produce a visible error state and no stale plot", async () => {
    const { panel } = makePanel();
    await panel.show("m1", "Age");
    await panel.show("m1", "Ghost");
    expect(panel.state.error).toContain("404");
    expect(panel.state.plot).toBeNull();
    expect(panel.state.svg).toBeNull();
  });
});
