/**
 * Graph panel controller: fetches served graph text, derives plot data, and
 * applies counterfactual perturbations by asking the server for variant
 * models. Toggling invert-y twice lands on a model whose served graph equals
 * the original, so the plot round-trips exactly.
 */

import type { ApiClient } from "./api.js";
import { GraphPlotData, plotDataFromText, plotMatchesText } from "./graphtext.js";
import { renderPlotSvg } from "./plot.js";

export interface GraphPanelView {
  modelId: string | null;
  feature: string | null;
  text: string | null;
  plot: GraphPlotData | null;
  svg: string | null;
  tokens: number | null;
  error: string | null;
}

export class GraphPanel {
  private view: GraphPanelView = {
    modelId: null,
    feature: null,
    text: null,
    plot: null,
    svg: null,
    tokens: null,
    error: null,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (view: GraphPanelView) => void = () => undefined,
    private readonly devChecks: boolean = false,
  ) {}

  get state(): GraphPanelView {
    return this.view;
  }

  private update(patch: Partial<GraphPanelView>): void {
    this.view = { ...this.view, ...patch };
    this.onChange(this.view);
  }

  async show(modelId: string, feature: string, budget?: number): Promise<void> {
    try {
      const served = await this.api.graphText(modelId, feature, budget);
      const plot = plotDataFromText(served.text);
      if (this.devChecks && !plotMatchesText(plot, served.text)) {
        throw new Error("plot data diverged from served text");
      }
      this.update({
        modelId,
        feature,
        text: served.text,
        plot,
        svg: renderPlotSvg(plot),
        tokens: served.tokens,
        error: null,
      });
    } catch (err) {
      // visible error state, never a stale plot
      this.update({ modelId, feature, text: null, plot: null, svg: null,
                    tokens: null, error: String(err) });
    }
  }

  /** Ask the server for the y-inverted variant and display it. */
  async toggleInvertY(): Promise<string> {
    if (!this.view.modelId || !this.view.feature) throw new Error("no graph shown");
    const variant = await this.api.perturb(this.view.modelId, { invert_y: true });
    await this.show(variant.id, this.view.feature);
    return variant.id;
  }

  /** Ask the server to swap two categories and display the variant. */
  async swapCategories(a: string, b: string): Promise<string> {
    if (!this.view.modelId || !this.view.feature) throw new Error("no graph shown");
    const variant = await this.api.perturb(this.view.modelId, {
      swap: [a, b],
      feature: this.view.feature,
    });
    await this.show(variant.id, this.view.feature);
    return variant.id;
  }
}
