/**
 * Client view state. Perturbation toggles are reflected as server-side model
 * variants: toggling resolves to a different model id served by the backend,
 * never to client-side math.
 */

export interface ViewState {
  selectedModel: string | null;
  selectedFeature: string | null;
  activeSession: string | null;
  /** chain of server-side variant ids produced by perturbation toggles */
  variantStack: string[];
  invertY: boolean;
  swapSelection: [string, string] | null;
  reportFilter: "all" | "incorrect";
}

export function initialState(): ViewState {
  return {
    selectedModel: null,
    selectedFeature: null,
    activeSession: null,
    variantStack: [],
    invertY: false,
    swapSelection: null,
    reportFilter: "all",
  };
}

/** The model id whose graphs are currently displayed (last variant wins). */
export function displayedModelId(state: ViewState): string | null {
  if (state.variantStack.length > 0) {
    return state.variantStack[state.variantStack.length - 1];
  }
  return state.selectedModel;
}

export function selectModel(state: ViewState, modelId: string, features: string[]): ViewState {
  return {
    ...state,
    selectedModel: modelId,
    selectedFeature: features.length > 0 ? features[0] : null,
    activeSession: null,
    variantStack: [],
    invertY: false,
    swapSelection: null,
  };
}

export function selectFeature(state: ViewState, feature: string, features: string[]): ViewState {
  if (!features.includes(feature)) {
    throw new Error(`feature ${feature} is not part of the selected model`);
  }
  return { ...state, selectedFeature: feature };
}

/** Record a server-created variant id after a perturbation request. */
export function pushVariant(state: ViewState, variantId: string, invertY: boolean): ViewState {
  return {
    ...state,
    variantStack: [...state.variantStack, variantId],
    invertY: invertY ? !state.invertY : state.invertY,
  };
}
