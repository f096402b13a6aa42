import type { TreeView } from "./types.js";

/** Client-side view state. Model state lives on the server only. */
export interface ViewState {
  sessionId: string | null;
  selectedTree: number;
  brushedLeaf: number | null;
  collapsed: Record<number, boolean>;
  pending: boolean;
  historyLength: number;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    selectedTree: 0,
    brushedLeaf: null,
    collapsed: {},
    pending: false,
    historyLength: 0,
    error: null,
  };
}

/** Brushed paths must point at a leaf in the latest tree payload; anything
 * stale (gone, or no longer a leaf) is dropped. */
export function clearStaleBrush(state: ViewState, tree: TreeView | null): ViewState {
  if (state.brushedLeaf === null) return state;
  const ok =
    tree !== null &&
    tree.index === state.selectedTree &&
    tree.nodes.some((n) => n.id === state.brushedLeaf && n.kind === "leaf");
  return ok ? state : { ...state, brushedLeaf: null };
}

export function toggleCollapsed(state: ViewState, tree: number): ViewState {
  const collapsed = { ...state.collapsed, [tree]: !state.collapsed[tree] };
  return { ...state, collapsed };
}

export function selectTree(state: ViewState, tree: number): ViewState {
  if (tree === state.selectedTree) return state;
  return { ...state, selectedTree: tree, brushedLeaf: null };
}

export function brushLeaf(state: ViewState, leaf: number | null): ViewState {
  return { ...state, brushedLeaf: leaf };
}

/** Clamp the selected tree after the forest shrinks. */
export function clampSelection(state: ViewState, nTrees: number): ViewState {
  if (nTrees === 0) return { ...state, selectedTree: 0, brushedLeaf: null };
  if (state.selectedTree < nTrees) return state;
  return { ...state, selectedTree: nTrees - 1, brushedLeaf: null };
}
