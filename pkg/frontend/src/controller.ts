import { ApiClient, ApiError } from "./api.js";
import { Gesture, gestureToOp } from "./ops.js";
import { errorBanner, renderSafe } from "./render/common.js";
import { renderFeature } from "./render/feature.js";
import { renderForest } from "./render/forest.js";
import { renderHistory } from "./render/history.js";
import { renderPurity } from "./render/purity.js";
import { renderTree } from "./render/tree.js";
import {
  brushLeaf,
  clampSelection,
  clearStaleBrush,
  initialState,
  selectTree,
  toggleCollapsed,
  ViewState,
} from "./state.js";
import type { FeatureView, ForestView, HistoryView, PurityView, TreeView } from "./types.js";
import { el, VNode } from "./vdom.js";

export interface Views {
  feature: FeatureView;
  forest: ForestView;
  tree: TreeView | null;
  purity: PurityView | null;
  history: HistoryView;
}

/** Single-writer UI driver: every mutation round-trips through POST /ops and
 * a full refetch; nothing is updated optimistically. */
export class Controller {
  state: ViewState;
  views: Views | null = null;

  constructor(private api: ApiClient) {
    this.state = initialState();
  }

  async attach(sessionId: string, historyLength: number): Promise<void> {
    this.state = { ...initialState(), sessionId, historyLength };
    await this.refresh();
  }

  /** Refetch all five views (in parallel) and drop stale client references. */
  async refresh(): Promise<void> {
    const sid = this.state.sessionId;
    if (sid === null) return;
    const [feature, forest, history] = await Promise.all([
      this.api.featureView(sid),
      this.api.forestView(sid),
      this.api.historyView(sid),
    ]);
    this.state = clampSelection(this.state, forest.n_trees);
    const tree =
      forest.n_trees > 0 ? await this.api.treeView(sid, this.state.selectedTree) : null;
    this.state = clearStaleBrush(this.state, tree);
    const purity =
      this.state.brushedLeaf !== null && tree !== null
        ? await this.api.purityView(sid, this.state.selectedTree, this.state.brushedLeaf)
        : null;
    this.views = { feature, forest, tree, purity, history };
    this.state = { ...this.state, historyLength: history.records.length };
  }

  /** POST one operation. Returns false without any request while another op
   * is in flight (single in-flight writer). */
  async dispatch(gesture: Gesture): Promise<boolean> {
    const sid = this.state.sessionId;
    if (sid === null || this.state.pending) return false;
    const op = gestureToOp(gesture, this.state.historyLength);
    this.state = { ...this.state, pending: true, error: null };
    try {
      await this.api.postOp(sid, op);
      await this.refresh();
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state = { ...this.state, error: `${err.code}: ${err.message}` };
        return false;
      }
      this.state = { ...this.state, error: `network failure: ${String(err)}; retry` };
      return false;
    } finally {
      this.state = { ...this.state, pending: false };
    }
  }

  select(tree: number): void {
    this.state = selectTree(this.state, tree);
  }

  brush(leaf: number): void {
    this.state = brushLeaf(this.state, leaf);
  }

  foldToggle(tree: number): void {
    this.state = toggleCollapsed(this.state, tree);
  }

  /** Render the five views into one document tree. */
  render(): VNode {
    const views = this.views;
    if (views === null) return el("div", { class: "workbench loading" }, ["loading"]);
    const dispatch = (g: Gesture) => void this.dispatch(g);
    const refreshThen = (fn: () => void) => {
      fn();
      void this.refresh().then(() => this.onRender());
    };
    const featureNode = renderSafe(() =>
      renderFeature(views.feature, {
        onToggle: (feature, allowed) => dispatch({ type: "feature-toggle", feature, allowed }),
      }),
    );
    const forestNode = renderSafe(() =>
      renderForest(views.forest, this.state.selectedTree, {
        onSelect: (tree) => refreshThen(() => this.select(tree)),
        onCollapseToggle: (tree) => refreshThen(() => this.foldToggle(tree)),
        onRemoveTree: (tree) => dispatch({ type: "remove-tree", tree }),
        onGrowTree: () => dispatch({ type: "grow-tree" }),
      }),
    );
    const treeNode =
      views.tree === null
        ? el("div", { class: "view tree-view empty" }, ["no trees"])
        : renderSafe(() =>
            renderTree(
              views.tree as TreeView,
              this.state.brushedLeaf,
              Boolean(this.state.collapsed[this.state.selectedTree]),
              {
                onBrush: (leaf) => refreshThen(() => this.brush(leaf)),
                onRemoveNode: (tree, node) => dispatch({ type: "node-remove", tree, node }),
                onRemoveNodeAll: (tree, node) => dispatch({ type: "node-remove-all", tree, node }),
                onExpandNode: (tree, node) => dispatch({ type: "node-expand", tree, node }),
                onExpandNodeAll: (tree, node) => dispatch({ type: "node-expand-all", tree, node }),
              },
            ),
          );
    const purityNode = renderSafe(() => renderPurity(views.purity));
    const historyNode = renderSafe(() =>
      renderHistory(views.history, {
        onRestore: (index) => dispatch({ type: "restore", index }),
      }),
    );
    return el(
      "div",
      { class: `workbench${this.state.pending ? " pending" : ""}` },
      [
        this.state.error !== null ? errorBanner(this.state.error) : "",
        featureNode,
        forestNode,
        treeNode,
        purityNode,
        historyNode,
      ].filter((c) => c !== "") as VNode[],
    );
  }

  /** Hook for the browser shell; tests observe render() directly. */
  onRender: () => void = () => undefined;
}
