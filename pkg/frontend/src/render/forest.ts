import type { ForestView } from "../types.js";
import { el, VNode } from "../vdom.js";
import { expectKind, fmtGamma, SchemaError } from "./common.js";

export interface ForestHooks {
  onSelect(tree: number): void;
  onCollapseToggle(tree: number): void;
  onRemoveTree(tree: number): void;
  onGrowTree(): void;
}

const NO_HOOKS: ForestHooks = {
  onSelect: () => undefined,
  onCollapseToggle: () => undefined,
  onRemoveTree: () => undefined,
  onGrowTree: () => undefined,
};

/** Forest view: one row per tree (index, root rule, size, gamma), plus the
 * grow control. Left click selects; the collapse control folds the tree view. */
export function renderForest(
  payload: ForestView,
  selected: number,
  hooks: ForestHooks = NO_HOOKS,
): VNode {
  expectKind(payload, "forest");
  if (!Array.isArray(payload.trees)) throw new SchemaError("forest payload has no trees");
  const rows = payload.trees.map((row) =>
    el(
      "tr",
      {
        class: ["forest-row", row.index === selected ? "selected" : "", row.edited ? "edited" : ""]
          .filter(Boolean)
          .join(" "),
        "data-tree": String(row.index),
      },
      [
        el("td", { class: "forest-index" }, [String(row.index)]),
        el("td", { class: "forest-root" }, [row.root_rule_text]),
        el("td", { class: "forest-size" }, [`${row.n_nodes} nodes / ${row.n_leaves} leaves`]),
        el("td", { class: "forest-gamma" }, [fmtGamma(row.gamma)]),
        el("td", { class: "forest-actions" }, [
          el("button", { class: "collapse-toggle" }, ["fold"], {
            click: () => hooks.onCollapseToggle(row.index),
          }),
          el("button", { class: "remove-tree" }, ["remove"], {
            click: () => hooks.onRemoveTree(row.index),
          }),
        ]),
      ],
      { click: () => hooks.onSelect(row.index) },
    ),
  );
  return el("div", { class: "view forest-view" }, [
    el("table", { class: "forest-table" }, [
      el("thead", {}, [
        el("tr", {}, [
          el("th", {}, ["#"]),
          el("th", {}, ["root rule"]),
          el("th", {}, ["size"]),
          el("th", {}, ["gamma"]),
          el("th", {}, [""]),
        ]),
      ]),
      el("tbody", {}, rows),
    ]),
    el("button", { class: "grow-tree" }, ["grow tree"], { click: () => hooks.onGrowTree() }),
  ]);
}
