import type { PurityView } from "../types.js";
import { el, VNode } from "../vdom.js";
import { expectKind, SchemaError } from "./common.js";

function barWidth(count: number, rootN: number): string {
  if (rootN <= 0) return "0%";
  return `${((100 * count) / rootN).toFixed(1)}%`;
}

/** Path purity view: one bar-chart group per node on the brushed root-leaf
 * path, negative and positive counts side by side. */
export function renderPurity(payload: PurityView | null): VNode {
  if (payload === null) {
    return el("div", { class: "view purity-view empty" }, [
      el("p", { class: "purity-hint" }, ["brush a leaf in the tree view to inspect its path"]),
    ]);
  }
  expectKind(payload, "path-purity");
  if (!Array.isArray(payload.nodes) || payload.nodes.length === 0)
    throw new SchemaError("path-purity payload has no nodes");
  const rootN = payload.nodes[0].n;
  const groups = payload.nodes.map((row) =>
    el("div", { class: "purity-group", "data-node": String(row.id) }, [
      el("div", { class: "purity-label" }, [`${row.depth}: ${row.rule_text}`]),
      el("div", { class: "purity-bars" }, [
        el("div", { class: "bar bar-neg", style: `width: ${barWidth(row.n_neg, rootN)}` }, [
          String(row.n_neg),
        ]),
        el("div", { class: "bar bar-pos", style: `width: ${barWidth(row.n_pos, rootN)}` }, [
          String(row.n_pos),
        ]),
      ]),
    ]),
  );
  return el("div", { class: "view purity-view" }, [
    el("div", { class: "purity-title" }, [`tree ${payload.tree}, leaf ${payload.leaf}`]),
    ...groups,
  ]);
}
