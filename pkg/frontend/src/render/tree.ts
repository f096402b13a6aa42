import type { TreeNodePayload, TreeView } from "../types.js";
import { el, VNode } from "../vdom.js";
import { expectKind, fmtGamma, SchemaError } from "./common.js";

export interface TreeHooks {
  onBrush(leaf: number): void;
  onRemoveNode(tree: number, node: number): void;
  onRemoveNodeAll(tree: number, node: number): void;
  onExpandNode(tree: number, node: number): void;
  onExpandNodeAll(tree: number, node: number): void;
}

const NO_HOOKS: TreeHooks = {
  onBrush: () => undefined,
  onRemoveNode: () => undefined,
  onRemoveNodeAll: () => undefined,
  onExpandNode: () => undefined,
  onExpandNodeAll: () => undefined,
};

/** Edge thickness in px, monotone in the child's sample count. */
export function edgeWidth(n: number, rootN: number): number {
  if (rootN <= 0) return 1;
  return 1 + Math.round(9 * (n / rootN));
}

function nodeMenu(payload: TreeView, node: TreeNodePayload, hooks: TreeHooks): VNode {
  const m = payload.index;
  const buttons =
    node.kind === "internal"
      ? [
          el("button", { class: "op-remove-node" }, ["remove node"], {
            click: () => hooks.onRemoveNode(m, node.id),
          }),
          el("button", { class: "op-remove-node-all" }, ["remove on all trees"], {
            click: () => hooks.onRemoveNodeAll(m, node.id),
          }),
        ]
      : [
          el("button", { class: "op-expand-node" }, ["expand leaf"], {
            click: () => hooks.onExpandNode(m, node.id),
          }),
          el("button", { class: "op-expand-node-all" }, ["expand on all trees"], {
            click: () => hooks.onExpandNodeAll(m, node.id),
          }),
        ];
  return el("span", { class: "node-menu" }, buttons);
}

function renderNode(
  payload: TreeView,
  byId: Map<number, TreeNodePayload>,
  node: TreeNodePayload,
  rootN: number,
  brushed: number | null,
  hooks: TreeHooks,
): VNode {
  const major = node.n_pos >= node.n_neg ? "class-pos" : "class-neg";
  const classes = [
    "tree-node",
    node.kind,
    major,
    node.id === brushed ? "brushed" : "",
  ]
    .filter(Boolean)
    .join(" ");
  const label =
    node.kind === "leaf"
      ? `${node.rule_text} [${node.major_class}] w=${(node.weight ?? 0).toFixed(4)}`
      : node.rule_text;
  const head = el(
    "span",
    { class: classes, "data-node": String(node.id), title: `${node.n_neg}- / ${node.n_pos}+` },
    [el("span", { class: "node-label" }, [label]), nodeMenu(payload, node, hooks)],
    node.kind === "leaf" ? { click: () => hooks.onBrush(node.id) } : {},
  );
  const children: VNode[] = [];
  if (node.kind === "internal" && node.left !== null && node.right !== null) {
    for (const cid of [node.left, node.right]) {
      const child = byId.get(cid);
      if (child === undefined) throw new SchemaError(`tree edge points at missing node ${cid}`);
      children.push(
        el(
          "li",
          {
            class: "tree-edge",
            style: `border-left-width: ${edgeWidth(child.n, rootN)}px`,
            "data-n": String(child.n),
          },
          [renderNode(payload, byId, child, rootN, brushed, hooks)],
        ),
      );
    }
  }
  return children.length === 0
    ? head
    : el("span", { class: "subtree" }, [head, el("ul", { class: "tree-children" }, children)]);
}

/** Tree view: node-link rendering with edge widths proportional to sample
 * counts and leaves colored by their major class. */
export function renderTree(
  payload: TreeView,
  brushed: number | null,
  collapsed: boolean,
  hooks: TreeHooks = NO_HOOKS,
): VNode {
  expectKind(payload, "tree");
  if (!Array.isArray(payload.nodes) || payload.nodes.length === 0)
    throw new SchemaError("tree payload has no nodes");
  const header = el("div", { class: "tree-header" }, [
    `tree ${payload.index}`,
    payload.edited ? el("span", { class: "edited-badge" }, ["edited"]) : "",
    el("span", { class: "tree-gamma" }, [
      ` gamma=${fmtGamma(payload.gamma)} eta=${fmtGamma(payload.shrinkage)}`,
    ]),
  ].filter((c) => c !== "") as Array<VNode | string>);
  if (collapsed) {
    return el("div", { class: "view tree-view collapsed" }, [
      header,
      el("div", { class: "tree-collapsed-note" }, [`collapsed (${payload.nodes.length} nodes)`]),
    ]);
  }
  const byId = new Map(payload.nodes.map((n) => [n.id, n]));
  const root = byId.get(0);
  if (root === undefined) throw new SchemaError("tree payload has no root node");
  return el("div", { class: "view tree-view" }, [
    header,
    el("ul", { class: "tree-root" }, [
      el("li", { class: "tree-edge", style: "border-left-width: 0px", "data-n": String(root.n) }, [
        renderNode(payload, byId, root, root.n, brushed, hooks),
      ]),
    ]),
  ]);
}
