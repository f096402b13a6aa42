import type { Operation } from "./types.js";

/** UI gestures, one per operation the interface can dispatch. */
export type Gesture =
  | { type: "grow-tree" }
  | { type: "remove-tree"; tree: number }
  | { type: "node-remove"; tree: number; node: number }
  | { type: "node-remove-all"; tree: number; node: number }
  | { type: "node-expand"; tree: number; node: number }
  | { type: "node-expand-all"; tree: number; node: number }
  | { type: "feature-toggle"; feature: number; allowed: boolean }
  | { type: "restore"; index: number };

/** Build the POST /ops body for a gesture. expect_history pins the op to the
 * state the user was looking at (stale edits come back as conflicts). */
export function gestureToOp(g: Gesture, expectHistory: number): Operation {
  const base = { expect_history: expectHistory };
  switch (g.type) {
    case "grow-tree":
      return { kind: "grow_tree", ...base };
    case "remove-tree":
      return { kind: "remove_tree", tree: g.tree, ...base };
    case "node-remove":
      return { kind: "remove_node", tree: g.tree, node: g.node, ...base };
    case "node-remove-all":
      return { kind: "remove_node_all", tree: g.tree, node: g.node, ...base };
    case "node-expand":
      return { kind: "expand_node", tree: g.tree, node: g.node, ...base };
    case "node-expand-all":
      return { kind: "expand_node_all", tree: g.tree, node: g.node, ...base };
    case "feature-toggle":
      // toggling an allowed feature blocks it and vice versa
      return {
        kind: g.allowed ? "block_feature" : "allow_feature",
        feature: g.feature,
        ...base,
      };
    case "restore":
      return { kind: "restore", index: g.index, ...base };
  }
}
