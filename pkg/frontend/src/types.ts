/** Payload shapes returned by the workbench HTTP service. */

export interface FeatureEntry {
  id: number;
  name: string;
  kind: "numeric" | "categorical";
  allowed: boolean;
  selected: boolean;
}

export interface FeatureGroup {
  label: string;
  count: number;
  features: FeatureEntry[];
}

export interface FeatureView {
  kind: "feature";
  strategy: string;
  groups: FeatureGroup[];
}

export interface ForestRow {
  index: number;
  root_feature: string | null;
  root_rule_text: string;
  n_nodes: number;
  n_leaves: number;
  gamma: number;
  edited: boolean;
}

export interface ForestView {
  kind: "forest";
  n_trees: number;
  trees: ForestRow[];
}

export interface TreeNodePayload {
  id: number;
  kind: "leaf" | "internal";
  depth: number;
  rule_text: string;
  feature: number | null;
  left: number | null;
  right: number | null;
  n: number;
  n_pos: number;
  n_neg: number;
  major_class: string;
  value: number | null;
  weight: number | null;
}

export interface TreeEdge {
  parent: number;
  child: number;
  n: number;
}

export interface TreeView {
  kind: "tree";
  index: number;
  gamma: number;
  shrinkage: number;
  edited: boolean;
  nodes: TreeNodePayload[];
  edges: TreeEdge[];
}

export interface PurityRow {
  id: number;
  depth: number;
  rule_text: string;
  n: number;
  n_neg: number;
  n_pos: number;
}

export interface PurityView {
  kind: "path-purity";
  tree: number;
  leaf: number;
  nodes: PurityRow[];
}

export interface HistoryRecord {
  index: number;
  operation: string;
  train_error: number;
  test_error: number;
}

export interface HistoryView {
  kind: "history";
  records: HistoryRecord[];
}

export type Operation = { kind: string } & Record<string, unknown>;

export interface OpResponse {
  history_length: number;
  record: HistoryRecord;
  changed_trees: number[];
  n_trees: number;
}

export interface CreateResponse {
  session_id: string;
  history_length: number;
  n_trees: number;
  train_error: number;
  test_error: number;
}
