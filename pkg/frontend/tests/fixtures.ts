/** Recorded service payloads (captured from a live session over the XOR
 * and mushroom datasets); the contract tests render these verbatim. */

import type {
  FeatureView,
  ForestView,
  HistoryView,
  OpResponse,
  PurityView,
  TreeView,
} from "../src/types.js";

export const MUSHROOM_FEATURE: FeatureView = {
  "kind": "feature",
  "strategy": "single-group",
  "groups": [
    {
      "label": "all",
      "count": 22,
      "features": [
        {
          "id": 0,
          "name": "cap-shape",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 1,
          "name": "cap-surface",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 2,
          "name": "cap-color",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 3,
          "name": "bruises",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 4,
          "name": "odor",
          "kind": "categorical",
          "allowed": true,
          "selected": true
        },
        {
          "id": 5,
          "name": "gill-attachment",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 6,
          "name": "gill-spacing",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 7,
          "name": "gill-size",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 8,
          "name": "gill-color",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 9,
          "name": "stalk-shape",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 10,
          "name": "stalk-root",
          "kind": "categorical",
          "allowed": true,
          "selected": true
        },
        {
          "id": 11,
          "name": "stalk-surface-above-ring",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 12,
          "name": "stalk-surface-below-ring",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 13,
          "name": "stalk-color-above-ring",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 14,
          "name": "stalk-color-below-ring",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 15,
          "name": "veil-type",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 16,
          "name": "veil-color",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 17,
          "name": "ring-number",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 18,
          "name": "ring-type",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 19,
          "name": "spore-print-color",
          "kind": "categorical",
          "allowed": true,
          "selected": true
        },
        {
          "id": 20,
          "name": "population",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        },
        {
          "id": 21,
          "name": "habitat",
          "kind": "categorical",
          "allowed": true,
          "selected": false
        }
      ]
    }
  ]
} as FeatureView;

export const XOR_FEATURE: FeatureView = {
  "kind": "feature",
  "strategy": "single-group",
  "groups": [
    {
      "label": "all",
      "count": 2,
      "features": [
        {
          "id": 0,
          "name": "a",
          "kind": "categorical",
          "allowed": true,
          "selected": true
        },
        {
          "id": 1,
          "name": "b",
          "kind": "categorical",
          "allowed": true,
          "selected": true
        }
      ]
    }
  ]
} as FeatureView;

export const XOR_FOREST: ForestView = {
  "kind": "forest",
  "n_trees": 3,
  "trees": [
    {
      "index": 0,
      "root_feature": "a",
      "root_rule_text": "a = x",
      "n_nodes": 7,
      "n_leaves": 4,
      "gamma": 2,
      "edited": false
    },
    {
      "index": 1,
      "root_feature": "a",
      "root_rule_text": "a = x",
      "n_nodes": 7,
      "n_leaves": 4,
      "gamma": 2,
      "edited": false
    },
    {
      "index": 2,
      "root_feature": "a",
      "root_rule_text": "a = x",
      "n_nodes": 7,
      "n_leaves": 4,
      "gamma": 2,
      "edited": false
    }
  ]
} as ForestView;

export const XOR_TREE: TreeView = {
  "kind": "tree",
  "index": 0,
  "gamma": 2,
  "shrinkage": 1,
  "edited": false,
  "nodes": [
    {
      "id": 0,
      "kind": "internal",
      "depth": 0,
      "rule_text": "a = x",
      "feature": 0,
      "left": 1,
      "right": 2,
      "n": 4,
      "n_pos": 2,
      "n_neg": 2,
      "major_class": "1",
      "value": null,
      "weight": null
    },
    {
      "id": 1,
      "kind": "internal",
      "depth": 1,
      "rule_text": "b = x",
      "feature": 1,
      "left": 3,
      "right": 4,
      "n": 2,
      "n_pos": 1,
      "n_neg": 1,
      "major_class": "1",
      "value": null,
      "weight": null
    },
    {
      "id": 2,
      "kind": "internal",
      "depth": 1,
      "rule_text": "b = x",
      "feature": 1,
      "left": 5,
      "right": 6,
      "n": 2,
      "n_pos": 1,
      "n_neg": 1,
      "major_class": "1",
      "value": null,
      "weight": null
    },
    {
      "id": 3,
      "kind": "leaf",
      "depth": 2,
      "rule_text": "leaf",
      "feature": null,
      "left": null,
      "right": null,
      "n": 1,
      "n_pos": 0,
      "n_neg": 1,
      "major_class": "0",
      "value": -0.4,
      "weight": -0.8
    },
    {
      "id": 4,
      "kind": "leaf",
      "depth": 2,
      "rule_text": "leaf",
      "feature": null,
      "left": null,
      "right": null,
      "n": 1,
      "n_pos": 1,
      "n_neg": 0,
      "major_class": "1",
      "value": 0.4,
      "weight": 0.8
    },
    {
      "id": 5,
      "kind": "leaf",
      "depth": 2,
      "rule_text": "leaf",
      "feature": null,
      "left": null,
      "right": null,
      "n": 1,
      "n_pos": 1,
      "n_neg": 0,
      "major_class": "1",
      "value": 0.4,
      "weight": 0.8
    },
    {
      "id": 6,
      "kind": "leaf",
      "depth": 2,
      "rule_text": "leaf",
      "feature": null,
      "left": null,
      "right": null,
      "n": 1,
      "n_pos": 0,
      "n_neg": 1,
      "major_class": "0",
      "value": -0.4,
      "weight": -0.8
    }
  ],
  "edges": [
    {
      "parent": 0,
      "child": 1,
      "n": 2
    },
    {
      "parent": 0,
      "child": 2,
      "n": 2
    },
    {
      "parent": 1,
      "child": 3,
      "n": 1
    },
    {
      "parent": 1,
      "child": 4,
      "n": 1
    },
    {
      "parent": 2,
      "child": 5,
      "n": 1
    },
    {
      "parent": 2,
      "child": 6,
      "n": 1
    }
  ]
} as TreeView;

export const XOR_PURITY: PurityView = {
  "kind": "path-purity",
  "tree": 0,
  "leaf": 3,
  "nodes": [
    {
      "id": 0,
      "depth": 0,
      "rule_text": "a = x",
      "n": 4,
      "n_neg": 2,
      "n_pos": 2
    },
    {
      "id": 1,
      "depth": 1,
      "rule_text": "b = x",
      "n": 2,
      "n_neg": 1,
      "n_pos": 1
    },
    {
      "id": 3,
      "depth": 2,
      "rule_text": "leaf",
      "n": 1,
      "n_neg": 1,
      "n_pos": 0
    }
  ]
} as PurityView;

export const XOR_HISTORY: HistoryView = {
  "kind": "history",
  "records": [
    {
      "index": 0,
      "operation": "rebuild",
      "train_error": 0,
      "test_error": 0
    },
    {
      "index": 1,
      "operation": "grow_tree",
      "train_error": 0,
      "test_error": 0
    }
  ]
} as HistoryView;

export const GROW_RESPONSE: OpResponse = {
  "history_length": 2,
  "record": {
    "index": 1,
    "operation": "grow_tree",
    "train_error": 0,
    "test_error": 0
  },
  "changed_trees": [
    2
  ],
  "n_trees": 3
} as OpResponse;
