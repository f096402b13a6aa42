"""Interactive session engine.

A Session is an immutable value: applying an operation returns a new Session
sharing the datasets. Every applied operation appends exactly one history
record carrying the operation text, both error rates, and a full snapshot
(model + constraints, canonical JSON), so any point in the timeline can be
restored or diffed byte-for-byte.

Structural edits relearn only downstream: trees after the earliest changed
tree are refit against the updated residual scores, except trees carrying a
user edit, which keep their structure and step length and only get their
node stats and Newton leaf values recomputed.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np

from . import jsonutil
from .boosting import core
from .boosting.core import ConstraintSet, Ensemble, FitParams, Tree, path_signature
from .data import (
    CATEGORICAL,
    NUMERIC,
    Dataset,
    FeatureGrouping,
    dataset_from_json,
    dataset_to_json,
)

OP_KINDS = (
    "rebuild",
    "block_feature",
    "allow_feature",
    "remove_tree",
    "grow_tree",
    "remove_node",
    "remove_node_all",
    "expand_node",
    "expand_node_all",
    "restore",
)

VIEW_KINDS = ("feature", "forest", "tree", "path-purity", "history")


class OperationError(Exception):
    """Invalid operation; code is one of bad_request / not_found / conflict."""

    def __init__(self, code: str, message: str, detail: Any = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail


def _bad(message: str, detail: Any = None) -> OperationError:
    return OperationError("bad_request", message, detail)


@dataclass(frozen=True)
class HistoryRecord:
    index: int
    operation: str
    train_error: float
    test_error: float
    snapshot: str  # canonical JSON of model + constraints


@dataclass(frozen=True)
class Session:
    id: str
    train: Dataset
    test: Dataset
    grouping: FeatureGrouping
    params: FitParams
    constraints: ConstraintSet
    model: Ensemble
    history: tuple[HistoryRecord, ...]
    op_log: tuple[dict, ...]


# --- construction -----------------------------------------------------------


def compute_errors(model: Ensemble, train: Dataset, test: Dataset) -> tuple[float, float]:
    return core.error_rate(model, train), core.error_rate(model, test)


def _check_schema_match(train: Dataset, test: Dataset) -> None:
    """Train and test must agree on feature names, kinds, and categories."""
    a = [(f.name, f.kind) for f in train.features]
    b = [(f.name, f.kind) for f in test.features]
    if a != b:
        raise _bad("train and test schemas differ", {"train": a, "test": b})
    for f in train.features:
        if train.categories[f.id] != test.categories[f.id]:
            raise _bad(
                f"category vocabulary differs for feature {f.name}",
                {"feature": f.name},
            )
    if train.label_names != test.label_names:
        raise _bad(
            "train and test label names differ",
            {"train": list(train.label_names), "test": list(test.label_names)},
        )


def _record(session_like: tuple[Ensemble, ConstraintSet, Dataset, Dataset], index: int, operation: str) -> HistoryRecord:
    model, constraints, train, test = session_like
    tr, te = compute_errors(model, train, test)
    return HistoryRecord(
        index=index,
        operation=operation,
        train_error=tr,
        test_error=te,
        snapshot=core.snapshot_str(model, constraints),
    )


def create_session(
    train: Dataset,
    test: Dataset,
    grouping: FeatureGrouping,
    params: FitParams,
    session_id: str | None = None,
) -> Session:
    _check_schema_match(train, test)
    model = core.fit_ensemble(train, params)
    constraints = ConstraintSet()
    rec = _record((model, constraints, train, test), 0, "rebuild")
    return Session(
        id=session_id or uuid.uuid4().hex,
        train=train,
        test=test,
        grouping=grouping,
        params=params,
        constraints=constraints,
        model=model,
        history=(rec,),
        op_log=(),
    )


# --- relearn pipeline --------------------------------------------------------


def _scores_upto(train: Dataset, model: Ensemble, params: FitParams, m: int) -> np.ndarray:
    scores = np.full(train.n_samples, model.base_score, dtype=np.float64)
    for k in range(m):
        scores = scores + model.gammas[k] * params.eta * core.tree_output_vector(model.trees[k], train)
    return scores


def _rebuild_downstream(
    train: Dataset,
    params: FitParams,
    constraints: ConstraintSet,
    trees: list[Tree],
    gammas: list[float],
    start: int,
) -> tuple[list[Tree], list[float]]:
    """Refresh stages >= start against updated residuals.

    Edited trees keep structure and gamma (stats and leaf values recomputed);
    everything else is relearned from scratch under the given constraints.
    """
    labels_f = train.labels.astype(np.float64)
    base = core.base_score_for(train.labels)
    scores = np.full(train.n_samples, base, dtype=np.float64)
    out_t: list[Tree] = []
    out_g: list[float] = []
    for m in range(len(trees)):
        tree, gamma = trees[m], gammas[m]
        if m >= start:
            if tree.edited:
                g, h = core.logistic_grad_hess(labels_f, scores)
                tree = core.reweight_tree(tree, train, g, h, train.labels, params.lam)
            else:
                tree = core.learn_tree(train, scores, params, constraints, params.depth)
                gamma = core.line_search_gamma(tree, train, scores)
        scores = scores + gamma * params.eta * core.tree_output_vector(tree, train)
        out_t.append(tree)
        out_g.append(gamma)
    return out_t, out_g


def _expand_at(
    train: Dataset,
    params: FitParams,
    constraints: ConstraintSet,
    tree: Tree,
    node_id: int,
    g: np.ndarray,
    h: np.ndarray,
) -> Optional[Tree]:
    """Split one leaf via best_split; None when no qualifying split exists."""
    ids = core.route_all(tree, train)[node_id]
    prefix = core.node_prefixes(tree)[node_id]
    found = core.best_split(train, ids, g, h, params, constraints, prefix)
    if found is None:
        return None
    rule, _gain = found
    go_left = tree_rule_mask(rule, train, ids)
    stats = []
    for part in (ids[go_left], ids[~go_left]):
        stats.append(
            (
                int(part.size),
                int(train.labels[part].sum()),
                core._seq_sum(g[part]),
                core._seq_sum(h[part]),
            )
        )
    return core.expand_leaf(tree, node_id, rule, stats[0], stats[1], params.lam)


def tree_rule_mask(rule: core.SplitRule, d: Dataset, ids: np.ndarray) -> np.ndarray:
    col = d.columns[rule.feature]
    if rule.kind == NUMERIC:
        return col[ids] < rule.value
    return col[ids] == rule.value


def _apply_all_matching(
    train: Dataset,
    params: FitParams,
    constraints: ConstraintSet,
    model: Ensemble,
    sig: tuple,
    mode: str,  # "collapse" | "expand"
) -> tuple[list[Tree], list[float], bool]:
    """Single forward pass for *_all ops.

    Every tree in the current model is checked against the signature; a match
    is collapsed or expanded in place, marking the tree edited. Trees after
    the earliest change are then refreshed against updated residuals: edited
    ones (including fresh matches) keep structure and are reweighted, the
    rest are relearned under the given constraints.
    Returns (trees, gammas, changed_anything).
    """
    labels_f = train.labels.astype(np.float64)
    scores = np.full(train.n_samples, model.base_score, dtype=np.float64)
    out_t: list[Tree] = []
    out_g: list[float] = []
    earliest: Optional[int] = None
    for m, (tree, gamma) in enumerate(zip(model.trees, model.gammas)):
        downstream = earliest is not None
        nid = core.match_signature(tree, sig)
        changed_here = False
        if nid is not None:
            if mode == "collapse":
                tree = core.collapse_node(tree, nid, params.lam)
                changed_here = True
            else:
                g, h = core.logistic_grad_hess(labels_f, scores)
                expanded = _expand_at(train, params, constraints, tree, nid, g, h)
                if expanded is not None:
                    tree = expanded
                    changed_here = True
        if downstream:
            if tree.edited:
                g, h = core.logistic_grad_hess(labels_f, scores)
                tree = core.reweight_tree(tree, train, g, h, train.labels, params.lam)
            else:
                tree = core.learn_tree(train, scores, params, constraints, params.depth)
                gamma = core.line_search_gamma(tree, train, scores)
        if changed_here and earliest is None:
            earliest = m
        scores = scores + gamma * params.eta * core.tree_output_vector(tree, train)
        out_t.append(tree)
        out_g.append(gamma)
    return out_t, out_g, earliest is not None


# --- operations ---------------------------------------------------------------


def _need_int(args: dict, key: str) -> int:
    if key not in args:
        raise _bad(f"missing argument {key!r}", {"argument": key})
    v = args[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise _bad(f"argument {key!r} must be an integer", {"argument": key, "got": v})
    return v


def _feature_name(d: Dataset, fid: int) -> str:
    return d.features[fid].name


def _check_tree_index(model: Ensemble, m: int) -> None:
    if not 0 <= m < len(model.trees):
        raise _bad(
            f"tree index {m} out of range (model has {len(model.trees)} trees)",
            {"argument": "tree"},
        )


def _check_node_index(tree: Tree, n: int) -> None:
    if not 0 <= n < len(tree.nodes):
        raise _bad(
            f"node id {n} out of range (tree has {len(tree.nodes)} nodes)",
            {"argument": "node"},
        )


def _params_from_args(current: FitParams, overrides: dict) -> FitParams:
    allowed = {"trees", "depth", "eta", "lambda", "min_leaf", "min_gain", "max_trees"}
    unknown = set(overrides) - allowed
    if unknown:
        raise _bad(f"unknown params: {sorted(unknown)}", {"argument": "params"})
    kw = dict(
        trees=current.trees, depth=current.depth, eta=current.eta, lam=current.lam,
        min_leaf=current.min_leaf, min_gain=current.min_gain, max_trees=current.max_trees,
    )
    rename = {"lambda": "lam"}
    for k, v in overrides.items():
        kw[rename.get(k, k)] = v
    try:
        return FitParams(**kw)
    except core.BoostingError as exc:
        raise _bad(f"bad params: {exc}", {"argument": "params"}) from None


_REQUIRED_ARGS: dict[str, tuple[str, ...]] = {
    "rebuild": (),
    "block_feature": ("feature",),
    "allow_feature": ("feature",),
    "remove_tree": ("tree",),
    "grow_tree": (),
    "remove_node": ("tree", "node"),
    "remove_node_all": ("tree", "node"),
    "expand_node": ("tree", "node"),
    "expand_node_all": ("tree", "node"),
    "restore": ("index",),
}
_OPTIONAL_ARGS: dict[str, tuple[str, ...]] = {"rebuild": ("params",)}


def validate_op_shape(op: Any) -> None:
    """Stateless validation: kind known, argument names and types right.

    This is what cmd_apply runs over a whole script before executing any of
    it; apply() also calls it so service and CLI reject identically.
    """
    if not isinstance(op, dict):
        raise _bad("operation must be a JSON object")
    kind = op.get("kind")
    if kind not in OP_KINDS:
        raise _bad(f"unknown operation kind {kind!r}", {"argument": "kind"})
    required = _REQUIRED_ARGS[kind]
    allowed = set(required) | set(_OPTIONAL_ARGS.get(kind, ())) | {"kind", "expect_history"}
    unknown = set(op) - allowed
    if unknown:
        raise _bad(f"unknown arguments for {kind}: {sorted(unknown)}", {"argument": sorted(unknown)[0]})
    for key in required:
        _need_int(op, key)
    if "params" in op and not isinstance(op["params"], dict):
        raise _bad("params must be an object", {"argument": "params"})
    expect = op.get("expect_history")
    if expect is not None and (isinstance(expect, bool) or not isinstance(expect, int)):
        raise _bad("expect_history must be an integer", {"argument": "expect_history"})


def apply(session: Session, op: dict, timestamp: float | None = None) -> Session:
    """Apply one operation and return the successor session.

    op = {"kind": ..., <args...>, "expect_history": optional int}. When
    expect_history is present and does not match the current history length
    the op fails with a conflict (a stale client is editing old state).
    """
    validate_op_shape(op)
    kind = op["kind"]
    expect = op.get("expect_history")
    if expect is not None and expect != len(session.history):
        raise OperationError(
            "conflict",
            f"history moved on: expected {expect}, now {len(session.history)}",
            {"expect_history": expect, "history_length": len(session.history)},
        )
    args = {k: v for k, v in op.items() if k not in ("kind", "expect_history")}

    params = session.params
    constraints = session.constraints
    model = session.model
    text = kind
    logged_args: dict = {}

    if kind == "rebuild":
        overrides = args.get("params") or {}
        if not isinstance(overrides, dict):
            raise _bad("params must be an object", {"argument": "params"})
        params = _params_from_args(session.params, overrides)
        constraints = ConstraintSet()
        model = core.fit_ensemble(session.train, params)
        if overrides:
            inner = ", ".join(f"{k}={overrides[k]}" for k in sorted(overrides))
            text = f"rebuild({inner})"
        logged_args = {"params": {k: overrides[k] for k in sorted(overrides)}} if overrides else {}

    elif kind in ("block_feature", "allow_feature"):
        fid = _need_int(args, "feature")
        if not 0 <= fid < session.train.n_features:
            raise _bad(f"feature id {fid} out of range", {"argument": "feature"})
        name = _feature_name(session.train, fid)
        if kind == "block_feature":
            if fid in constraints.blocked:
                raise _bad(f"feature {name} is already blocked", {"argument": "feature"})
            constraints = constraints.block(fid)
        else:
            if fid not in constraints.blocked:
                raise _bad(f"feature {name} is not blocked", {"argument": "feature"})
            constraints = constraints.allow(fid)
        text = f"{kind}({name})"
        logged_args = {"feature": fid}

    elif kind == "remove_tree":
        m = _need_int(args, "tree")
        _check_tree_index(model, m)
        trees = list(model.trees[:m]) + list(model.trees[m + 1 :])
        gammas = list(model.gammas[:m]) + list(model.gammas[m + 1 :])
        trees, gammas = _rebuild_downstream(session.train, params, constraints, trees, gammas, m)
        model = replace(model, trees=trees, gammas=gammas)
        text = f"remove_tree({m})"
        logged_args = {"tree": m}

    elif kind == "grow_tree":
        if len(model.trees) >= params.max_trees:
            raise _bad(f"model already has max_trees={params.max_trees} trees")
        scores = _scores_upto(session.train, model, params, len(model.trees))
        tree = core.learn_tree(session.train, scores, params, constraints, params.depth)
        gamma = core.line_search_gamma(tree, session.train, scores)
        model = replace(model, trees=list(model.trees) + [tree], gammas=list(model.gammas) + [gamma])
        text = "grow_tree"

    elif kind == "remove_node":
        m = _need_int(args, "tree")
        n = _need_int(args, "node")
        _check_tree_index(model, m)
        _check_node_index(model.trees[m], n)
        if model.trees[m].nodes[n].is_leaf:
            if model.trees[m].n_nodes == 1:
                raise _bad(
                    f"tree {m} is a single leaf; use remove_tree to delete it",
                    {"argument": "node"},
                )
            raise _bad(f"node {n} in tree {m} is already a leaf", {"argument": "node"})
        trees = list(model.trees)
        trees[m] = core.collapse_node(trees[m], n, params.lam)
        gammas = list(model.gammas)
        trees, gammas = _rebuild_downstream(session.train, params, constraints, trees, gammas, m + 1)
        model = replace(model, trees=trees, gammas=gammas)
        text = f"remove_node(tree={m}, node={n})"
        logged_args = {"tree": m, "node": n}

    elif kind == "remove_node_all":
        m = _need_int(args, "tree")
        n = _need_int(args, "node")
        _check_tree_index(model, m)
        _check_node_index(model.trees[m], n)
        if model.trees[m].nodes[n].is_leaf:
            raise _bad(f"node {n} in tree {m} is a leaf; signature removal needs a split node", {"argument": "node"})
        sig = path_signature(model.trees[m], n)
        constraints = constraints.forbid(sig)
        trees, gammas, _changed = _apply_all_matching(
            session.train, params, constraints, model, sig, "collapse"
        )
        model = replace(model, trees=trees, gammas=gammas)
        text = f"remove_node_all(tree={m}, node={n})"
        logged_args = {"tree": m, "node": n}

    elif kind in ("expand_node", "expand_node_all"):
        m = _need_int(args, "tree")
        n = _need_int(args, "node")
        _check_tree_index(model, m)
        _check_node_index(model.trees[m], n)
        if not model.trees[m].nodes[n].is_leaf:
            raise _bad(f"node {n} in tree {m} is not a leaf", {"argument": "node"})
        if kind == "expand_node":
            labels_f = session.train.labels.astype(np.float64)
            scores = _scores_upto(session.train, model, params, m)
            g, h = core.logistic_grad_hess(labels_f, scores)
            expanded = _expand_at(session.train, params, constraints, model.trees[m], n, g, h)
            if expanded is None:
                text = f"expand_node(tree={m}, node={n}) [no-op]"
            else:
                trees = list(model.trees)
                trees[m] = expanded
                gammas = list(model.gammas)
                trees, gammas = _rebuild_downstream(session.train, params, constraints, trees, gammas, m + 1)
                model = replace(model, trees=trees, gammas=gammas)
                text = f"expand_node(tree={m}, node={n})"
        else:
            sig = path_signature(model.trees[m], n)
            trees, gammas, changed = _apply_all_matching(
                session.train, params, constraints, model, sig, "expand"
            )
            if changed:
                model = replace(model, trees=trees, gammas=gammas)
                text = f"expand_node_all(tree={m}, node={n})"
            else:
                text = f"expand_node_all(tree={m}, node={n}) [no-op]"
        logged_args = {"tree": m, "node": n}

    elif kind == "restore":
        k = _need_int(args, "index")
        if not 0 <= k < len(session.history):
            raise _bad(
                f"history index {k} out of range (length {len(session.history)})",
                {"argument": "index"},
            )
        model, constraints = core.snapshot_parse(session.history[k].snapshot)
        text = f"restore({k})"
        logged_args = {"index": k}

    rec = _record((model, constraints, session.train, session.test), len(session.history), text)
    entry = {"kind": kind, "args": logged_args, "timestamp": time.time() if timestamp is None else float(timestamp)}
    return replace(
        session,
        params=params,
        constraints=constraints,
        model=model,
        history=session.history + (rec,),
        op_log=session.op_log + (entry,),
    )


def changed_tree_indices(old: Ensemble, new: Ensemble) -> list[int]:
    """Indices whose per-tree canonical JSON differs (index-aligned; a length
    change marks the tail as changed)."""
    out = []
    for i in range(max(len(old.trees), len(new.trees))):
        if i >= len(old.trees) or i >= len(new.trees):
            out.append(i)
            continue
        if jsonutil.dumps(core.tree_to_json(old.trees[i])) != jsonutil.dumps(core.tree_to_json(new.trees[i])):
            out.append(i)
    return out


# --- views ---------------------------------------------------------------------


def _rule_text(d: Dataset, rule: core.SplitRule | None) -> str:
    if rule is None:
        return "leaf"
    name = d.features[rule.feature].name
    if rule.kind == NUMERIC:
        return f"{name} < {rule.value!r}"
    return f"{name} = {d.category_name(rule.feature, int(rule.value))}"


def build_view(session: Session, kind: str, **kw) -> dict:
    if kind == "feature":
        return _feature_view(session)
    if kind == "forest":
        return _forest_view(session)
    if kind == "tree":
        return _tree_view(session, kw["tree"])
    if kind == "path-purity":
        return _purity_view(session, kw["tree"], kw["leaf"])
    if kind == "history":
        return _history_view(session)
    raise _bad(f"unknown view kind {kind!r}")


def _used_features(model: Ensemble) -> set[int]:
    used: set[int] = set()
    for tree in model.trees:
        for node in tree.nodes:
            if node.rule is not None:
                used.add(node.rule.feature)
    return used


def _feature_view(s: Session) -> dict:
    used = _used_features(s.model)
    groups = []
    for label, fids in s.grouping.groups.items():
        groups.append(
            {
                "label": label,
                "count": len(fids),
                "features": [
                    {
                        "id": fid,
                        "name": s.train.features[fid].name,
                        "kind": s.train.features[fid].kind,
                        "allowed": fid not in s.constraints.blocked,
                        "selected": fid in used,
                    }
                    for fid in fids
                ],
            }
        )
    return {"kind": "feature", "strategy": s.grouping.strategy, "groups": groups}


def _forest_view(s: Session) -> dict:
    rows = []
    for i, tree in enumerate(s.model.trees):
        root = tree.nodes[0]
        rows.append(
            {
                "index": i,
                "root_feature": None if root.rule is None else s.train.features[root.rule.feature].name,
                "root_rule_text": _rule_text(s.train, root.rule),
                "n_nodes": len(tree.nodes),
                "n_leaves": sum(1 for n in tree.nodes if n.is_leaf),
                "gamma": float(s.model.gammas[i]),
                "edited": tree.edited,
            }
        )
    return {"kind": "forest", "n_trees": len(rows), "trees": rows}


def _tree_view(s: Session, m: int) -> dict:
    _check_tree_index(s.model, m)
    tree = s.model.trees[m]
    gamma = float(s.model.gammas[m])
    eta = s.model.shrinkage
    pos_name, neg_name = s.train.label_names[1], s.train.label_names[0]
    nodes = []
    edges = []
    for node in tree.nodes:
        obj = {
            "id": node.id,
            "kind": "leaf" if node.is_leaf else "internal",
            "depth": node.depth,
            "rule_text": _rule_text(s.train, node.rule),
            "feature": None if node.rule is None else node.rule.feature,
            "left": None if node.is_leaf else node.left,
            "right": None if node.is_leaf else node.right,
            "n": node.n,
            "n_pos": node.n_pos,
            "n_neg": node.n_neg,
            "major_class": pos_name if node.n_pos >= node.n_neg else neg_name,
            "value": float(node.value) if node.is_leaf else None,
            "weight": gamma * eta * float(node.value) if node.is_leaf else None,
        }
        nodes.append(obj)
        if not node.is_leaf:
            edges.append({"parent": node.id, "child": node.left, "n": tree.nodes[node.left].n})
            edges.append({"parent": node.id, "child": node.right, "n": tree.nodes[node.right].n})
    return {
        "kind": "tree",
        "index": m,
        "gamma": gamma,
        "shrinkage": eta,
        "edited": tree.edited,
        "nodes": nodes,
        "edges": edges,
    }


def _purity_view(s: Session, m: int, leaf: int) -> dict:
    _check_tree_index(s.model, m)
    tree = s.model.trees[m]
    _check_node_index(tree, leaf)
    if not tree.nodes[leaf].is_leaf:
        raise _bad(f"node {leaf} in tree {m} is not a leaf", {"argument": "leaf"})
    parents: dict[int, int] = {}
    for node in tree.nodes:
        if not node.is_leaf:
            parents[node.left] = node.id
            parents[node.right] = node.id
    path = [leaf]
    while path[-1] != 0:
        path.append(parents[path[-1]])
    path.reverse()
    nodes = []
    for nid in path:
        node = tree.nodes[nid]
        nodes.append(
            {
                "id": nid,
                "depth": node.depth,
                "rule_text": _rule_text(s.train, node.rule),
                "n": node.n,
                "n_neg": node.n_neg,
                "n_pos": node.n_pos,
            }
        )
    return {"kind": "path-purity", "tree": m, "leaf": leaf, "nodes": nodes}


def _history_view(s: Session) -> dict:
    return {
        "kind": "history",
        "records": [
            {
                "index": r.index,
                "operation": r.operation,
                "train_error": r.train_error,
                "test_error": r.test_error,
            }
            for r in s.history
        ],
    }


# --- export / import -------------------------------------------------------------


def _params_to_json(p: FitParams) -> dict:
    return {
        "trees": p.trees, "depth": p.depth, "eta": p.eta, "lambda": p.lam,
        "min_leaf": p.min_leaf, "min_gain": p.min_gain, "max_trees": p.max_trees,
    }


def _params_from_json(obj: dict) -> FitParams:
    return FitParams(
        trees=int(obj["trees"]), depth=int(obj["depth"]), eta=float(obj["eta"]),
        lam=float(obj["lambda"]), min_leaf=int(obj["min_leaf"]),
        min_gain=float(obj["min_gain"]), max_trees=int(obj["max_trees"]),
    )


def export_session(s: Session) -> dict:
    return {
        "format": "tbt-session",
        "version": 1,
        "params": _params_to_json(s.params),
        "grouping": {"strategy": s.grouping.strategy, "groups": {k: list(v) for k, v in s.grouping.groups.items()}},
        "train": dataset_to_json(s.train),
        "test": dataset_to_json(s.test),
        "state": core.snapshot_to_json(s.model, s.constraints),
        "history": [
            {
                "index": r.index,
                "operation": r.operation,
                "train_error": r.train_error,
                "test_error": r.test_error,
                "snapshot": jsonutil.loads(r.snapshot),
            }
            for r in s.history
        ],
        "op_log": [dict(entry) for entry in s.op_log],
    }


def export_session_str(s: Session) -> str:
    return jsonutil.dumps(export_session(s))


def import_session(obj: dict, session_id: str | None = None) -> Session:
    if not isinstance(obj, dict) or obj.get("format") != "tbt-session":
        raise _bad("not a session export (missing format tag)")
    try:
        params = _params_from_json(obj["params"])
        train = dataset_from_json(obj["train"])
        test = dataset_from_json(obj["test"])
        grouping = FeatureGrouping(
            strategy=str(obj["grouping"]["strategy"]),
            groups={str(k): [int(i) for i in v] for k, v in obj["grouping"]["groups"].items()},
        )
        model, constraints = core.snapshot_parse(obj["state"])
        history = tuple(
            HistoryRecord(
                index=int(r["index"]),
                operation=str(r["operation"]),
                train_error=float(r["train_error"]),
                test_error=float(r["test_error"]),
                snapshot=jsonutil.dumps(r["snapshot"]),
            )
            for r in obj["history"]
        )
        op_log = tuple(
            {"kind": str(e["kind"]), "args": dict(e["args"]), "timestamp": float(e["timestamp"])}
            for e in obj.get("op_log", ())
        )
    except (KeyError, TypeError, ValueError, core.BoostingError) as exc:
        raise _bad(f"bad session export: {exc}") from None
    if not history:
        raise _bad("bad session export: empty history")
    return Session(
        id=session_id or uuid.uuid4().hex,
        train=train,
        test=test,
        grouping=grouping,
        params=params,
        constraints=constraints,
        model=model,
        history=history,
        op_log=op_log,
    )


def replay_ops(base: Session, op_log: list[dict]) -> Session:
    """Apply a recorded operation log onto a fresh session, preserving the
    recorded timestamps so exports replay byte-identically."""
    s = base
    for entry in op_log:
        op = {"kind": entry["kind"], **entry.get("args", {})}
        s = apply(s, op, timestamp=entry.get("timestamp"))
    return s
