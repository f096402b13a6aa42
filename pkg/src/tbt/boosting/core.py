"""Gradient-boosted trees for binary logistic loss.

Newton leaf values, second-order split gain, exhaustive split search over
numeric thresholds and one-vs-rest category tests, golden-section line search
per stage. Training is constraint-aware: blocked features and forbidden
root-paths are excluded during candidate enumeration, never patched up
afterwards.

Everything here is deterministic: same data, same parameters, same
constraints give byte-identical models on either kernel backend.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.special import expit

from .. import jsonutil
from ..data import CATEGORICAL, NUMERIC, Dataset
from . import kernels

H_FLOOR = 1e-16
BASE_SCORE_CLAMP = 15.0
LEAF = ("leaf",)


class BoostingError(Exception):
    """Learning failed (bad parameters, non-decreasing deviance, ...)."""


class DegenerateLeafError(BoostingError):
    """Newton leaf value undefined: H + lambda is not positive."""


# --- model types -----------------------------------------------------------


@dataclass(frozen=True)
class SplitRule:
    feature: int
    kind: str  # "numeric" | "categorical"
    value: float | int  # threshold (numeric) or category code (categorical)

    def as_tuple(self) -> tuple:
        return (self.feature, self.kind, self.value)


@dataclass
class TreeNode:
    id: int
    rule: Optional[SplitRule] = None  # None => leaf
    left: int = -1
    right: int = -1
    value: float = 0.0
    n: int = 0
    n_pos: int = 0
    n_neg: int = 0
    G: float = 0.0
    H: float = 0.0
    depth: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.rule is None


@dataclass
class Tree:
    nodes: list[TreeNode]
    edited: bool = False

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def max_depth_used(self) -> int:
        return max(n.depth for n in self.nodes)

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if n.is_leaf]


@dataclass
class Ensemble:
    base_score: float
    shrinkage: float
    lam: float
    trees: list[Tree]
    gammas: list[float]


@dataclass(frozen=True)
class FitParams:
    trees: int
    depth: int
    eta: float = 0.3
    lam: float = 1.0
    min_leaf: int = 1
    min_gain: float = 1e-6
    max_trees: int = 512

    def __post_init__(self):
        if self.trees < 0:
            raise BoostingError(f"trees must be >= 0, got {self.trees}")
        if self.depth < 1:
            raise BoostingError(f"depth must be >= 1, got {self.depth}")
        if not self.eta > 0.0:
            raise BoostingError(f"eta must be > 0, got {self.eta}")
        if not self.lam >= 0.0:
            raise BoostingError(f"lambda must be >= 0, got {self.lam}")
        if self.min_leaf < 1:
            raise BoostingError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_trees < 1 or self.trees > self.max_trees:
            raise BoostingError(
                f"need 1 <= max_trees and trees <= max_trees, got {self.trees}/{self.max_trees}"
            )


@dataclass(frozen=True)
class ConstraintSet:
    """Blocked feature ids plus forbidden root-path signatures."""

    blocked: frozenset = frozenset()
    forbidden: frozenset = frozenset()  # of path signatures, see path_signature()

    def block(self, fid: int) -> "ConstraintSet":
        return ConstraintSet(self.blocked | {fid}, self.forbidden)

    def allow(self, fid: int) -> "ConstraintSet":
        return ConstraintSet(self.blocked - {fid}, self.forbidden)

    def forbid(self, sig: tuple) -> "ConstraintSet":
        return ConstraintSet(self.blocked, self.forbidden | {sig})


# --- pointwise pieces ------------------------------------------------------


def logistic_grad_hess(label, score):
    """Gradient and hessian of the logistic loss at a raw score.

    Works elementwise on arrays or plain floats; the hessian is floored at
    1e-16 so Newton denominators stay positive.
    """
    p = expit(score)
    g = p - label
    h = p * (1.0 - p)
    if isinstance(h, np.ndarray):
        h = np.maximum(h, H_FLOOR)
    else:
        h = max(float(h), H_FLOOR)
        g = float(g)
    return g, h


def leaf_value(G: float, H: float, lam: float) -> float:
    denom = H + lam
    if not denom > 0.0:
        raise DegenerateLeafError(f"H + lambda = {denom} is not positive")
    return -G / denom


def split_gain(G_L: float, H_L: float, G_R: float, H_R: float, lam: float) -> float:
    # Token-for-token the kernel expression; do not "simplify".
    return 0.5 * (
        G_L * G_L / (H_L + lam)
        + G_R * G_R / (H_R + lam)
        - (G_L + G_R) * (G_L + G_R) / ((H_L + H_R) + lam)
    )


def deviance(labels: np.ndarray, scores: np.ndarray) -> float:
    """Sum of logistic losses; labels in {0,1}, scores raw."""
    z = (1.0 - 2.0 * labels) * scores
    return float(np.logaddexp(0.0, z).sum())


def base_score_for(labels: np.ndarray) -> float:
    n_pos = int(labels.sum())
    n_neg = int(labels.shape[0]) - n_pos
    if n_pos == 0:
        return -BASE_SCORE_CLAMP
    if n_neg == 0:
        return BASE_SCORE_CLAMP
    v = math.log(n_pos / n_neg)
    return min(BASE_SCORE_CLAMP, max(-BASE_SCORE_CLAMP, v))


def _seq_sum(x: np.ndarray) -> float:
    # Sequential left fold; bit-identical to the kernels' accumulation order.
    if x.size == 0:
        return 0.0
    return float(np.cumsum(x)[-1])


# --- split search ----------------------------------------------------------


def _banned_by_feature(c: ConstraintSet, prefix: tuple) -> dict[int, list]:
    out: dict[int, list] = {}
    for sig in c.forbidden:
        if sig[-1] != LEAF and sig[:-1] == prefix:
            fid, _kind, value = sig[-1]
            out.setdefault(fid, []).append(value)
    return out


def best_split(
    d: Dataset,
    sample_ids: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    params: FitParams,
    c: ConstraintSet,
    prefix: tuple = (),
) -> Optional[tuple[SplitRule, float]]:
    """Exhaustive best split over all allowed features for one node.

    Candidates with gain <= min_gain, either side under min_leaf, a blocked
    feature, or a (prefix, rule) match in forbidden_paths are skipped.
    Ties break to the lower feature id, then the lower threshold/code.
    """
    ids = np.asarray(sample_ids, dtype=np.intp)
    if ids.size and not np.all(ids[1:] > ids[:-1]):
        ids = np.unique(ids)
    n = int(ids.size)
    if n < 2 or n < 2 * params.min_leaf:
        return None
    g_tot = _seq_sum(g[ids])
    h_tot = _seq_sum(h[ids])
    banned = _banned_by_feature(c, prefix)
    mask: np.ndarray | None = None
    best_gain = -math.inf
    best_rule: Optional[SplitRule] = None
    for f in d.features:
        if f.id in c.blocked:
            continue
        col = d.columns[f.id]
        if f.kind == NUMERIC:
            if mask is None:
                mask = np.zeros(d.n_samples, dtype=np.uint8)
                mask[ids] = 1
            banned_arr = np.array(sorted(banned.get(f.id, ())), dtype=np.float64)
            found, gain, value = kernels.best_numeric_split(
                d.presort(f.id), mask, col, g, h, g_tot, h_tot, n,
                params.lam, params.min_leaf, banned_arr,
            )
            rule_value: float | int = float(value)
        else:
            banned_arr = np.array(sorted(int(v) for v in banned.get(f.id, ())), dtype=np.int32)
            found, gain, value = kernels.best_categorical_split(
                ids, col, g, h, g_tot, h_tot, len(d.categories[f.id]),
                params.lam, params.min_leaf, banned_arr,
            )
            rule_value = int(value)
        if found and gain > params.min_gain and gain > best_gain:
            best_gain = gain
            best_rule = SplitRule(feature=f.id, kind=f.kind, value=rule_value)
    if best_rule is None:
        return None
    return best_rule, best_gain


def _goes_left(rule: SplitRule, col: np.ndarray, ids: np.ndarray) -> np.ndarray:
    if rule.kind == NUMERIC:
        return col[ids] < rule.value
    return col[ids] == rule.value


def learn_tree(
    d: Dataset,
    scores: np.ndarray,
    params: FitParams,
    c: ConstraintSet,
    depth_limit: int,
) -> Tree:
    """Grow one tree breadth-first to depth_limit (edges from the root).

    scores are the current ensemble outputs F_{m-1}(x_i); gradients and
    hessians are computed here.
    """
    labels = d.labels
    g, h = logistic_grad_hess(labels.astype(np.float64), scores)
    n = d.n_samples
    nodes = [TreeNode(id=0)]
    queue: deque = deque([(0, np.arange(n, dtype=np.intp), 0, ())])
    while queue:
        nid, ids, depth, prefix = queue.popleft()
        node = nodes[nid]
        node.depth = depth
        node.n = int(ids.size)
        node.n_pos = int(labels[ids].sum())
        node.n_neg = node.n - node.n_pos
        node.G = _seq_sum(g[ids])
        node.H = _seq_sum(h[ids])
        found = None
        if depth < depth_limit:
            found = best_split(d, ids, g, h, params, c, prefix)
        if found is None:
            node.rule = None
            node.value = leaf_value(node.G, node.H, params.lam)
            continue
        rule, _gain = found
        go_left = _goes_left(rule, d.columns[rule.feature], ids)
        left_ids = ids[go_left]
        right_ids = ids[~go_left]
        node.rule = rule
        node.left = len(nodes)
        node.right = len(nodes) + 1
        nodes.append(TreeNode(id=node.left))
        nodes.append(TreeNode(id=node.right))
        step = rule.as_tuple()
        queue.append((node.left, left_ids, depth + 1, prefix + ((step, "left"),)))
        queue.append((node.right, right_ids, depth + 1, prefix + ((step, "right"),)))
    return Tree(nodes=nodes)


# --- routing ---------------------------------------------------------------


def tree_output_vector(tree: Tree, d: Dataset) -> np.ndarray:
    """Raw leaf value per sample (no gamma, no shrinkage)."""
    out = np.zeros(d.n_samples, dtype=np.float64)
    stack = [(0, np.arange(d.n_samples, dtype=np.intp))]
    while stack:
        nid, ids = stack.pop()
        node = tree.nodes[nid]
        if node.is_leaf:
            out[ids] = node.value
            continue
        go_left = _goes_left(node.rule, d.columns[node.rule.feature], ids)
        stack.append((node.left, ids[go_left]))
        stack.append((node.right, ids[~go_left]))
    return out


def route_all(tree: Tree, d: Dataset) -> dict[int, np.ndarray]:
    """Resident sample ids for every node (root gets all)."""
    out: dict[int, np.ndarray] = {}
    stack = [(0, np.arange(d.n_samples, dtype=np.intp))]
    while stack:
        nid, ids = stack.pop()
        out[nid] = ids
        node = tree.nodes[nid]
        if node.is_leaf:
            continue
        go_left = _goes_left(node.rule, d.columns[node.rule.feature], ids)
        stack.append((node.left, ids[go_left]))
        stack.append((node.right, ids[~go_left]))
    return out


def score_dataset(e: Ensemble, d: Dataset) -> np.ndarray:
    scores = np.full(d.n_samples, e.base_score, dtype=np.float64)
    for tree, gamma in zip(e.trees, e.gammas):
        scores = scores + gamma * e.shrinkage * tree_output_vector(tree, d)
    return scores


def predict(e: Ensemble, x: Sequence) -> tuple[float, int]:
    """Score and label for one encoded feature vector.

    Categorical cells are codes; an unseen code fails every equality test and
    routes right. Numeric NaN also routes right. Never raises on odd values.
    """
    s = e.base_score
    for tree, gamma in zip(e.trees, e.gammas):
        node = tree.nodes[0]
        while not node.is_leaf:
            r = node.rule
            v = x[r.feature]
            if r.kind == NUMERIC:
                go_left = float(v) < r.value
            else:
                go_left = int(v) == r.value
            node = tree.nodes[node.left if go_left else node.right]
        s += gamma * e.shrinkage * node.value
    return s, (1 if s >= 0.0 else 0)


def error_rate(e: Ensemble, d: Dataset) -> float:
    scores = score_dataset(e, d)
    preds = (scores >= 0.0).astype(np.uint8)
    return float(np.count_nonzero(preds != d.labels)) / d.n_samples


# --- line search and fitting ------------------------------------------------


GOLDEN_TOL = 1e-4
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def line_search_gamma(tree: Tree, d: Dataset, scores: np.ndarray) -> float:
    """Step length in [0, 2] minimizing the stage deviance.

    Golden-section search to width 1e-4, then a probe over
    {gamma_hat, 0, 0.5, 1, 1.5, 2} keeping the first minimum; a tree with
    all-zero outputs returns exactly 1.0.
    """
    labels = d.labels.astype(np.float64)
    t = tree_output_vector(tree, d)
    if not np.any(t):
        return 1.0

    def phi(gamma: float) -> float:
        return deviance(labels, scores + gamma * t)

    a, b = 0.0, 2.0
    c = b - _INVPHI * (b - a)
    dd = a + _INVPHI * (b - a)
    fc, fd = phi(c), phi(dd)
    while b - a > GOLDEN_TOL:
        if fc < fd:
            b, dd, fd = dd, c, fc
            c = b - _INVPHI * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, dd, fd
            dd = a + _INVPHI * (b - a)
            fd = phi(dd)
    gamma_hat = 0.5 * (a + b)
    best_g, best_f = gamma_hat, phi(gamma_hat)
    for cand in (0.0, 0.5, 1.0, 1.5, 2.0):
        f = phi(cand)
        if f < best_f:
            best_g, best_f = cand, f
    return best_g


def fit_ensemble(
    d: Dataset,
    params: FitParams,
    c: ConstraintSet | None = None,
    on_stage: Callable[[int, Tree, float, np.ndarray], None] | None = None,
) -> Ensemble:
    """Fit params.trees stages on d under constraints c.

    Training deviance is checked non-increasing (1e-9 slack) after every
    stage; a violation raises BoostingError rather than returning a bad
    model.
    """
    if d.n_samples == 0:
        raise BoostingError("empty training set")
    c = c or ConstraintSet()
    labels = d.labels.astype(np.float64)
    base = base_score_for(d.labels)
    scores = np.full(d.n_samples, base, dtype=np.float64)
    prev_dev = deviance(labels, scores)
    trees: list[Tree] = []
    gammas: list[float] = []
    for m in range(params.trees):
        tree = learn_tree(d, scores, params, c, params.depth)
        gamma = line_search_gamma(tree, d, scores)
        scores = scores + gamma * params.eta * tree_output_vector(tree, d)
        dev = deviance(labels, scores)
        if dev > prev_dev + 1e-9:
            raise BoostingError(f"stage {m + 1}: deviance rose {prev_dev} -> {dev}")
        prev_dev = dev
        trees.append(tree)
        gammas.append(gamma)
        if on_stage is not None:
            on_stage(m + 1, tree, gamma, scores)
    return Ensemble(base_score=base, shrinkage=params.eta, lam=params.lam, trees=trees, gammas=gammas)


# --- structural edits -------------------------------------------------------


def _renumber_bfs(root_old: int, nodes: list[TreeNode], keep_leaf: dict[int, float] | None = None) -> list[TreeNode]:
    """Rebuild a node list in BFS order starting at root_old.

    keep_leaf maps old node ids that must become leaves to their new value;
    their descendants are dropped.
    """
    keep_leaf = keep_leaf or {}
    new_nodes: list[TreeNode] = []
    queue: deque = deque([(root_old, 0)])
    mapping: dict[int, int] = {root_old: 0}
    new_nodes.append(None)  # type: ignore[arg-type]
    while queue:
        old_id, new_id = queue.popleft()
        src = nodes[old_id]
        node = TreeNode(
            id=new_id, rule=src.rule, value=src.value,
            n=src.n, n_pos=src.n_pos, n_neg=src.n_neg, G=src.G, H=src.H,
        )
        if old_id in keep_leaf:
            node.rule = None
            node.value = keep_leaf[old_id]
        if node.rule is not None:
            node.left = len(new_nodes)
            mapping[src.left] = node.left
            new_nodes.append(None)  # type: ignore[arg-type]
            queue.append((src.left, node.left))
            node.right = len(new_nodes)
            mapping[src.right] = node.right
            new_nodes.append(None)  # type: ignore[arg-type]
            queue.append((src.right, node.right))
        new_nodes[new_id] = node
    _assign_depths(new_nodes)
    return new_nodes


def _assign_depths(nodes: list[TreeNode]) -> None:
    nodes[0].depth = 0
    for node in nodes:
        if node.rule is not None:
            nodes[node.left].depth = node.depth + 1
            nodes[node.right].depth = node.depth + 1


def collapse_node(tree: Tree, node_id: int, lam: float) -> Tree:
    """Turn an internal node into a leaf (Newton value from its own G, H)."""
    node = tree.nodes[node_id]
    value = leaf_value(node.G, node.H, lam)
    nodes = _renumber_bfs(0, tree.nodes, keep_leaf={node_id: value})
    return Tree(nodes=nodes, edited=True)


def expand_leaf(
    tree: Tree,
    node_id: int,
    rule: SplitRule,
    left_stats: tuple[int, int, float, float],
    right_stats: tuple[int, int, float, float],
    lam: float,
) -> Tree:
    """Split a leaf in two; stats tuples are (n, n_pos, G, H)."""
    nodes = [replace(n) for n in tree.nodes]
    node = nodes[node_id]
    node.rule = rule
    node.value = 0.0
    lid, rid = len(nodes), len(nodes) + 1
    node.left, node.right = lid, rid
    for nid, (cn, cpos, cG, cH) in ((lid, left_stats), (rid, right_stats)):
        nodes.append(
            TreeNode(
                id=nid, rule=None, value=leaf_value(cG, cH, lam),
                n=cn, n_pos=cpos, n_neg=cn - cpos, G=cG, H=cH,
            )
        )
    nodes = _renumber_bfs(0, nodes)
    return Tree(nodes=nodes, edited=True)


def reweight_tree(tree: Tree, d: Dataset, g: np.ndarray, h: np.ndarray, labels: np.ndarray, lam: float) -> Tree:
    """Recompute every node's stats and every leaf's Newton value against
    fresh residuals, keeping the structure and the edited flag."""
    resident = route_all(tree, d)
    nodes = []
    for src in tree.nodes:
        ids = resident[src.id]
        n = int(ids.size)
        n_pos = int(labels[ids].sum())
        G = _seq_sum(g[ids])
        H = _seq_sum(h[ids])
        node = TreeNode(
            id=src.id, rule=src.rule, left=src.left, right=src.right,
            n=n, n_pos=n_pos, n_neg=n - n_pos, G=G, H=H, depth=src.depth,
        )
        node.value = leaf_value(G, H, lam) if src.rule is None else 0.0
        nodes.append(node)
    return Tree(nodes=nodes, edited=tree.edited)


# --- path signatures --------------------------------------------------------


def node_prefixes(tree: Tree) -> dict[int, tuple]:
    """Root-to-node (rule, direction) step tuples for every node id."""
    prefixes: dict[int, tuple] = {0: ()}
    for node in tree.nodes:
        if node.rule is None:
            continue
        step = (node.rule.as_tuple(), "left")
        prefixes[node.left] = prefixes[node.id] + (step,)
        prefixes[node.right] = prefixes[node.id] + ((node.rule.as_tuple(), "right"),)
    return prefixes


def path_signature(tree: Tree, node_id: int) -> tuple:
    """Signature = prefix steps plus a terminal (the node's rule, or a leaf
    marker). Two nodes match iff their signatures compare equal."""
    prefix = node_prefixes(tree)[node_id]
    node = tree.nodes[node_id]
    terminal = LEAF if node.rule is None else node.rule.as_tuple()
    return prefix + (terminal,)


def match_signature(tree: Tree, sig: tuple) -> Optional[int]:
    """Node id in tree whose signature equals sig, or None."""
    node = tree.nodes[0]
    for (rule_t, direction) in sig[:-1]:
        if node.rule is None or node.rule.as_tuple() != rule_t:
            return None
        node = tree.nodes[node.left if direction == "left" else node.right]
    terminal = sig[-1]
    if terminal == LEAF:
        return node.id if node.rule is None else None
    return node.id if (node.rule is not None and node.rule.as_tuple() == terminal) else None


# --- serialization -----------------------------------------------------------


def _rule_value_json(kind: str, value) -> float | int:
    return float(value) if kind == NUMERIC else int(value)


def node_to_json(node: TreeNode) -> dict:
    if node.rule is None:
        return {
            "id": node.id, "kind": "leaf",
            "feature": None, "test_kind": None, "threshold_or_code": None,
            "left": None, "right": None,
            "value": float(node.value),
            "n": node.n, "n_pos": node.n_pos, "n_neg": node.n_neg,
            "G": float(node.G), "H": float(node.H),
        }
    return {
        "id": node.id, "kind": "internal",
        "feature": node.rule.feature,
        "test_kind": node.rule.kind,
        "threshold_or_code": _rule_value_json(node.rule.kind, node.rule.value),
        "left": node.left, "right": node.right,
        "value": None,
        "n": node.n, "n_pos": node.n_pos, "n_neg": node.n_neg,
        "G": float(node.G), "H": float(node.H),
    }


def tree_to_json(tree: Tree) -> dict:
    return {"edited": tree.edited, "nodes": [node_to_json(n) for n in tree.nodes]}


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "base_score": float(e.base_score),
        "shrinkage": float(e.shrinkage),
        "lambda": float(e.lam),
        "gammas": [float(g) for g in e.gammas],
        "trees": [tree_to_json(t) for t in e.trees],
    }


def _node_from_json(obj: dict) -> TreeNode:
    if obj["kind"] == "leaf":
        rule = None
    elif obj["kind"] == "internal":
        kind = obj["test_kind"]
        if kind not in (NUMERIC, CATEGORICAL):
            raise BoostingError(f"bad test_kind {kind!r}")
        value = obj["threshold_or_code"]
        rule = SplitRule(
            feature=int(obj["feature"]), kind=kind,
            value=float(value) if kind == NUMERIC else int(value),
        )
    else:
        raise BoostingError(f"bad node kind {obj['kind']!r}")
    return TreeNode(
        id=int(obj["id"]), rule=rule,
        left=-1 if obj["left"] is None else int(obj["left"]),
        right=-1 if obj["right"] is None else int(obj["right"]),
        value=0.0 if obj["value"] is None else float(obj["value"]),
        n=int(obj["n"]), n_pos=int(obj["n_pos"]), n_neg=int(obj["n_neg"]),
        G=float(obj["G"]), H=float(obj["H"]),
    )


def tree_from_json(obj: dict) -> Tree:
    nodes = [_node_from_json(o) for o in obj["nodes"]]
    for i, node in enumerate(nodes):
        if node.id != i:
            raise BoostingError(f"node ids must be 0..n-1, got {node.id} at {i}")
    if not nodes:
        raise BoostingError("tree must have at least one node")
    _assign_depths(nodes)
    return Tree(nodes=nodes, edited=bool(obj.get("edited", False)))


def ensemble_from_json(obj: dict) -> Ensemble:
    try:
        trees = [tree_from_json(t) for t in obj["trees"]]
        gammas = [float(g) for g in obj["gammas"]]
        e = Ensemble(
            base_score=float(obj["base_score"]),
            shrinkage=float(obj["shrinkage"]),
            lam=float(obj["lambda"]),
            trees=trees,
            gammas=gammas,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BoostingError(f"bad model JSON: {exc}") from None
    if len(e.trees) != len(e.gammas):
        raise BoostingError("bad model JSON: trees/gammas length mismatch")
    return e


def signature_to_json(sig: tuple) -> list:
    out = []
    for (rule_t, direction) in sig[:-1]:
        fid, kind, value = rule_t
        out.append(
            {"feature": fid, "test_kind": kind,
             "threshold_or_code": _rule_value_json(kind, value), "dir": direction}
        )
    terminal = sig[-1]
    if terminal == LEAF:
        out.append({"leaf": True})
    else:
        fid, kind, value = terminal
        out.append({"feature": fid, "test_kind": kind, "threshold_or_code": _rule_value_json(kind, value)})
    return out


def signature_from_json(steps: list) -> tuple:
    sig: list = []
    for i, step in enumerate(steps):
        if step.get("leaf"):
            if i != len(steps) - 1:
                raise BoostingError("leaf marker must terminate a signature")
            sig.append(LEAF)
            continue
        kind = step["test_kind"]
        value = float(step["threshold_or_code"]) if kind == NUMERIC else int(step["threshold_or_code"])
        rule_t = (int(step["feature"]), kind, value)
        if "dir" in step:
            if step["dir"] not in ("left", "right"):
                raise BoostingError(f"bad dir {step['dir']!r}")
            sig.append((rule_t, step["dir"]))
        else:
            if i != len(steps) - 1:
                raise BoostingError("terminal rule must end the signature")
            sig.append(rule_t)
    if not sig:
        raise BoostingError("empty signature")
    return tuple(sig)


def constraints_to_json(c: ConstraintSet) -> dict:
    sigs = [signature_to_json(s) for s in c.forbidden]
    sigs.sort(key=jsonutil.dumps)
    return {"blocked": sorted(int(f) for f in c.blocked), "forbidden_paths": sigs}


def constraints_from_json(obj: dict) -> ConstraintSet:
    return ConstraintSet(
        blocked=frozenset(int(f) for f in obj.get("blocked", ())),
        forbidden=frozenset(signature_from_json(s) for s in obj.get("forbidden_paths", ())),
    )


def snapshot_to_json(e: Ensemble, c: ConstraintSet) -> dict:
    obj = ensemble_to_json(e)
    obj["constraints"] = constraints_to_json(c)
    return obj


def snapshot_str(e: Ensemble, c: ConstraintSet) -> str:
    return jsonutil.dumps(snapshot_to_json(e, c))


def snapshot_parse(obj: dict | str) -> tuple[Ensemble, ConstraintSet]:
    if isinstance(obj, str):
        obj = jsonutil.loads(obj)
    e = ensemble_from_json(obj)
    c = constraints_from_json(obj.get("constraints", {}))
    return e, c
