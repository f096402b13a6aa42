from .core import (
    BoostingError,
    ConstraintSet,
    DegenerateLeafError,
    Ensemble,
    FitParams,
    SplitRule,
    Tree,
    TreeNode,
    base_score_for,
    best_split,
    deviance,
    ensemble_from_json,
    ensemble_to_json,
    error_rate,
    fit_ensemble,
    leaf_value,
    learn_tree,
    line_search_gamma,
    logistic_grad_hess,
    match_signature,
    path_signature,
    predict,
    score_dataset,
    split_gain,
    tree_output_vector,
)
from .kernels import BACKEND, available_backends

__all__ = [
    "BACKEND",
    "BoostingError",
    "ConstraintSet",
    "DegenerateLeafError",
    "Ensemble",
    "FitParams",
    "SplitRule",
    "Tree",
    "TreeNode",
    "available_backends",
    "base_score_for",
    "best_split",
    "deviance",
    "ensemble_from_json",
    "ensemble_to_json",
    "error_rate",
    "fit_ensemble",
    "leaf_value",
    "learn_tree",
    "line_search_gamma",
    "logistic_grad_hess",
    "match_signature",
    "path_signature",
    "predict",
    "score_dataset",
    "split_gain",
    "tree_output_vector",
]
