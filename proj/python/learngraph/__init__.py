"""Python bindings for the learngraph C++ core."""

from ._core import (
    bootstrap_update,
    build_knn_graph,
    config_keys,
    eval_classify,
    load_dataset,
    nt_xent,
    process,
    score_clustering,
    train,
)

__all__ = [
    "bootstrap_update",
    "build_knn_graph",
    "config_keys",
    "eval_classify",
    "load_dataset",
    "nt_xent",
    "process",
    "score_clustering",
    "train",
]
