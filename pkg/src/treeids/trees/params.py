"""Hyperparameters shared by the four learners."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TreeParams:
    """Training knobs. Defaults are the usual values from the algorithm
    literature; every learner reads only the fields it needs.

    min_node_size: a node with fewer rows becomes a leaf.
    max_depth: None means unlimited.
    alpha: significance level for CHAID merging/splitting and QUEST.
    prune_cf: confidence factor for pessimistic pruning (gain-ratio tree).
    cc_holdout_fraction: share of training rows held out to pick the
        cost-complexity subtree (CART); 0 disables pruning.
    bin_count: equal-frequency bins used to discretize for CHAID.
    seed: drives every stochastic choice (holdout draw, 2-means init).
    """

    min_node_size: int = 2
    max_depth: int | None = None
    alpha: float = 0.05
    prune_cf: float = 0.25
    cc_holdout_fraction: float = 0.2
    bin_count: int = 10
    seed: int = 1

    def __post_init__(self):
        if self.min_node_size < 1:
            raise ValueError("min_node_size must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if not 0.0 < self.prune_cf < 1.0:
            raise ValueError("prune_cf must be in (0, 1)")
        if not 0.0 <= self.cc_holdout_fraction < 1.0:
            raise ValueError("cc_holdout_fraction must be in [0, 1)")
        if self.bin_count < 1:
            raise ValueError("bin_count must be >= 1")
