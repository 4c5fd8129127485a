"""Learner-agnostic decision-tree model: nodes, prediction, text I/O.

All four learners produce the same structure so downstream code
(architectures, evaluation, serialization) never cares which algorithm
grew a tree. Prediction is total: thresholds clamp nothing, nominal
codes outside every group fall back to the child that held the most
training rows at that node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import TreeParams

CONTINUOUS = 0  # kind tag: 0 = continuous, k >= 1 = nominal with codes 0..k-1


@dataclass(frozen=True)
class LabeledMatrix:
    """Post-preprocess training data for the learners.

    ``X`` is row-major float64; ``kinds[j]`` is 0 for a continuous
    column or the code count for a nominal column whose values are
    integer codes stored as floats. ``y`` holds class indices into
    ``classes``.
    """

    X: np.ndarray
    kinds: tuple[int, ...]
    y: np.ndarray
    classes: tuple[str, ...]

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.int32)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if X.ndim != 2:
            raise ValueError("X must be 2-D")
        if X.shape[0] < 1:
            raise ValueError("training data must contain at least one row")
        if X.shape[1] != len(self.kinds):
            raise ValueError("kinds length must match column count")
        if y.shape != (X.shape[0],):
            raise ValueError("y length must match row count")
        if y.min(initial=0) < 0 or y.max(initial=0) >= len(self.classes):
            raise ValueError("class index out of range")
        for j, k in enumerate(self.kinds):
            if k < 0:
                raise ValueError("kind tags must be >= 0")
            if k > 0:
                col = X[:, j]
                if col.min() < 0 or col.max() >= k:
                    raise ValueError(f"nominal codes out of range in column {j}")


@dataclass(frozen=True)
class Threshold:
    """Binary predicate on a continuous feature: x <= cut goes left."""

    feature: int
    cut: float

    @property
    def arity(self) -> int:
        return 2


@dataclass(frozen=True)
class NominalPartition:
    """Partition of a nominal feature's codes, one child per group.

    Groups are disjoint and cover every code the column can take,
    including the reserved unseen-token code: codes absent at training
    time are folded into the majority child's group.
    """

    feature: int
    groups: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.groups) < 2:
            raise ValueError("a nominal partition needs at least two groups")
        seen: set[int] = set()
        for g in self.groups:
            if seen & g:
                raise ValueError("nominal groups must be disjoint")
            seen |= g

    @property
    def arity(self) -> int:
        return len(self.groups)

    def route(self, code: int) -> int | None:
        for idx, g in enumerate(self.groups):
            if code in g:
                return idx
        return None


@dataclass(frozen=True)
class Leaf:
    class_counts: tuple[int, ...]

    def __post_init__(self):
        if all(c == 0 for c in self.class_counts):
            raise ValueError("leaf counts must not be all zero")


@dataclass(frozen=True)
class Internal:
    predicate: Threshold | NominalPartition
    children: tuple["Leaf | Internal", ...]
    majority_child: int

    def __post_init__(self):
        if len(self.children) != self.predicate.arity:
            raise ValueError("child count must match predicate arity")
        if not 0 <= self.majority_child < len(self.children):
            raise ValueError("majority_child out of range")


@dataclass(frozen=True)
class TreeModel:
    root: Leaf | Internal
    classes: tuple[str, ...]
    learner: str
    n_features: int
    params: TreeParams = field(default_factory=TreeParams)


def predict(model: TreeModel, x) -> tuple[str, float]:
    """Route a feature vector to a leaf.

    Returns ``(class_label, confidence)`` where the confidence is the
    winning class's share of the leaf's training counts. Count ties go
    to the smallest class index.
    """
    if len(x) != model.n_features:
        raise ValueError(
            f"feature vector has {len(x)} values, model expects {model.n_features}"
        )
    node = _route_to_leaf(model.root, x)
    counts = node.class_counts
    best = min(range(len(counts)), key=lambda i: (-counts[i], i))
    return model.classes[best], counts[best] / sum(counts)


def _route_to_leaf(node, x) -> "Leaf":
    while isinstance(node, Internal):
        pred = node.predicate
        if isinstance(pred, Threshold):
            child = 0 if x[pred.feature] <= pred.cut else 1
        else:
            try:
                code = int(x[pred.feature])
            except (OverflowError, ValueError):  # inf/nan in a nominal slot
                code = -1
            routed = pred.route(code)
            child = routed if routed is not None else node.majority_child
        node = node.children[child]
    return node


def node_count(model: TreeModel) -> int:
    def walk(node) -> int:
        if isinstance(node, Leaf):
            return 1
        return 1 + sum(walk(ch) for ch in node.children)

    return walk(model.root)


def leaf_for(model: TreeModel, x) -> Leaf:
    """The leaf that ``predict`` would land on; exposed for evaluation."""
    return _route_to_leaf(model.root, x)


# --- text serialization --------------------------------------------------

_FORMAT_HEADER = "treeids-tree v1"


def dump_tree(model: TreeModel) -> str:
    """Serialize to a line-based text form that reloads bit-exactly.

    Floats are written with repr() so cut points round-trip without
    loss; nodes are listed pre-order.
    """
    for label in model.classes:
        if "," in label or "\n" in label:
            raise ValueError(f"class label not serializable: {label!r}")
    lines = [
        _FORMAT_HEADER,
        f"learner {model.learner}",
        "classes " + ",".join(model.classes),
        f"features {model.n_features}",
        "params " + _params_line(model.params),
    ]

    def walk(node):
        if isinstance(node, Leaf):
            lines.append("L " + ",".join(str(c) for c in node.class_counts))
            return
        pred = node.predicate
        if isinstance(pred, Threshold):
            lines.append(
                f"I t {pred.feature} {pred.cut!r} {len(node.children)} {node.majority_child}"
            )
        else:
            groups = "|".join(
                ",".join(str(c) for c in sorted(g)) for g in pred.groups
            )
            lines.append(
                f"I n {pred.feature} {groups} {len(node.children)} {node.majority_child}"
            )
        for ch in node.children:
            walk(ch)

    walk(model.root)
    return "\n".join(lines) + "\n"


def load_tree(text: str) -> TreeModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _FORMAT_HEADER:
        raise ValueError("unrecognized tree format")
    learner = lines[1].split(" ", 1)[1]
    classes = tuple(lines[2].split(" ", 1)[1].split(","))
    n_features = int(lines[3].split(" ", 1)[1])
    params = _parse_params_line(lines[4].split(" ", 1)[1])

    pos = 5

    def parse_node():
        nonlocal pos
        parts = lines[pos].split(" ")
        pos += 1
        if parts[0] == "L":
            return Leaf(tuple(int(c) for c in parts[1].split(",")))
        if parts[0] != "I":
            raise ValueError(f"bad node line: {lines[pos - 1]!r}")
        kind, feature = parts[1], int(parts[2])
        n_children = int(parts[4])
        majority = int(parts[5])
        if kind == "t":
            pred: Threshold | NominalPartition = Threshold(feature, float(parts[3]))
        else:
            groups = tuple(
                frozenset(int(c) for c in grp.split(","))
                for grp in parts[3].split("|")
            )
            pred = NominalPartition(feature, groups)
        children = tuple(parse_node() for _ in range(n_children))
        return Internal(pred, children, majority)

    root = parse_node()
    if pos != len(lines):
        raise ValueError("trailing data after tree nodes")
    return TreeModel(root, classes, learner, n_features, params)


def _params_line(p: TreeParams) -> str:
    depth = "none" if p.max_depth is None else str(p.max_depth)
    return (
        f"min_node_size={p.min_node_size} max_depth={depth} alpha={p.alpha!r} "
        f"prune_cf={p.prune_cf!r} cc_holdout_fraction={p.cc_holdout_fraction!r} "
        f"bin_count={p.bin_count} seed={p.seed}"
    )


def _parse_params_line(line: str) -> TreeParams:
    kv = dict(item.split("=", 1) for item in line.split(" "))
    return TreeParams(
        min_node_size=int(kv["min_node_size"]),
        max_depth=None if kv["max_depth"] == "none" else int(kv["max_depth"]),
        alpha=float(kv["alpha"]),
        prune_cf=float(kv["prune_cf"]),
        cc_holdout_fraction=float(kv["cc_holdout_fraction"]),
        bin_count=int(kv["bin_count"]),
        seed=int(kv["seed"]),
    )
