"""Four decision-tree learners over one shared model."""

from .c5 import train_c5
from .cart import train_cart
from .chaid import train_chaid
from .kernels import BACKEND
from .model import (
    CONTINUOUS,
    Internal,
    LabeledMatrix,
    Leaf,
    NominalPartition,
    Threshold,
    TreeModel,
    dump_tree,
    leaf_for,
    load_tree,
    node_count,
    predict,
)
from .params import TreeParams
from .quest import train_quest
from .stats import chi_square, entropy, gain_ratio, gini

LEARNERS = {
    "C5": train_c5,
    "CART": train_cart,
    "CHAID": train_chaid,
    "QUEST": train_quest,
}

__all__ = [
    "BACKEND",
    "CONTINUOUS",
    "Internal",
    "LabeledMatrix",
    "Leaf",
    "LEARNERS",
    "NominalPartition",
    "Threshold",
    "TreeModel",
    "TreeParams",
    "chi_square",
    "dump_tree",
    "entropy",
    "gain_ratio",
    "gini",
    "leaf_for",
    "load_tree",
    "node_count",
    "predict",
    "train_c5",
    "train_cart",
    "train_chaid",
    "train_quest",
]
