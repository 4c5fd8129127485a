"""Fitting and applying the record-to-vector pipeline.

Categorical tokens are mapped through transformation tables built from
the training data (first-appearance order, one reserved code per
feature for unseen tokens), every feature is min-max scaled into [0,1]
with clamping, an optional information-gain mask drops features, and
equal-frequency bins discretize continuous columns for the learner
that needs nominal inputs. Everything is fitted from the training set
only; a fitted state is immutable and shared.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .dataset import CATEGORICAL_POSITIONS, N_FEATURES, ConnectionRecord, NORMAL_LABEL
from .trees import kernels
from .trees.model import CONTINUOUS, LabeledMatrix


@dataclass(frozen=True)
class PreprocessOptions:
    top_k: int | None = None  # None keeps all 41 features
    bin_count: int = 10
    fit_bins: bool = True

    def __post_init__(self):
        if self.top_k is not None and not 1 <= self.top_k <= N_FEATURES:
            raise ValueError(f"top_k must be in 1..{N_FEATURES}")
        if self.bin_count < 1:
            raise ValueError("bin_count must be >= 1")


@dataclass(frozen=True)
class PreprocessState:
    """Everything fitted on the training set, in one immutable bundle.

    encoding: categorical position -> {token: code}; the reserved code
        for unseen tokens is len(table).
    minmax: per raw feature, (min, max) of the encoded training values.
    mask: retained feature positions, ascending.
    scores: information gain of each raw feature against normal/attack.
    bins: retained continuous position -> ascending cut points
        (empty dict when bins were not requested).
    """

    encoding: dict[int, dict[str, int]]
    minmax: tuple[tuple[float, float], ...]
    mask: tuple[int, ...]
    scores: tuple[float, ...]
    bins: dict[int, tuple[float, ...]]

    def reserved_code(self, pos: int) -> int:
        return len(self.encoding[pos])

    def code_count(self, pos: int) -> int:
        return len(self.encoding[pos]) + 1


def fit_preprocess(
    train: list[ConnectionRecord],
    options: PreprocessOptions | None = None,
    is_attack=None,
) -> PreprocessState:
    """Fit the full pipeline on training records.

    ``is_attack`` gives the binary target used by the feature ranking;
    by default a record is an attack when its label is not "normal".
    """
    if not train:
        raise ValueError("cannot fit preprocessing on an empty training set")
    options = options or PreprocessOptions()
    if is_attack is None:
        is_attack = [r.label != NORMAL_LABEL for r in train]

    encoding: dict[int, dict[str, int]] = {pos: {} for pos in CATEGORICAL_POSITIONS}
    for rec in train:
        for pos in CATEGORICAL_POSITIONS:
            token = rec.features[pos]
            table = encoding[pos]
            if token not in table:
                table[token] = len(table)

    raw = _encode_raw(train, encoding)
    minmax = tuple((float(raw[:, j].min()), float(raw[:, j].max())) for j in range(N_FEATURES))

    target = np.array([1 if a else 0 for a in is_attack], dtype=np.int32)
    kinds_all = tuple(
        len(encoding[j]) + 1 if j in encoding else CONTINUOUS for j in range(N_FEATURES)
    )
    scores = rank_features(raw, kinds_all, target)

    if options.top_k is None:
        mask = tuple(range(N_FEATURES))
    else:
        ranked = sorted(range(N_FEATURES), key=lambda j: (-scores[j], j))
        mask = tuple(sorted(ranked[: options.top_k]))

    bins: dict[int, tuple[float, ...]] = {}
    if options.fit_bins:
        for j in mask:
            if j in encoding:
                continue
            lo, hi = minmax[j]
            normalized = _scale(raw[:, j], lo, hi)
            bins[j] = fit_bins(normalized.tolist(), options.bin_count)

    return PreprocessState(
        encoding={pos: dict(tbl) for pos, tbl in encoding.items()},
        minmax=minmax,
        mask=mask,
        scores=tuple(scores),
        bins=bins,
    )


def _encode_raw(records, encoding) -> np.ndarray:
    """All 41 columns as floats, categorical tokens replaced by codes."""
    X = np.empty((len(records), N_FEATURES), dtype=np.float64)
    for i, rec in enumerate(records):
        for j, value in enumerate(rec.features):
            if j in encoding:
                X[i, j] = encoding[j][value]
            else:
                X[i, j] = value
    return X


def transform(record: ConnectionRecord, state: PreprocessState) -> tuple[float, ...]:
    """Record -> scaled feature vector, total over any input.

    Unseen categorical tokens get the reserved code before scaling;
    out-of-range numerics clamp to [0, 1]; constant features map to 0.
    """
    out = []
    for j in state.mask:
        value = record.features[j]
        if j in state.encoding:
            table = state.encoding[j]
            value = float(table.get(value, len(table)))
        lo, hi = state.minmax[j]
        out.append(_scale_one(float(value), lo, hi))
    return tuple(out)


def _scale_one(x: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    scaled = (x - lo) / (hi - lo)
    return min(1.0, max(0.0, scaled))


def _scale(col: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if hi <= lo:
        return np.zeros_like(col)
    return np.clip((col - lo) / (hi - lo), 0.0, 1.0)


def rank_features(raw: np.ndarray, kinds, target: np.ndarray) -> list[float]:
    """Information gain of every feature against a class target.

    Continuous features are scored by their best single threshold over
    a full candidate scan; nominal features by their code partition.
    Single-class targets give all-zero gains.
    """
    n_classes = int(target.max()) + 1 if len(target) else 1
    scores: list[float] = []
    for j, kind in enumerate(kinds):
        col = raw[:, j]
        if kind == CONTINUOUS:
            order = np.argsort(col, kind="stable")
            res = kernels.best_threshold_gain(
                np.ascontiguousarray(col[order], dtype=np.float64),
                np.ascontiguousarray(target[order], dtype=np.int32),
                n_classes,
            )
            scores.append(max(0.0, res[0]) if res is not None else 0.0)
        else:
            scores.append(_nominal_gain(col, target, kind, n_classes))
    return scores


def _nominal_gain(col, target, n_codes, n_classes) -> float:
    table = kernels.contingency(
        np.ascontiguousarray(col, dtype=np.float64),
        np.ascontiguousarray(target, dtype=np.int32),
        n_codes,
        n_classes,
    )
    n = len(col)
    totals = [int(table[:, k].sum()) for k in range(n_classes)]
    gain = _entropy_bits(totals, n)
    for c in range(n_codes):
        row = [int(v) for v in table[c]]
        size = sum(row)
        if size:
            gain -= (size / n) * _entropy_bits(row, size)
    return max(0.0, gain)


def _entropy_bits(counts, total) -> float:
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def fit_bins(values, bin_count: int) -> tuple[float, ...]:
    """Equal-frequency cut points between distinct values.

    A quantile landing inside a run of equal values snaps to the end of
    the run, so heavy-tailed count features (mostly zeros) still get a
    zero-vs-rest boundary instead of collapsing to one bin. Duplicate
    cuts drop, so the realized bin count may be lower than asked.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    if bin_count == 1:
        return ()
    v = sorted(values)
    n = len(v)
    cuts: list[float] = []
    for j in range(1, bin_count):
        i = round(j * n / bin_count)
        if i < 1:
            continue
        while i < n and v[i] == v[i - 1]:
            i += 1
        if i > n - 1:
            continue
        cut = (v[i - 1] + v[i]) / 2.0
        if not cuts or cut > cuts[-1]:
            cuts.append(cut)
    return tuple(cuts)


def apply_bins(value: float, cuts: tuple[float, ...]) -> int:
    """Bin index for a value; totally defined beyond the extremes."""
    return bisect_right(cuts, value)


# --- matrices for the learners --------------------------------------------


def matrix_for_trees(
    records: list[ConnectionRecord],
    state: PreprocessState,
    labels: list[str],
    classes: tuple[str, ...],
    discretize: bool = False,
) -> LabeledMatrix:
    """Build the learners' input from records plus relabeled targets.

    Categorical columns carry their integer codes (kind = code count,
    reserved included); continuous columns carry scaled values, or bin
    indices when ``discretize`` is set.
    """
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[lbl] for lbl in labels], dtype=np.int32)
    X = np.empty((len(records), len(state.mask)), dtype=np.float64)
    kinds: list[int] = []
    for out_j, j in enumerate(state.mask):
        if j in state.encoding:
            kinds.append(state.code_count(j))
        elif discretize:
            cuts = state.bins.get(j)
            if cuts is None:
                raise ValueError(
                    f"no bins fitted for feature {j}; fit with fit_bins enabled"
                )
            kinds.append(len(cuts) + 1)
        else:
            kinds.append(CONTINUOUS)

    for i, rec in enumerate(records):
        X[i, :] = vector_for_trees(rec, state, discretize)
    return LabeledMatrix(X, tuple(kinds), y, classes)


def vector_for_trees(
    record: ConnectionRecord, state: PreprocessState, discretize: bool = False
):
    """Single-record version of matrix_for_trees's feature encoding."""
    out = []
    for j in state.mask:
        value = record.features[j]
        if j in state.encoding:
            table = state.encoding[j]
            out.append(float(table.get(value, len(table))))
            continue
        lo, hi = state.minmax[j]
        scaled = _scale_one(float(value), lo, hi)
        if discretize:
            out.append(float(apply_bins(scaled, state.bins[j])))
        else:
            out.append(scaled)
    return out


# --- serialization ----------------------------------------------------------

_FORMAT_HEADER = "treeids-preprocess v1"


def dump_state(state: PreprocessState) -> str:
    lines = [_FORMAT_HEADER]
    lines.append("[encoding]")
    for pos in sorted(state.encoding):
        lines.append(f"feature {pos}")
        for token, code in sorted(state.encoding[pos].items(), key=lambda kv: kv[1]):
            lines.append(f"{token} {code}")
    lines.append("[minmax]")
    for j, (lo, hi) in enumerate(state.minmax):
        lines.append(f"{j} {lo!r} {hi!r}")
    lines.append("[mask]")
    lines.append(" ".join(str(j) for j in state.mask))
    lines.append("[scores]")
    lines.append(" ".join(repr(s) for s in state.scores))
    lines.append("[bins]")
    for j in sorted(state.bins):
        cuts = " ".join(repr(c) for c in state.bins[j])
        lines.append(f"{j} {cuts}".rstrip())
    return "\n".join(lines) + "\n"


def load_state(text: str) -> PreprocessState:
    lines = text.splitlines()
    if not lines or lines[0] != _FORMAT_HEADER:
        raise ValueError("unrecognized preprocess state format")
    section = None
    encoding: dict[int, dict[str, int]] = {}
    minmax: list[tuple[float, float]] = []
    mask: tuple[int, ...] = ()
    scores: tuple[float, ...] = ()
    bins: dict[int, tuple[float, ...]] = {}
    current_pos = None
    for line in lines[1:]:
        if not line.strip():
            continue
        if line.startswith("["):
            section = line.strip()
            continue
        if section == "[encoding]":
            if line.startswith("feature "):
                current_pos = int(line.split()[1])
                encoding[current_pos] = {}
            else:
                token, code = line.rsplit(" ", 1)
                encoding[current_pos][token] = int(code)
        elif section == "[minmax]":
            _j, lo, hi = line.split()
            minmax.append((float(lo), float(hi)))
        elif section == "[mask]":
            mask = tuple(int(t) for t in line.split())
        elif section == "[scores]":
            scores = tuple(float(t) for t in line.split())
        elif section == "[bins]":
            parts = line.split()
            bins[int(parts[0])] = tuple(float(t) for t in parts[1:])
    return PreprocessState(encoding, tuple(minmax), mask, scores, bins)
