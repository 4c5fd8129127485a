"""The two multi-stage designs: sequential phases and independent levels.

The phase cascade trains a binary normal/attack tree on everything, a
category tree on the attack records only, and one attack-type tree per
category on that category's records; at detection time a record only
advances past phase 1 when it was flagged as an attack. The level model
trains three trees on the full training set at increasing label
granularity and always evaluates all three. Both share one preprocess
state fitted on the same training records, so comparisons isolate the
architecture.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import CATEGORIES, ClassLabel, ConnectionRecord, LabelTaxonomy, categorize
from .preprocess import (
    PreprocessOptions,
    PreprocessState,
    dump_state,
    load_state,
    matrix_for_trees,
    vector_for_trees,
)
from .trees import LEARNERS, TreeModel, TreeParams, dump_tree, load_tree, predict

BINARY_CLASSES = ("normal", "attack")
UNSPECIFIED_TYPE = "unspecified"


@dataclass(frozen=True)
class PhaseVerdict:
    is_attack: bool
    category: str | None = None
    attack_type: str | None = None
    trail: tuple[tuple[str, str, float], ...] = ()

    def __post_init__(self):
        if not self.is_attack and (self.category or self.attack_type):
            raise ValueError("normal verdicts carry no category or attack type")
        if self.is_attack and not self.category:
            raise ValueError("attack verdicts carry a category")


@dataclass(frozen=True)
class LevelVerdict:
    l1: tuple[str, float]
    l2: tuple[str, float]
    l3: tuple[str, float]


@dataclass(frozen=True)
class PhaseModel:
    learner: str
    state: PreprocessState
    params: TreeParams
    phase1: TreeModel
    phase2: TreeModel
    phase3: dict[str, TreeModel]
    train_sizes: dict[str, int] = field(default_factory=dict)
    train_seconds: dict[str, float] = field(default_factory=dict)

    @property
    def discretized(self) -> bool:
        return self.learner == "CHAID"

    @property
    def total_train_seconds(self) -> float:
        return sum(self.train_seconds.values())


@dataclass(frozen=True)
class LevelModel:
    learner: str
    state: PreprocessState
    params: TreeParams
    level1: TreeModel
    level2: TreeModel
    level3: TreeModel
    train_sizes: dict[str, int] = field(default_factory=dict)
    train_seconds: dict[str, float] = field(default_factory=dict)

    @property
    def discretized(self) -> bool:
        return self.learner == "CHAID"

    @property
    def total_train_seconds(self) -> float:
        return sum(self.train_seconds.values())


def train_phase_model(
    records: list[ConnectionRecord],
    learner: str,
    params: TreeParams | None = None,
    options: PreprocessOptions | None = None,
    taxonomy: LabelTaxonomy | None = None,
) -> PhaseModel:
    trainer, params, taxonomy = _setup(learner, params, taxonomy)
    labels = [categorize(r.label, taxonomy) for r in records]
    _require_both_kinds(labels)
    state = _fit_state(records, labels, options, learner)
    discretize = learner == "CHAID"

    sizes: dict[str, int] = {}
    seconds: dict[str, float] = {}

    def timed(stage, recs, lbls, classes):
        data = matrix_for_trees(recs, state, lbls, classes, discretize)
        t0 = time.perf_counter()
        model = trainer(data, params)
        seconds[stage] = time.perf_counter() - t0
        sizes[stage] = len(recs)
        return model

    phase1 = timed(
        "phase1",
        records,
        ["attack" if l.is_attack else "normal" for l in labels],
        BINARY_CLASSES,
    )

    attack_pairs = [(r, l) for r, l in zip(records, labels) if l.is_attack]
    cats_present = tuple(c for c in CATEGORIES if any(l.category == c for _r, l in attack_pairs))
    phase2 = timed(
        "phase2",
        [r for r, _l in attack_pairs],
        [l.category for _r, l in attack_pairs],
        cats_present,
    )

    phase3: dict[str, TreeModel] = {}
    for cat in cats_present:
        cat_pairs = [(r, l) for r, l in attack_pairs if l.category == cat]
        types = tuple(sorted({l.attack_type for _r, l in cat_pairs}))
        phase3[cat] = timed(
            f"phase3.{cat}",
            [r for r, _l in cat_pairs],
            [l.attack_type for _r, l in cat_pairs],
            types,
        )
    return PhaseModel(learner, state, params, phase1, phase2, phase3, sizes, seconds)


def train_level_model(
    records: list[ConnectionRecord],
    learner: str,
    params: TreeParams | None = None,
    options: PreprocessOptions | None = None,
    taxonomy: LabelTaxonomy | None = None,
) -> LevelModel:
    trainer, params, taxonomy = _setup(learner, params, taxonomy)
    labels = [categorize(r.label, taxonomy) for r in records]
    _require_both_kinds(labels)
    state = _fit_state(records, labels, options, learner)
    discretize = learner == "CHAID"

    sizes: dict[str, int] = {}
    seconds: dict[str, float] = {}

    def timed(stage, lbls, classes):
        data = matrix_for_trees(records, state, lbls, classes, discretize)
        t0 = time.perf_counter()
        model = trainer(data, params)
        seconds[stage] = time.perf_counter() - t0
        sizes[stage] = len(records)
        return model

    level1 = timed(
        "level1", ["attack" if l.is_attack else "normal" for l in labels], BINARY_CLASSES
    )
    cats_present = tuple(c for c in CATEGORIES if any(l.category == c for l in labels))
    level2 = timed(
        "level2",
        [l.category if l.is_attack else "normal" for l in labels],
        ("normal",) + cats_present,
    )
    types = tuple(sorted({l.attack_type for l in labels if l.is_attack}))
    level3 = timed(
        "level3",
        [l.attack_type if l.is_attack else "normal" for l in labels],
        ("normal",) + types,
    )
    return LevelModel(learner, state, params, level1, level2, level3, sizes, seconds)


def classify_phase(model: PhaseModel, record: ConnectionRecord) -> PhaseVerdict:
    """Run the cascade; phases 2 and 3 fire only on attack flags."""
    x = vector_for_trees(record, model.state, model.discretized)
    label1, conf1 = predict(model.phase1, x)
    trail = [("phase1", label1, conf1)]
    if label1 == "normal":
        return PhaseVerdict(is_attack=False, trail=tuple(trail))
    category, conf2 = predict(model.phase2, x)
    trail.append(("phase2", category, conf2))
    typer = model.phase3.get(category)
    if typer is None:
        # category never seen at training time: keep the alarm, leave
        # the exact type open
        return PhaseVerdict(True, category, UNSPECIFIED_TYPE, tuple(trail))
    attack_type, conf3 = predict(typer, x)
    trail.append(("phase3", attack_type, conf3))
    return PhaseVerdict(True, category, attack_type, tuple(trail))


def classify_level(model: LevelModel, record: ConnectionRecord) -> LevelVerdict:
    """Evaluate all three levels unconditionally."""
    x = vector_for_trees(record, model.state, model.discretized)
    return LevelVerdict(
        l1=predict(model.level1, x),
        l2=predict(model.level2, x),
        l3=predict(model.level3, x),
    )


def classify_phase_all(model: PhaseModel, records) -> list[PhaseVerdict]:
    return [classify_phase(model, r) for r in records]


def classify_level_all(model: LevelModel, records) -> list[LevelVerdict]:
    return [classify_level(model, r) for r in records]


def _setup(learner, params, taxonomy):
    if learner not in LEARNERS:
        raise ValueError(f"unknown learner {learner!r}; expected one of {sorted(LEARNERS)}")
    from .dataset import load_taxonomy

    return LEARNERS[learner], params or TreeParams(), taxonomy or load_taxonomy()


def _require_both_kinds(labels: list[ClassLabel]) -> None:
    if not any(l.is_attack for l in labels):
        raise ValueError("training set has no attack records")
    if all(l.is_attack for l in labels):
        raise ValueError("training set has no normal records")


def _fit_state(records, labels, options, learner) -> PreprocessState:
    from .preprocess import fit_preprocess

    options = options or PreprocessOptions()
    return fit_preprocess(records, options, is_attack=[l.is_attack for l in labels])


# --- persistence -------------------------------------------------------------

_PHASE_HEADER = "treeids-phase-model v1"
_LEVEL_HEADER = "treeids-level-model v1"


def save_phase_model(model: PhaseModel, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "preprocess.txt").write_text(dump_state(model.state))
    (d / "phase1.tree").write_text(dump_tree(model.phase1))
    (d / "phase2.tree").write_text(dump_tree(model.phase2))
    for cat, tree in model.phase3.items():
        (d / f"phase3_{cat}.tree").write_text(dump_tree(tree))
    lines = [
        _PHASE_HEADER,
        f"learner {model.learner}",
        "categories " + ",".join(model.phase3),
        "sizes " + " ".join(f"{k}={v}" for k, v in sorted(model.train_sizes.items())),
        "seconds " + " ".join(f"{k}={v!r}" for k, v in sorted(model.train_seconds.items())),
    ]
    (d / "model.txt").write_text("\n".join(lines) + "\n")


def load_phase_model(directory) -> PhaseModel:
    d = Path(directory)
    meta = (d / "model.txt").read_text().splitlines()
    if meta[0] != _PHASE_HEADER:
        raise ValueError("not a phase model directory")
    learner = meta[1].split(" ", 1)[1]
    categories = [c for c in meta[2].split(" ", 1)[1].split(",") if c]
    sizes = _parse_kv_ints(meta[3].split(" ", 1)[1])
    seconds = _parse_kv_floats(meta[4].split(" ", 1)[1])
    state = load_state((d / "preprocess.txt").read_text())
    phase1 = load_tree((d / "phase1.tree").read_text())
    phase2 = load_tree((d / "phase2.tree").read_text())
    phase3 = {
        cat: load_tree((d / f"phase3_{cat}.tree").read_text()) for cat in categories
    }
    return PhaseModel(learner, state, phase1.params, phase1, phase2, phase3, sizes, seconds)


def save_level_model(model: LevelModel, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "preprocess.txt").write_text(dump_state(model.state))
    (d / "level1.tree").write_text(dump_tree(model.level1))
    (d / "level2.tree").write_text(dump_tree(model.level2))
    (d / "level3.tree").write_text(dump_tree(model.level3))
    lines = [
        _LEVEL_HEADER,
        f"learner {model.learner}",
        "sizes " + " ".join(f"{k}={v}" for k, v in sorted(model.train_sizes.items())),
        "seconds " + " ".join(f"{k}={v!r}" for k, v in sorted(model.train_seconds.items())),
    ]
    (d / "model.txt").write_text("\n".join(lines) + "\n")


def load_level_model(directory) -> LevelModel:
    d = Path(directory)
    meta = (d / "model.txt").read_text().splitlines()
    if meta[0] != _LEVEL_HEADER:
        raise ValueError("not a level model directory")
    learner = meta[1].split(" ", 1)[1]
    sizes = _parse_kv_ints(meta[2].split(" ", 1)[1])
    seconds = _parse_kv_floats(meta[3].split(" ", 1)[1])
    state = load_state((d / "preprocess.txt").read_text())
    level1 = load_tree((d / "level1.tree").read_text())
    level2 = load_tree((d / "level2.tree").read_text())
    level3 = load_tree((d / "level3.tree").read_text())
    return LevelModel(learner, state, level1.params, level1, level2, level3, sizes, seconds)


def _parse_kv_ints(s: str) -> dict[str, int]:
    return {k: int(v) for k, v in (item.split("=") for item in s.split() if item)}


def _parse_kv_floats(s: str) -> dict[str, float]:
    return {k: float(v) for k, v in (item.split("=") for item in s.split() if item)}
