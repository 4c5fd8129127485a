"""Confusion matrices, the three rates, and per-stage reports.

Rates are kept as exact fractions until rendering (two decimals in the
tables, four in the machine-readable tuples), so identities like
DR + 100*FN/TA = 100 hold exactly. Stage reporting follows the cascade
semantics: a phase is scored over the records that actually reached it,
and normals misrouted into the attack stages count as errors there
since no correct category exists for them; stage populations are
published so other conventions stay recomputable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .architectures import UNSPECIFIED_TYPE, LevelVerdict, PhaseVerdict
from .dataset import CATEGORIES, ClassLabel, LabelTaxonomy

NORMAL = "normal"


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.classes)))

    def row_total(self, label: str) -> int:
        return sum(self.counts[self.classes.index(label)])


def confusion(predictions, truths, classes) -> ConfusionMatrix:
    if len(predictions) != len(truths):
        raise ValueError("predictions and truths differ in length")
    index = {c: i for i, c in enumerate(classes)}
    counts = [[0] * len(classes) for _ in classes]
    for pred, true in zip(predictions, truths):
        if true not in index:
            raise ValueError(f"truth label {true!r} outside class list")
        if pred not in index:
            raise ValueError(f"predicted label {pred!r} outside class list")
        counts[index[true]][index[pred]] += 1
    return ConfusionMatrix(tuple(classes), tuple(tuple(row) for row in counts))


def detection_rate(cm: ConfusionMatrix) -> Fraction:
    """(TA - FN) / TA * 100 over the normal-vs-attack collapse.

    Attack rows are all non-normal classes; FN are attack rows
    predicted normal. Exact fraction out.
    """
    if NORMAL not in cm.classes:
        raise ValueError("confusion matrix lacks a normal class")
    ni = cm.classes.index(NORMAL)
    ta = sum(sum(row) for i, row in enumerate(cm.counts) if i != ni)
    if ta == 0:
        raise ValueError("no attack records: detection rate undefined")
    fn = sum(row[ni] for i, row in enumerate(cm.counts) if i != ni)
    return Fraction(ta - fn, ta) * 100


def false_alarm_rate(cm: ConfusionMatrix) -> Fraction:
    """FP / TN * 100: share of normals predicted as any attack class."""
    if NORMAL not in cm.classes:
        raise ValueError("confusion matrix lacks a normal class")
    ni = cm.classes.index(NORMAL)
    tn = sum(cm.counts[ni])
    if tn == 0:
        raise ValueError("no normal records: false alarm rate undefined")
    fp = tn - cm.counts[ni][ni]
    return Fraction(fp, tn) * 100


def correct_classification_rate(predictions, truths) -> Fraction:
    if len(predictions) != len(truths):
        raise ValueError("predictions and truths differ in length")
    if not predictions:
        raise ValueError("cannot score an empty prediction set")
    correct = sum(1 for p, t in zip(predictions, truths) if p == t)
    return Fraction(correct, len(predictions)) * 100


@dataclass(frozen=True)
class StageMetrics:
    stage: str
    population: int
    ccr: Fraction | None
    dr: Fraction | None
    far: Fraction | None
    cm: ConfusionMatrix | None


@dataclass(frozen=True)
class EvalReport:
    technique: str
    architecture: str
    seed: int
    counts: dict[str, int]
    stages: dict[str, list[StageMetrics]] = field(default_factory=dict)  # per learner
    train_seconds: dict[str, float] = field(default_factory=dict)


def phase_stage_metrics(
    verdicts: list[PhaseVerdict], truths: list[ClassLabel]
) -> list[StageMetrics]:
    """Stage 1 over everything; stages 2 and 3 over what reached them;
    plus an end-to-end row over the full test set."""
    if len(verdicts) != len(truths):
        raise ValueError("verdicts and truths differ in length")
    out = []

    preds1 = ["attack" if v.is_attack else NORMAL for v in verdicts]
    trues1 = ["attack" if t.is_attack else NORMAL for t in truths]
    cm1 = confusion(preds1, trues1, (NORMAL, "attack"))
    out.append(_metrics("phase1", cm1, preds1, trues1))

    reached = [(v, t) for v, t in zip(verdicts, truths) if len(v.trail) >= 2]
    cats = tuple(c for c in CATEGORIES)
    if reached:
        preds2 = [v.category for v, _t in reached]
        trues2 = [t.category if t.is_attack else NORMAL for _v, t in reached]
        cm2 = confusion(preds2, trues2, (NORMAL,) + cats)
        out.append(_metrics("phase2", cm2, preds2, trues2))

        preds3 = [v.attack_type for v, _t in reached]
        trues3 = [t.attack_type if t.is_attack else NORMAL for _v, t in reached]
        classes3 = (NORMAL, UNSPECIFIED_TYPE) + tuple(
            sorted(set(preds3 + trues3) - {NORMAL, UNSPECIFIED_TYPE})
        )
        cm3 = confusion(preds3, trues3, classes3)
        out.append(_metrics("phase3", cm3, preds3, trues3))
    else:
        out.append(StageMetrics("phase2", 0, None, None, None, None))
        out.append(StageMetrics("phase3", 0, None, None, None, None))

    preds_all = [v.attack_type if v.is_attack else NORMAL for v in verdicts]
    trues_all = [t.attack_type if t.is_attack else NORMAL for t in truths]
    classes_all = (NORMAL, UNSPECIFIED_TYPE) + tuple(
        sorted(set(preds_all + trues_all) - {NORMAL, UNSPECIFIED_TYPE})
    )
    cm_all = confusion(preds_all, trues_all, classes_all)
    out.append(_metrics("overall", cm_all, preds_all, trues_all))
    return out


def level_stage_metrics(
    verdicts: list[LevelVerdict], truths: list[ClassLabel]
) -> list[StageMetrics]:
    """Each level over the full test set against its own relabeling."""
    if len(verdicts) != len(truths):
        raise ValueError("verdicts and truths differ in length")
    out = []

    preds1 = [v.l1[0] for v in verdicts]
    trues1 = ["attack" if t.is_attack else NORMAL for t in truths]
    cm1 = confusion(preds1, trues1, (NORMAL, "attack"))
    out.append(_metrics("level1", cm1, preds1, trues1))

    preds2 = [v.l2[0] for v in verdicts]
    trues2 = [t.category if t.is_attack else NORMAL for t in truths]
    cm2 = confusion(preds2, trues2, (NORMAL,) + CATEGORIES)
    out.append(_metrics("level2", cm2, preds2, trues2))

    preds3 = [v.l3[0] for v in verdicts]
    trues3 = [t.attack_type if t.is_attack else NORMAL for t in truths]
    classes3 = (NORMAL,) + tuple(sorted(set(preds3 + trues3) - {NORMAL}))
    cm3 = confusion(preds3, trues3, classes3)
    out.append(_metrics("level3", cm3, preds3, trues3))
    return out


def _metrics(stage: str, cm: ConfusionMatrix, preds, trues) -> StageMetrics:
    ccr = correct_classification_rate(preds, trues)
    try:
        dr = detection_rate(cm)
    except ValueError:
        dr = None
    try:
        far = false_alarm_rate(cm)
    except ValueError:
        far = None
    return StageMetrics(stage, len(preds), ccr, dr, far, cm)


def build_report(
    technique: str,
    architecture: str,
    seed: int,
    counts: dict[str, int],
    per_learner_verdicts: dict[str, list],
    truths: list[ClassLabel],
    train_seconds: dict[str, float] | None = None,
) -> EvalReport:
    stages = {}
    for learner, verdicts in per_learner_verdicts.items():
        if architecture == "phase":
            stages[learner] = phase_stage_metrics(verdicts, truths)
        elif architecture == "level":
            stages[learner] = level_stage_metrics(verdicts, truths)
        else:
            raise ValueError(f"unknown architecture {architecture!r}")
    return EvalReport(
        technique, architecture, seed, dict(counts), stages, dict(train_seconds or {})
    )


# --- rendering ---------------------------------------------------------------


def render_rate(value: Fraction | None, places: int = 2) -> str:
    if value is None:
        return "-"
    scale = 10**places
    scaled = round(value * scale)  # exact Fraction round, ties to even
    whole, frac = divmod(scaled, scale)
    return f"{whole}.{frac:0{places}d}"


def render_table(report: EvalReport, metric: str) -> str:
    """One paper-style table: learners down, stages across."""
    learners = list(report.stages)
    stage_names = [m.stage for m in next(iter(report.stages.values()))]
    header = ["classifier"] + stage_names
    lines = ["\t".join(header)]
    for learner in learners:
        row = [learner]
        for m in report.stages[learner]:
            value = getattr(m, metric)
            row.append(render_rate(value))
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def metric_tuples(report: EvalReport) -> list[tuple[str, str, str, str, str, str]]:
    """Flat (technique, model, learner, stage, metric, value) tuples."""
    rows = []
    for learner, metrics in report.stages.items():
        for m in metrics:
            for name in ("ccr", "dr", "far"):
                value = getattr(m, name)
                if value is None:
                    continue
                rows.append(
                    (
                        report.technique,
                        report.architecture,
                        learner,
                        m.stage,
                        name,
                        render_rate(value, places=4),
                    )
                )
            rows.append(
                (
                    report.technique,
                    report.architecture,
                    learner,
                    m.stage,
                    "population",
                    str(m.population),
                )
            )
    rows.sort()
    return rows
