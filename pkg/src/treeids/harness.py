"""Experiment front-end: split, train, classify, report, run, compare.

Configuration is a flat key-value file, every key overridable by a CLI
flag. The ``run`` subcommand performs the whole pipeline and leaves a
reproducible artifact tree behind:

    out/
      manifest.txt            config echo, achieved counts, stage timings
      split/                  the split corpus files
      models/<arch>_<learner>/  serialized trees + preprocess state
      verdicts/, alerts/      per-record outcomes and the alert stream
      reports/                per-architecture CCR/DR/FAR tables
      metrics.tsv             flat (technique, model, learner, stage,
                              metric, value) tuples, byte-stable across
                              reruns of the same config

Timings land in the manifest only, so metrics.tsv stays deterministic.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import architectures as arch
from . import evalreport as ev
from .dataset import (
    ConfigError,
    SplitSpec,
    categorize,
    format_record,
    load_records,
    load_taxonomy,
    parse_key_values,
    split_new_attack,
    split_partition,
)
from .preprocess import PreprocessOptions
from .trees import TreeParams

ALL_LEARNERS = ("C5", "CART", "CHAID", "QUEST")


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: tuple[str, ...]
    out: str
    technique: str = "partition"
    model: str = "both"  # phase | level | both
    learners: tuple[str, ...] = ALL_LEARNERS
    seed: int = 1
    train_fraction: float | None = 0.10
    unknown_attack_types: tuple[str, ...] = ()
    train_normal: int | None = None
    train_attack: int | None = None
    taxonomy: str | None = None
    top_k: int | None = None
    bin_count: int = 10
    min_node_size: int = 2
    max_depth: int | None = None
    alpha: float = 0.05
    prune_cf: float = 0.25
    cc_holdout_fraction: float = 0.2

    def __post_init__(self):
        if not self.corpus:
            raise ConfigError("config needs at least one corpus path")
        if self.model not in ("phase", "level", "both"):
            raise ConfigError(f"model must be phase, level or both, not {self.model!r}")
        if not self.learners:
            raise ConfigError("config needs at least one learner")
        for l in self.learners:
            if l not in ALL_LEARNERS:
                raise ConfigError(f"unknown learner {l!r}")

    def split_spec(self) -> SplitSpec:
        kwargs: dict = {"technique": self.technique, "seed": self.seed}
        if self.technique == "partition":
            kwargs["train_fraction"] = self.train_fraction
        else:
            if self.unknown_attack_types:
                kwargs["unknown_attack_types"] = self.unknown_attack_types
            if self.train_normal is not None:
                kwargs["train_normal"] = self.train_normal
            if self.train_attack is not None:
                kwargs["train_attack"] = self.train_attack
        return SplitSpec(**kwargs)

    def tree_params(self) -> TreeParams:
        return TreeParams(
            min_node_size=self.min_node_size,
            max_depth=self.max_depth,
            alpha=self.alpha,
            prune_cf=self.prune_cf,
            cc_holdout_fraction=self.cc_holdout_fraction,
            bin_count=self.bin_count,
            seed=self.seed,
        )

    def preprocess_options(self) -> PreprocessOptions:
        return PreprocessOptions(top_k=self.top_k, bin_count=self.bin_count)

    def architectures(self) -> tuple[str, ...]:
        return ("phase", "level") if self.model == "both" else (self.model,)


def config_from_file(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_mapping(parse_key_values(fh.read()))


def config_from_mapping(kv: dict[str, str]) -> ExperimentConfig:
    def split_list(s):
        return tuple(t.strip() for t in s.split(",") if t.strip())

    kwargs: dict = {}
    if "corpus" in kv:
        kwargs["corpus"] = split_list(kv["corpus"])
    if "out" in kv:
        kwargs["out"] = kv["out"]
    for key in ("technique", "model", "taxonomy"):
        if key in kv:
            kwargs[key] = kv[key]
    if "learners" in kv:
        kwargs["learners"] = split_list(kv["learners"])
    if "unknown_attack_types" in kv:
        kwargs["unknown_attack_types"] = split_list(kv["unknown_attack_types"])
    for key in ("seed", "train_normal", "train_attack", "top_k", "bin_count",
                "min_node_size", "max_depth"):
        if key in kv:
            kwargs[key] = int(kv[key])
    for key in ("train_fraction", "alpha", "prune_cf", "cc_holdout_fraction"):
        if key in kv:
            kwargs[key] = float(kv[key])
    if "corpus" not in kwargs or "out" not in kwargs:
        raise ConfigError("config must define corpus and out")
    return ExperimentConfig(**kwargs)


def _load_corpus(config: ExperimentConfig):
    records = []
    for path in config.corpus:
        records.extend(load_records(path))
    return records


# --- pipeline stages ---------------------------------------------------------


def run_split(config: ExperimentConfig, records=None):
    """Split the corpus and persist the pieces under out/split/."""
    records = records if records is not None else _load_corpus(config)
    taxonomy = load_taxonomy(config.taxonomy)
    taxonomy.validate_against(records)
    spec = config.split_spec()
    d = Path(config.out) / "split"
    d.mkdir(parents=True, exist_ok=True)
    if spec.technique == "partition":
        train, test = split_partition(records, spec)
        pieces = {"train": train, "test": test}
    else:
        train, test_known, test_unknown = split_new_attack(records, spec, taxonomy)
        pieces = {"train": train, "test_known": test_known, "test_unknown": test_unknown}
    for name, recs in pieces.items():
        with open(d / f"{name}.csv", "w", encoding="utf-8") as fh:
            for rec in recs:
                fh.write(format_record(rec) + "\n")
    counts = {name: len(recs) for name, recs in pieces.items()}
    counts["corpus"] = len(records)
    return pieces, counts


def _test_records(pieces: dict):
    if "test" in pieces:
        return pieces["test"]
    return pieces["test_known"] + pieces["test_unknown"]


def run_experiment(config: ExperimentConfig) -> int:
    """End to end: split, train, classify, report, persist. Returns 0
    on success; failures name the stage and mark the manifest."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    seconds: dict[str, float] = {}
    stage = "load"
    try:
        t0 = time.perf_counter()
        records = _load_corpus(config)
        taxonomy = load_taxonomy(config.taxonomy)
        taxonomy.validate_against(records)
        seconds["load"] = time.perf_counter() - t0

        stage = "split"
        t0 = time.perf_counter()
        pieces, counts = run_split(config, records)
        train = pieces["train"]
        test = _test_records(pieces)
        seconds["split"] = time.perf_counter() - t0

        truths = [categorize(r.label, taxonomy) for r in test]
        params = config.tree_params()
        options = config.preprocess_options()

        reports = []
        for architecture in config.architectures():
            per_learner_verdicts: dict[str, list] = {}
            train_seconds: dict[str, float] = {}
            for learner in config.learners:
                stage = f"train.{architecture}.{learner}"
                t0 = time.perf_counter()
                if architecture == "phase":
                    model = arch.train_phase_model(train, learner, params, options, taxonomy)
                    arch.save_phase_model(model, out / "models" / f"phase_{learner}")
                else:
                    model = arch.train_level_model(train, learner, params, options, taxonomy)
                    arch.save_level_model(model, out / "models" / f"level_{learner}")
                seconds[stage] = time.perf_counter() - t0
                train_seconds[learner] = model.total_train_seconds

                stage = f"classify.{architecture}.{learner}"
                t0 = time.perf_counter()
                if architecture == "phase":
                    verdicts = arch.classify_phase_all(model, test)
                else:
                    verdicts = arch.classify_level_all(model, test)
                seconds[stage] = time.perf_counter() - t0
                per_learner_verdicts[learner] = verdicts

                _write_verdicts(out / "verdicts" / f"{architecture}_{learner}.tsv", verdicts)
                (out / "alerts").mkdir(parents=True, exist_ok=True)
                with open(out / "alerts" / f"{architecture}_{learner}.tsv", "w", encoding="utf-8") as sink:
                    emit_alerts(verdicts, sink, architecture)

            stage = f"report.{architecture}"
            report = ev.build_report(
                config.technique, architecture, config.seed, counts,
                per_learner_verdicts, truths, train_seconds,
            )
            reports.append(report)

        stage = "write-reports"
        _write_reports(out, reports)
        _write_manifest(out, config, counts, seconds, status="complete")
        return 0
    except Exception as exc:
        _write_manifest(out, config, {}, seconds, status=f"incomplete at {stage}")
        raise RuntimeError(f"experiment failed during stage {stage}: {exc}") from exc


def emit_alerts(verdicts, sink, architecture: str) -> int:
    """One tab-separated line per attack-flagged verdict, record order."""
    count = 0
    for index, v in enumerate(verdicts):
        if isinstance(v, arch.PhaseVerdict):
            if not v.is_attack:
                continue
            confs = ";".join(f"{stage}={label}:{conf:.4f}" for stage, label, conf in v.trail)
            fields = [
                str(index), "phase", str(len(v.trail)),
                v.category or "-", v.attack_type or "-", confs,
                _timestamp(),
            ]
        else:
            if v.l1[0] != "attack":
                continue
            confs = ";".join(f"l{i}={lbl}:{c:.4f}" for i, (lbl, c) in enumerate((v.l1, v.l2, v.l3), 1))
            fields = [
                str(index), "level", "1",
                v.l2[0], v.l3[0], confs,
                _timestamp(),
            ]
        sink.write("\t".join(fields) + "\n")
        count += 1
    return count


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def compare_models(report_phase: ev.EvalReport, report_level: ev.EvalReport, learner: str):
    """Side-by-side phase/level summary plus the checkable claims.

    Claims: the cascade trains no slower, classifies new attacks no
    worse end to end, and raises no more false alarms on the binary
    stage. Reports from different splits refuse to compare.
    """
    if (report_phase.technique, report_phase.seed) != (report_level.technique, report_level.seed):
        raise ConfigError("reports come from different split configurations")
    if report_phase.counts != report_level.counts:
        raise ConfigError("reports come from different record populations")
    phase = {m.stage: m for m in report_phase.stages[learner]}
    level = {m.stage: m for m in report_level.stages[learner]}
    t_phase = report_phase.train_seconds.get(learner)
    t_level = report_level.train_seconds.get(learner)

    def fr(x):
        return ev.render_rate(x)

    lines = [
        f"comparison ({report_phase.technique}, learner {learner})",
        f"metric\tphase\tlevel",
        f"binary CCR\t{fr(phase['phase1'].ccr)}\t{fr(level['level1'].ccr)}",
        f"binary DR\t{fr(phase['phase1'].dr)}\t{fr(level['level1'].dr)}",
        f"binary FAR\t{fr(phase['phase1'].far)}\t{fr(level['level1'].far)}",
        f"category CCR\t{fr(phase['phase2'].ccr)}\t{fr(level['level2'].ccr)}",
        f"type CCR\t{fr(phase['overall'].ccr)}\t{fr(level['level3'].ccr)}",
        f"train seconds\t{t_phase:.3f}\t{t_level:.3f}",
    ]
    claims = {
        "phase_trains_no_slower": t_phase <= t_level,
        "phase_type_ccr_no_worse": phase["overall"].ccr >= level["level3"].ccr,
        "phase_binary_dr_no_worse": phase["phase1"].dr >= level["level1"].dr,
        "phase_binary_far_no_higher": phase["phase1"].far <= level["level1"].far,
    }
    for name, ok in claims.items():
        lines.append(f"claim {name}\t{'true' if ok else 'false'}")
    return "\n".join(lines) + "\n", claims


# --- artifact files ----------------------------------------------------------


def _write_verdicts(path: Path, verdicts) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for i, v in enumerate(verdicts):
            if isinstance(v, arch.PhaseVerdict):
                trail = ";".join(f"{s}={l}:{c!r}" for s, l, c in v.trail)
                fh.write(
                    f"{i}\t{int(v.is_attack)}\t{v.category or '-'}\t"
                    f"{v.attack_type or '-'}\t{trail}\n"
                )
            else:
                fh.write(
                    f"{i}\t{v.l1[0]}\t{v.l1[1]!r}\t{v.l2[0]}\t{v.l2[1]!r}\t"
                    f"{v.l3[0]}\t{v.l3[1]!r}\n"
                )


def read_phase_verdicts(path) -> list[arch.PhaseVerdict]:
    out = []
    for line in Path(path).read_text().splitlines():
        _i, is_attack, category, attack_type, trail_s = line.split("\t")
        trail = []
        if trail_s:
            for item in trail_s.split(";"):
                stage, rest = item.split("=", 1)
                label, conf = rest.rsplit(":", 1)
                trail.append((stage, label, float(conf)))
        out.append(
            arch.PhaseVerdict(
                is_attack == "1",
                None if category == "-" else category,
                None if attack_type == "-" else attack_type,
                tuple(trail),
            )
        )
    return out


def read_level_verdicts(path) -> list[arch.LevelVerdict]:
    out = []
    for line in Path(path).read_text().splitlines():
        _i, l1, c1, l2, c2, l3, c3 = line.split("\t")
        out.append(arch.LevelVerdict((l1, float(c1)), (l2, float(c2)), (l3, float(c3))))
    return out


def _write_reports(out: Path, reports) -> None:
    rd = out / "reports"
    rd.mkdir(parents=True, exist_ok=True)
    tuples = []
    for report in reports:
        for metric in ("ccr", "dr", "far"):
            text = ev.render_table(report, metric)
            (rd / f"{report.architecture}_{metric}.tsv").write_text(text)
        tuples.extend(ev.metric_tuples(report))
    tuples.sort()
    with open(out / "metrics.tsv", "w", encoding="utf-8") as fh:
        for row in tuples:
            fh.write("\t".join(row) + "\n")


def _write_manifest(out: Path, config, counts, seconds, status: str) -> None:
    lines = ["treeids-run v1", f"status {status}"]
    cfg = {
        "corpus": ",".join(config.corpus),
        "out": config.out,
        "technique": config.technique,
        "model": config.model,
        "learners": ",".join(config.learners),
        "seed": str(config.seed),
        "train_fraction": str(config.train_fraction),
        "unknown_attack_types": ",".join(config.unknown_attack_types),
        "train_normal": str(config.train_normal),
        "train_attack": str(config.train_attack),
        "taxonomy": str(config.taxonomy),
        "top_k": str(config.top_k),
        "bin_count": str(config.bin_count),
        "min_node_size": str(config.min_node_size),
        "max_depth": str(config.max_depth),
        "alpha": str(config.alpha),
        "prune_cf": str(config.prune_cf),
        "cc_holdout_fraction": str(config.cc_holdout_fraction),
    }
    for key in sorted(cfg):
        lines.append(f"config {key} = {cfg[key]}")
    for name in sorted(counts):
        lines.append(f"count {name} = {counts[name]}")
    for name in sorted(seconds):
        lines.append(f"seconds {name} = {seconds[name]:.6f}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")


# --- CLI ----------------------------------------------------------------------


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--corpus", help="comma-separated corpus paths")
    p.add_argument("--out", help="output directory")
    p.add_argument("--technique", choices=("new-attack", "partition"))
    p.add_argument("--model", choices=("phase", "level", "both"))
    p.add_argument("--learner", dest="learners", help="comma list of C5,CART,CHAID,QUEST")
    p.add_argument("--seed", type=int)
    p.add_argument("--train-fraction", type=float, dest="train_fraction")
    p.add_argument("--unknown-attack-types", dest="unknown_attack_types")
    p.add_argument("--train-normal", type=int, dest="train_normal")
    p.add_argument("--train-attack", type=int, dest="train_attack")
    p.add_argument("--taxonomy")
    p.add_argument("--top-k", type=int, dest="top_k")
    p.add_argument("--bin-count", type=int, dest="bin_count")
    p.add_argument("--min-node-size", type=int, dest="min_node_size")
    p.add_argument("--max-depth", type=int, dest="max_depth")
    p.add_argument("--alpha", type=float)
    p.add_argument("--prune-cf", type=float, dest="prune_cf")
    p.add_argument("--cc-holdout-fraction", type=float, dest="cc_holdout_fraction")


def _config_from_args(args) -> ExperimentConfig:
    kv: dict[str, str] = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            kv = parse_key_values(fh.read())
    for key in (
        "corpus", "out", "technique", "model", "learners", "seed",
        "train_fraction", "unknown_attack_types", "train_normal",
        "train_attack", "taxonomy", "top_k", "bin_count", "min_node_size",
        "max_depth", "alpha", "prune_cf", "cc_holdout_fraction",
    ):
        value = getattr(args, key, None)
        if value is not None:
            kv[key] = str(value)
    return config_from_mapping(kv)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="treeids",
        description="multi-stage decision-tree intrusion detection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, descr in (
        ("split", "split a corpus and write the pieces"),
        ("run", "end-to-end experiment"),
    ):
        p = sub.add_parser(name, help=descr)
        _add_common_flags(p)

    p = sub.add_parser("train", help="train one architecture/learner from a split file")
    _add_common_flags(p)
    p.add_argument("--train-file", required=True)

    p = sub.add_parser("classify", help="classify records with a saved model")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--test-file", required=True)
    p.add_argument("--out", required=True, help="output directory for verdicts/alerts")

    p = sub.add_parser("report", help="score saved verdicts against a labeled file")
    p.add_argument("--verdicts", required=True)
    p.add_argument("--test-file", required=True)
    p.add_argument("--architecture", choices=("phase", "level"), required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--technique", default="partition")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--taxonomy")
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="phase vs level claims from a finished run")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--learner", default="C5")
    p.add_argument("--taxonomy")

    args = parser.parse_args(argv)

    if args.command == "split":
        config = _config_from_args(args)
        _pieces, counts = run_split(config)
        for name in sorted(counts):
            print(f"{name}: {counts[name]}")
        return 0

    if args.command == "run":
        config = _config_from_args(args)
        status = run_experiment(config)
        print(f"run complete: {config.out}")
        return status

    if args.command == "train":
        config = _config_from_args(args)
        train = load_records(args.train_file)
        taxonomy = load_taxonomy(config.taxonomy)
        params, options = config.tree_params(), config.preprocess_options()
        out = Path(config.out)
        for architecture in config.architectures():
            for learner in config.learners:
                if architecture == "phase":
                    model = arch.train_phase_model(train, learner, params, options, taxonomy)
                    arch.save_phase_model(model, out / "models" / f"phase_{learner}")
                else:
                    model = arch.train_level_model(train, learner, params, options, taxonomy)
                    arch.save_level_model(model, out / "models" / f"level_{learner}")
                print(f"trained {architecture}/{learner}")
        return 0

    if args.command == "classify":
        test = load_records(args.test_file)
        model_dir = Path(args.model_dir)
        head = (model_dir / "model.txt").read_text().splitlines()[0]
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if "phase" in head:
            model = arch.load_phase_model(model_dir)
            verdicts = arch.classify_phase_all(model, test)
            architecture = "phase"
        else:
            model = arch.load_level_model(model_dir)
            verdicts = arch.classify_level_all(model, test)
            architecture = "level"
        name = f"{architecture}_{model.learner}"
        _write_verdicts(out / f"verdicts_{name}.tsv", verdicts)
        with open(out / f"alerts_{name}.tsv", "w", encoding="utf-8") as sink:
            n = emit_alerts(verdicts, sink, architecture)
        print(f"classified {len(test)} records, {n} alerts")
        return 0

    if args.command == "report":
        test = load_records(args.test_file)
        taxonomy = load_taxonomy(args.taxonomy)
        truths = [categorize(r.label, taxonomy) for r in test]
        if args.architecture == "phase":
            verdicts = read_phase_verdicts(args.verdicts)
        else:
            verdicts = read_level_verdicts(args.verdicts)
        report = ev.build_report(
            args.technique, args.architecture, args.seed,
            {"test": len(test)}, {args.learner: verdicts}, truths,
        )
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_reports(out, [report])
        print(f"report written to {out}")
        return 0

    if args.command == "compare":
        run_dir = Path(args.run_dir)
        text, claims = compare_from_run(run_dir, args.learner, args.taxonomy)
        (run_dir / "comparison.txt").write_text(text)
        print(text, end="")
        return 0 if all(claims.values()) else 1

    raise AssertionError("unreachable")


def compare_from_run(run_dir: Path, learner: str, taxonomy_path=None):
    """Rebuild both reports from a run directory and compare them."""
    manifest = _read_manifest(run_dir / "manifest.txt")
    technique = manifest["config"]["technique"]
    seed = int(manifest["config"]["seed"])
    split_dir = run_dir / "split"
    if (split_dir / "test.csv").exists():
        test = load_records(split_dir / "test.csv")
    else:
        test = load_records(split_dir / "test_known.csv") + load_records(
            split_dir / "test_unknown.csv"
        )
    taxonomy = load_taxonomy(taxonomy_path)
    truths = [categorize(r.label, taxonomy) for r in test]
    counts = {k: int(v) for k, v in manifest["counts"].items()}

    phase_verdicts = read_phase_verdicts(run_dir / "verdicts" / f"phase_{learner}.tsv")
    level_verdicts = read_level_verdicts(run_dir / "verdicts" / f"level_{learner}.tsv")
    t_phase = _model_seconds(run_dir / "models" / f"phase_{learner}")
    t_level = _model_seconds(run_dir / "models" / f"level_{learner}")
    report_phase = ev.build_report(
        technique, "phase", seed, counts, {learner: phase_verdicts}, truths,
        {learner: t_phase},
    )
    report_level = ev.build_report(
        technique, "level", seed, counts, {learner: level_verdicts}, truths,
        {learner: t_level},
    )
    return compare_models(report_phase, report_level, learner)


def _model_seconds(model_dir: Path) -> float:
    for line in (model_dir / "model.txt").read_text().splitlines():
        if line.startswith("seconds "):
            return sum(float(item.split("=")[1]) for item in line.split(" ")[1:] if item)
    return 0.0


def _read_manifest(path: Path) -> dict:
    config: dict[str, str] = {}
    counts: dict[str, str] = {}
    status = ""
    for line in path.read_text().splitlines():
        if line.startswith("config "):
            key, value = line[len("config "):].split(" = ", 1)
            config[key] = value
        elif line.startswith("count "):
            key, value = line[len("count "):].split(" = ", 1)
            counts[key] = value
        elif line.startswith("status "):
            status = line[len("status "):]
    return {"config": config, "counts": counts, "status": status}


if __name__ == "__main__":
    sys.exit(main())
