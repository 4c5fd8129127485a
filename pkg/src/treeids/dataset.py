"""NSL-KDD connection records, the attack taxonomy, and the two splits.

Records are comma-separated lines of 41 features plus a label and an
optional difficulty score; positions 2-4 (protocol, service, flag) are
categorical tokens, everything else numeric. The two evaluation splits
are the held-out-attack-type split and the seeded fractional partition.
Both are pure functions of (records, spec).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, NamedTuple

N_FEATURES = 41
CATEGORICAL_POSITIONS = (1, 2, 3)  # 0-indexed: protocol_type, service, flag
CATEGORIES = ("DoS", "Probe", "R2L", "U2R")
NORMAL_LABEL = "normal"

# Held-out types used by the new-attack split when none are configured.
# Chosen so that on the full NSL-KDD train+test corpus the held-out
# records number about 3.2k; all four categories are represented.
DEFAULT_UNKNOWN_TYPES = (
    "apache2",
    "httptunnel",
    "mailbomb",
    "mscan",
    "processtable",
    "ps",
    "snmpguess",
    "udpstorm",
    "worm",
    "xterm",
)

# Paper-scale training targets for the new-attack split; the split takes
# what the corpus can supply and callers read actual counts off the result.
DEFAULT_TRAIN_NORMAL = 40_000
DEFAULT_TRAIN_ATTACK = 43_644


class CorpusFormatError(ValueError):
    """A line (or the whole stream) is not a valid connection record."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        super().__init__(message if line_no is None else f"line {line_no}: {message}")


class UnknownLabelError(KeyError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"attack type not in taxonomy: {label!r}")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectionRecord:
    features: tuple
    label: str
    difficulty: int | None = None

    def __post_init__(self):
        if len(self.features) != N_FEATURES:
            raise CorpusFormatError(
                f"expected {N_FEATURES} features, got {len(self.features)}"
            )
        if not self.label:
            raise CorpusFormatError("empty label")
        for pos, value in enumerate(self.features):
            if pos in CATEGORICAL_POSITIONS:
                if not isinstance(value, str):
                    raise CorpusFormatError(f"feature {pos + 1} must be a token")
            elif isinstance(value, str):
                raise CorpusFormatError(f"feature {pos + 1} must be numeric")


@dataclass(frozen=True)
class ClassLabel:
    is_attack: bool
    category: str | None = None
    attack_type: str | None = None

    def __post_init__(self):
        if self.is_attack:
            if not self.category or not self.attack_type:
                raise ValueError("attack labels need a category and an attack type")
        elif self.category is not None or self.attack_type is not None:
            raise ValueError("normal labels carry no category or attack type")


NORMAL = ClassLabel(is_attack=False)


@dataclass(frozen=True)
class LabelTaxonomy:
    """Attack-type name -> category map plus the known normal labels."""

    category_of: dict[str, str]
    normal_labels: frozenset[str] = frozenset({NORMAL_LABEL})

    def __post_init__(self):
        for name, cat in self.category_of.items():
            if cat not in CATEGORIES:
                raise ConfigError(f"unknown category {cat!r} for attack type {name!r}")
            if name in self.normal_labels:
                raise ConfigError(f"{name!r} is both normal and an attack type")

    def validate_against(self, records: Iterable[ConnectionRecord]) -> None:
        """Raise if any record label is outside the taxonomy."""
        for rec in records:
            if rec.label not in self.normal_labels and rec.label not in self.category_of:
                raise UnknownLabelError(rec.label)


def load_taxonomy(source=None) -> LabelTaxonomy:
    """Read the two-column attack_type,category table.

    ``source`` may be a path or an open text file; None loads the
    bundled NSL-KDD table.
    """
    if source is None:
        text = (
            resources.files("treeids.data").joinpath("attack_taxonomy.csv").read_text()
        )
        lines = text.splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    mapping: dict[str, str] = {}
    for i, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ConfigError(f"taxonomy line {i}: expected 'attack_type,category'")
        name, cat = parts
        if name in mapping and mapping[name] != cat:
            raise ConfigError(f"taxonomy line {i}: conflicting category for {name!r}")
        mapping[name] = cat
    if not mapping:
        raise ConfigError("taxonomy table is empty")
    return LabelTaxonomy(mapping)


def categorize(label: str, taxonomy: LabelTaxonomy) -> ClassLabel:
    if label in taxonomy.normal_labels:
        return NORMAL
    cat = taxonomy.category_of.get(label)
    if cat is None:
        raise UnknownLabelError(label)
    return ClassLabel(is_attack=True, category=cat, attack_type=label)


def load_records(source) -> list[ConnectionRecord]:
    """Parse connection records from a byte/text stream or path.

    Each line must carry 42 fields (features + label) or 43 (plus a
    difficulty integer, parsed and kept but never used in modeling).
    Malformed lines and empty input are rejected with the line named.
    """
    lines = _read_lines(source)
    records: list[ConnectionRecord] = []
    saw_content = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        saw_content = True
        fields = line.split(",")
        if len(fields) not in (N_FEATURES + 1, N_FEATURES + 2):
            raise CorpusFormatError(
                f"expected {N_FEATURES + 1} or {N_FEATURES + 2} fields, got {len(fields)}",
                line_no,
            )
        features = []
        for pos in range(N_FEATURES):
            token = fields[pos].strip()
            if pos in CATEGORICAL_POSITIONS:
                if not token:
                    raise CorpusFormatError(f"empty token in feature {pos + 1}", line_no)
                features.append(token)
            else:
                try:
                    features.append(float(token))
                except ValueError:
                    raise CorpusFormatError(
                        f"feature {pos + 1} is not numeric: {token!r}", line_no
                    ) from None
        label = fields[N_FEATURES].strip()
        if not label:
            raise CorpusFormatError("empty label", line_no)
        difficulty = None
        if len(fields) == N_FEATURES + 2:
            try:
                difficulty = int(fields[N_FEATURES + 1])
            except ValueError:
                raise CorpusFormatError(
                    f"difficulty is not an integer: {fields[N_FEATURES + 1]!r}", line_no
                ) from None
        records.append(ConnectionRecord(tuple(features), label, difficulty))
    if not saw_content:
        raise CorpusFormatError("empty input: no connection records")
    return records


def _read_lines(source) -> list[str]:
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return data.splitlines()
    with open(source, "rb") as fh:
        return fh.read().decode("utf-8").splitlines()


# --- splits ----------------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    """How to carve a corpus into train/test.

    ``technique`` is ``new-attack`` (hold whole attack types out of
    training) or ``partition`` (seeded fractional split). The
    new-attack training-size targets are paper-scale defaults; when the
    corpus runs short the split takes what exists.
    """

    technique: str
    seed: int = 1
    train_fraction: float | None = None
    unknown_attack_types: tuple[str, ...] = DEFAULT_UNKNOWN_TYPES
    train_normal: int = DEFAULT_TRAIN_NORMAL
    train_attack: int = DEFAULT_TRAIN_ATTACK

    def __post_init__(self):
        if self.technique not in ("new-attack", "partition"):
            raise ConfigError(f"unknown split technique {self.technique!r}")
        if self.technique == "partition":
            if self.train_fraction is None or not 0.0 < self.train_fraction < 1.0:
                raise ConfigError("partition requires train_fraction in (0, 1)")
        else:
            if not self.unknown_attack_types:
                raise ConfigError("new-attack requires a non-empty unknown set")


class NewAttackSplit(NamedTuple):
    train: list[ConnectionRecord]
    test_known: list[ConnectionRecord]
    test_unknown: list[ConnectionRecord]


class PartitionSplit(NamedTuple):
    train: list[ConnectionRecord]
    test: list[ConnectionRecord]


def split_new_attack(
    records: list[ConnectionRecord],
    spec: SplitSpec,
    taxonomy: LabelTaxonomy,
) -> NewAttackSplit:
    """Hold whole attack types out of training.

    Records of the held-out types go exclusively to ``test_unknown``.
    The rest are shuffled with the spec seed; normals and known attacks
    fill the training targets and the remainder becomes ``test_known``.
    """
    if spec.technique != "new-attack":
        raise ConfigError("spec technique must be new-attack")
    unknown = set(spec.unknown_attack_types)
    present_types = {r.label for r in records if r.label not in taxonomy.normal_labels}
    missing = unknown - present_types
    if missing:
        raise ConfigError(f"unknown attack types absent from corpus: {sorted(missing)}")
    if present_types <= unknown:
        raise ConfigError("unknown set covers every attack type in the corpus")

    test_unknown = [r for r in records if r.label in unknown]
    rest = [r for r in records if r.label not in unknown]
    order = list(range(len(rest)))
    random.Random(spec.seed).shuffle(order)

    train: list[ConnectionRecord] = []
    test_known: list[ConnectionRecord] = []
    n_normal = 0
    n_attack = 0
    for i in order:
        rec = rest[i]
        if rec.label in taxonomy.normal_labels:
            if n_normal < spec.train_normal:
                train.append(rec)
                n_normal += 1
            else:
                test_known.append(rec)
        else:
            if n_attack < spec.train_attack:
                train.append(rec)
                n_attack += 1
            else:
                test_known.append(rec)
    return NewAttackSplit(train, test_known, test_unknown)


def split_partition(records: list[ConnectionRecord], spec: SplitSpec) -> PartitionSplit:
    """Seeded shuffle, then the first round(fraction * N) records train."""
    if spec.technique != "partition":
        raise ConfigError("spec technique must be partition")
    n = len(records)
    n_train = round(spec.train_fraction * n)
    order = list(range(n))
    random.Random(spec.seed).shuffle(order)
    train = [records[i] for i in order[:n_train]]
    test = [records[i] for i in order[n_train:]]
    return PartitionSplit(train, test)


def parse_split_spec(text: str) -> SplitSpec:
    """Build a SplitSpec from flat key-value lines (key = value)."""
    kv = parse_key_values(text)
    technique = kv.get("technique")
    if technique is None:
        raise ConfigError("split spec needs a technique")
    kwargs: dict = {"technique": technique}
    if "seed" in kv:
        kwargs["seed"] = int(kv["seed"])
    if "train_fraction" in kv:
        kwargs["train_fraction"] = float(kv["train_fraction"])
    if "unknown_attack_types" in kv:
        kwargs["unknown_attack_types"] = tuple(
            t.strip() for t in kv["unknown_attack_types"].split(",") if t.strip()
        )
    if "train_normal" in kv:
        kwargs["train_normal"] = int(kv["train_normal"])
    if "train_attack" in kv:
        kwargs["train_attack"] = int(kv["train_attack"])
    return SplitSpec(**kwargs)


def parse_key_values(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {i}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def format_record(rec: ConnectionRecord) -> str:
    """Back to the NSL-KDD comma-separated line form."""
    parts = []
    for pos, value in enumerate(rec.features):
        if pos in CATEGORICAL_POSITIONS:
            parts.append(value)
        elif float(value) == int(value):
            parts.append(str(int(value)))
        else:
            parts.append(repr(float(value)))
    parts.append(rec.label)
    if rec.difficulty is not None:
        parts.append(str(rec.difficulty))
    return ",".join(parts)
