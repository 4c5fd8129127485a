import io
from collections import namedtuple

import pytest

from treeids import dataset as ds

VALID_43 = (
    "0,tcp,http,SF,181,5450,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,8,8,"
    "0.00,0.00,0.00,0.00,1.00,0.00,0.00,9,9,1.00,0.00,0.11,0.00,0.00,0.00,0.00,0.00,"
    "normal,20"
)
VALID_42 = VALID_43.rsplit(",", 1)[0]


def test_load_43_field_line():
    records = ds.load_records(io.StringIO(VALID_43))
    assert len(records) == 1
    rec = records[0]
    assert rec.features[1] == "tcp"
    assert rec.features[2] == "http"
    assert rec.features[3] == "SF"
    assert rec.features[4] == 181.0
    assert rec.label == "normal"
    assert rec.difficulty == 20


def test_load_42_field_line_has_no_difficulty():
    rec = ds.load_records(io.StringIO(VALID_42))[0]
    assert rec.difficulty is None


def test_wrong_arity_names_the_line():
    text = VALID_43 + "\n1,2,3,4,5,6,7,8,9,10\n"
    with pytest.raises(ds.CorpusFormatError, match="line 2"):
        ds.load_records(io.StringIO(text))


def test_unparseable_numeric_names_the_line():
    bad = VALID_43.replace("181", "oops")
    with pytest.raises(ds.CorpusFormatError, match="line 1"):
        ds.load_records(io.StringIO(bad))


def test_bad_difficulty_rejected():
    bad = VALID_43.rsplit(",", 1)[0] + ",x"
    with pytest.raises(ds.CorpusFormatError, match="difficulty"):
        ds.load_records(io.StringIO(bad))


def test_three_lines_in_file_order():
    text = "\n".join([VALID_43, VALID_43.replace("tcp", "udp"), VALID_43.replace("tcp", "icmp")])
    records = ds.load_records(io.StringIO(text))
    assert [r.features[1] for r in records] == ["tcp", "udp", "icmp"]


def test_empty_input_is_an_error():
    with pytest.raises(ds.CorpusFormatError, match="empty input"):
        ds.load_records(io.StringIO(""))
    with pytest.raises(ds.CorpusFormatError, match="empty input"):
        ds.load_records(io.StringIO("\n\n  \n"))


def test_load_accepts_byte_stream():
    rec = ds.load_records(io.BytesIO(VALID_43.encode()))[0]
    assert rec.label == "normal"


def test_categorize_normal(taxonomy):
    label = ds.categorize("normal", taxonomy)
    assert not label.is_attack
    assert label.category is None and label.attack_type is None


def test_categorize_known_attacks(taxonomy):
    # bindings from the published NSL-KDD attack-to-category mapping
    neptune = ds.categorize("neptune", taxonomy)
    assert neptune.is_attack and neptune.category == "DoS"
    assert neptune.attack_type == "neptune"
    warez = ds.categorize("warezclient", taxonomy)
    assert warez.category == "R2L"


def test_categorize_unknown_label_carries_name(taxonomy):
    with pytest.raises(ds.UnknownLabelError) as err:
        ds.categorize("flubber", taxonomy)
    assert err.value.label == "flubber"


def test_taxonomy_loads_from_custom_table(tmp_path):
    table = tmp_path / "tax.csv"
    table.write_text("evil_thing,DoS\nsneaky,Probe\n")
    tax = ds.load_taxonomy(table)
    assert ds.categorize("evil_thing", tax).category == "DoS"


def test_taxonomy_rejects_unknown_category(tmp_path):
    table = tmp_path / "tax.csv"
    table.write_text("thing,Mystery\n")
    with pytest.raises(ds.ConfigError):
        ds.load_taxonomy(table)


Stub = namedtuple("Stub", "label")


def _stub_corpus():
    recs = []
    recs += [Stub("normal")] * 600
    recs += [Stub("neptune")] * 250
    recs += [Stub("satan")] * 100
    recs += [Stub("rootkit")] * 2
    recs += [Stub("guess_passwd")] * 48
    return recs


def test_split_new_attack_excludes_held_out_types(taxonomy):
    records = _stub_corpus()
    spec = ds.SplitSpec(
        technique="new-attack",
        seed=5,
        unknown_attack_types=("rootkit",),
        train_normal=300,
        train_attack=200,
    )
    train, test_known, test_unknown = ds.split_new_attack(records, spec, taxonomy)
    assert all(r.label == "rootkit" for r in test_unknown)
    assert len(test_unknown) == 2
    assert not any(r.label == "rootkit" for r in train)
    assert not any(r.label == "rootkit" for r in test_known)
    # partition invariants
    assert len(train) + len(test_known) + len(test_unknown) == len(records)
    assert sum(1 for r in train if r.label == "normal") == 300
    assert sum(1 for r in train if r.label != "normal") == 200


def test_split_new_attack_takes_maximum_available(taxonomy):
    records = _stub_corpus()
    spec = ds.SplitSpec(
        technique="new-attack",
        unknown_attack_types=("rootkit",),
        train_normal=100_000,
        train_attack=100_000,
    )
    train, test_known, test_unknown = ds.split_new_attack(records, spec, taxonomy)
    assert len(test_known) == 0
    assert len(train) == len(records) - len(test_unknown)


def test_split_new_attack_rejects_degenerate_unknown_sets(taxonomy):
    records = _stub_corpus()
    with pytest.raises(ds.ConfigError):
        ds.SplitSpec(technique="new-attack", unknown_attack_types=())
    spec_all = ds.SplitSpec(
        technique="new-attack",
        unknown_attack_types=("neptune", "satan", "rootkit", "guess_passwd"),
    )
    with pytest.raises(ds.ConfigError, match="covers every attack type"):
        ds.split_new_attack(records, spec_all, taxonomy)
    spec_absent = ds.SplitSpec(technique="new-attack", unknown_attack_types=("smurf",))
    with pytest.raises(ds.ConfigError, match="absent"):
        ds.split_new_attack(records, spec_absent, taxonomy)


def test_split_new_attack_deterministic(taxonomy):
    records = _stub_corpus()
    spec = ds.SplitSpec(
        technique="new-attack", seed=9, unknown_attack_types=("rootkit",),
        train_normal=300, train_attack=200,
    )
    a = ds.split_new_attack(records, spec, taxonomy)
    b = ds.split_new_attack(records, spec, taxonomy)
    assert a == b


def test_split_partition_deterministic_and_disjoint():
    records = [Stub(f"r{i}") for i in range(10)]
    spec = ds.SplitSpec(technique="partition", train_fraction=0.5, seed=4)
    a = ds.split_partition(records, spec)
    b = ds.split_partition(records, spec)
    assert a == b
    assert len(a.train) == 5 and len(a.test) == 5
    assert set(a.train) | set(a.test) == set(records)
    assert not set(a.train) & set(a.test)


def test_split_partition_paper_scale_counts():
    records = [Stub("x")] * 103_427
    spec = ds.SplitSpec(technique="partition", train_fraction=0.0982, seed=1)
    train, test = ds.split_partition(records, spec)
    assert abs(len(train) - 10_156) <= 1
    assert abs(len(test) - 93_271) <= 1
    assert len(train) + len(test) == 103_427


def test_split_partition_rejects_unit_fraction():
    with pytest.raises(ds.ConfigError):
        ds.SplitSpec(technique="partition", train_fraction=1.0)
    with pytest.raises(ds.ConfigError):
        ds.SplitSpec(technique="partition", train_fraction=0.0)


def test_parse_split_spec_round_trip():
    text = """
    technique = new-attack
    seed = 11
    unknown_attack_types = rootkit, perl
    train_normal = 5
    train_attack = 6
    """
    spec = ds.parse_split_spec(text)
    assert spec.technique == "new-attack"
    assert spec.seed == 11
    assert spec.unknown_attack_types == ("rootkit", "perl")
    assert spec.train_normal == 5 and spec.train_attack == 6


def test_format_record_round_trips():
    rec = ds.load_records(io.StringIO(VALID_43))[0]
    again = ds.load_records(io.StringIO(ds.format_record(rec)))[0]
    assert again == rec


def test_splits_preserve_every_record(corpus_small, taxonomy):
    spec = ds.SplitSpec(technique="partition", train_fraction=0.25, seed=2)
    train, test = ds.split_partition(corpus_small, spec)
    assert len(train) + len(test) == len(corpus_small)
    assert len(train) == round(0.25 * len(corpus_small))
