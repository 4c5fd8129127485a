import io

import pytest

from treeids.dataset import load_records, load_taxonomy
from treeids.synthdata import generate_records


@pytest.fixture(scope="session")
def taxonomy():
    return load_taxonomy()


@pytest.fixture(scope="session")
def corpus_small(taxonomy):
    """4k records; enough for architecture and harness tests."""
    lines = generate_records(4000, seed=11)
    return load_records(io.StringIO("\n".join(lines)))


@pytest.fixture(scope="session")
def corpus_desk(taxonomy):
    """Desk-scale corpus pinned to the seeds the acceptance suite uses."""
    lines = generate_records(20000, seed=7)
    return load_records(io.StringIO("\n".join(lines)))
