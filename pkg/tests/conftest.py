import datetime
import json
from pathlib import Path

import pytest

from railtriage.codecs import decode_timestamp
from railtriage.extract import load_gazetteer
from railtriage.lexicon import load_lexicon
from railtriage.triager import Triager, load_config
from railtriage.types import TweetRecord
from railtriage.utils import data_path

FIXTURES = Path(__file__).parent / "fixtures"
FIXED_TIME = datetime.datetime(2022, 1, 10, 12, 0, tzinfo=datetime.timezone.utc)
STRICT = "failed_transaction_strict"


def make_tweet(text: str, id: str = "t1") -> TweetRecord:
    return TweetRecord(
        id=id,
        author_handle="@user",
        created_at=decode_timestamp("2022-01-05T10:00:00Z"),
        text=text,
        target_handle="@RailwaySeva",
    )


def tweet_line(text: str, id: str = "t1", **extra: str) -> str:
    data = {
        "id": id,
        "author_handle": "@user",
        "created_at": "2022-01-05T10:00:00Z",
        "text": text,
        "target_handle": "@RailwaySeva",
    }
    data.update(extra)
    return json.dumps(data)


def fixed_clock() -> datetime.datetime:
    return FIXED_TIME


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def samples():
    with open(FIXTURES / "samples.jsonl", encoding="utf-8") as f:
        return {d["id"]: d for d in (json.loads(line) for line in f if line.strip())}


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(data_path("lexicon"))


@pytest.fixture(scope="session")
def gazetteer():
    return load_gazetteer(data_path("stations.tsv"))


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="session")
def strict_config():
    return load_config(schema_variants=[STRICT])


@pytest.fixture
def triager(config):
    return Triager(config, fixed_clock)


@pytest.fixture
def strict_triager(strict_config):
    return Triager(strict_config, fixed_clock)
