import shutil

import pytest

from railtriage.codecs import dumps, encode_outcome
from railtriage.constants import (
    ComplaintCategory,
    CompletenessStatus,
    Confidence,
    RouteBasis,
    TweetType,
)
from railtriage.exceptions import ConfigError, TemplateMissing, UnknownCategory
from railtriage.triager import ENV_PROMPTS, Triager, load_config, resolve_path
from railtriage.types import TriageFailure, TriageResult
from railtriage.utils import data_path

from conftest import FIXED_TIME, STRICT, fixed_clock, make_tweet


def triage(triager, text):
    return triager.triage_one(make_tweet(text))


def test_samples(samples, triager):
    for record in samples.values():
        result = triage(triager, record["text"])
        assert isinstance(result, TriageResult)
        assert result.tweet_type == TweetType(record["label"]), record["id"]
        if result.tweet_type == TweetType.COMPLAINT:
            assert result.category.category == ComplaintCategory(record["category"])
            assert result.routing is not None
            assert result.acknowledgement.endswith(f"{result.routing.department}.")
        else:
            assert result.category is None
            assert result.routing is None
            assert result.completeness.status == CompletenessStatus.NOT_APPLICABLE


def test_figure_records_in_figure_order(samples, triager):
    shown = sorted((r for r in samples.values() if r["figure"] is not None), key=lambda r: r["figure"])
    assert [r["figure"] for r in shown] == [1, 2, 3, 5, 6]
    assert [triage(triager, r["text"]).tweet_type for r in shown] == [
        TweetType.COMPLAINT,
        TweetType.COMPLAINT,
        TweetType.SUGGESTION,
        TweetType.APPRECIATION,
        TweetType.APPRECIATION,
    ]


def test_sample_provenance(samples):
    for record in samples.values():
        assert record["provenance"] in ("verbatim", "synthesized"), record["id"]
        for phrase in record.get("quotes", []):
            assert phrase in record["text"], record["id"]
    assert [r["id"] for r in samples.values() if r["provenance"] == "verbatim"] == ["leak"]


def test_leak(samples, triager):
    result = triage(triager, samples["leak"]["text"])
    assert result.completeness.status == CompletenessStatus.COMPLETE
    assert result.routing.zone == "CR"
    assert result.routing.division == "BB"
    assert result.routing.department == "Engineering/Water"
    assert result.routing.basis == RouteBasis.STATION
    assert result.acknowledgement == (
        "Your complaint has been registered and forwarded to Engineering/Water."
    )


def test_refund(samples, triager):
    result = triage(triager, samples["refund"]["text"])
    assert result.completeness.status == CompletenessStatus.INCOMPLETE
    assert result.completeness.missing == ("transaction_id", "user_id", "booking_date")
    assert result.routing.confidence == Confidence.FALLBACK
    assert (result.routing.zone, result.routing.division) == ("IR", "HQ")


def test_refund_strict(samples, strict_triager):
    result = triage(strict_triager, samples["refund"]["text"])
    assert result.completeness.schema_id == STRICT
    assert set(result.completeness.missing) == {
        "transaction_id",
        "mobile",
        "user_id",
        "booking_date",
    }
    assert result.completeness.prompt == (
        "To process your refund, please share: transaction id, registered mobile number, "
        "user id, date of booking."
    )


def test_extra_coach_request(samples, triager):
    result = triage(triager, samples["coach"]["text"])
    assert result.entities.train_no == "15017"
    assert result.entities.station.code == "GKP"
    assert result.acknowledgement.startswith("Thank you for your suggestion")


def test_late(samples, triager):
    result = triage(triager, samples["late"]["text"])
    assert result.category.category == ComplaintCategory.PUNCTUALITY
    assert result.completeness.status == CompletenessStatus.COMPLETE
    assert result.completeness.schema_id == "on_train"
    assert (result.routing.zone, result.routing.division) == ("NER", "LJN")
    assert result.routing.basis == RouteBasis.TRAIN


def test_processed_at_and_version(triager):
    result = triage(triager, "water leakage")
    assert result.processed_at == FIXED_TIME
    assert result.pipeline_version == triager.config.pipeline_version


def test_no_words_is_failure(triager):
    outcome = triage(triager, "@irctc 12555 !!!")
    assert isinstance(outcome, TriageFailure)
    assert outcome.error == "EmptyTokenStream"
    assert outcome.processed_at == FIXED_TIME


def test_triage_is_deterministic(samples, config):
    first = Triager(config, fixed_clock)
    second = Triager(load_config(), fixed_clock)
    for record in samples.values():
        tweet = make_tweet(record["text"], record["id"])
        a = dumps(encode_outcome(first.triage_one(tweet)))
        b = dumps(encode_outcome(second.triage_one(tweet)))
        assert a == b


def test_triage_many_keeps_order(samples, triager):
    tweets = [make_tweet(r["text"], r["id"]) for r in samples.values()]
    outcomes = triager.triage_many(tweets)
    assert [o.tweet.id for o in outcomes] == [t.id for t in tweets]


def test_strict_variant_changes_version(config, strict_config):
    assert config.pipeline_version != strict_config.pipeline_version
    assert load_config().pipeline_version == config.pipeline_version


def test_unknown_variant():
    with pytest.raises(UnknownCategory):
        load_config(schema_variants=["no_such_schema"])


def test_resolve_path(monkeypatch, tmp_path):
    monkeypatch.delenv(ENV_PROMPTS, raising=False)
    assert resolve_path(None, ENV_PROMPTS, "prompts.tsv") == data_path("prompts.tsv")
    monkeypatch.setenv(ENV_PROMPTS, str(tmp_path / "env.tsv"))
    assert resolve_path(None, ENV_PROMPTS, "prompts.tsv") == tmp_path / "env.tsv"
    assert resolve_path(tmp_path / "flag.tsv", ENV_PROMPTS, "prompts.tsv") == (
        tmp_path / "flag.tsv"
    )


def test_env_override(monkeypatch, tmp_path, samples):
    prompts = tmp_path / "prompts.tsv"
    shutil.copy(data_path("prompts.tsv"), prompts)
    text = prompts.read_text().replace(
        "To process your refund, please share:", "For your refund we need:"
    )
    prompts.write_text(text)
    monkeypatch.setenv(ENV_PROMPTS, str(prompts))
    config = load_config()
    result = Triager(config, fixed_clock).triage_one(make_tweet(samples["refund"]["text"]))
    assert result.completeness.prompt.startswith("For your refund we need: transaction id")


def test_bad_table_fails_at_load(tmp_path):
    bad = tmp_path / "schemas.tsv"
    bad.write_text("default\t*\tpnr AND\n")
    with pytest.raises(ConfigError):
        load_config(schemas=bad)


def without_rows(tmp_path, *keys):
    prompts = tmp_path / "prompts.tsv"
    lines = data_path("prompts.tsv").read_text(encoding="utf-8").splitlines()
    kept = [line for line in lines if line.split("\t")[0] not in keys]
    prompts.write_text("\n".join(kept) + "\n", encoding="utf-8")
    return prompts


def test_display_names_are_checked_at_load(tmp_path):
    with pytest.raises(TemplateMissing) as e:
        load_config(prompts=without_rows(tmp_path, "user_id"))
    assert e.value.field == "user_id"


def test_alternate_schemas_are_checked_at_load(tmp_path):
    schemas = tmp_path / "schemas.tsv"
    schemas.write_text("by_coach\t~Cleanliness\tpnr AND coach\ndefault\t*\tpnr OR station\n")
    with pytest.raises(TemplateMissing) as e:
        load_config(schemas=schemas, prompts=without_rows(tmp_path, "coach"))
    assert e.value.field == "coach"
    assert e.value.schema_id == "by_coach"
    load_config(schemas=schemas)
