"""
JSON shapes of the records railtriage reads and writes.

    tweet        {"id", "author_handle", "created_at", "text", "target_handle"}
    timestamp    ISO-8601, always UTC, written with a trailing "Z"
    date         ISO calendar date "YYYY-MM-DD"
    result       {"tweet", "decision", "entities", "category", "completeness",
                  "routing", "acknowledgement", "pipeline_version",
                  "processed_at"}
    failure      {"tweet", "error", "detail", "pipeline_version",
                  "processed_at"}
    task event   {"event": "created", "task_id", "created_at", "state", "result"}
                 {"event": "state", "task_id", "state", "at"}

Key order is fixed and floats never appear, so encoding the same value twice
produces identical bytes.
"""
import datetime
import json
from typing import Any, Dict, List, Optional

from .constants import (
    ComplaintCategory,
    CompletenessStatus,
    Confidence,
    EntityField,
    RouteBasis,
    StoreEvent,
    TaskState,
    Trigger,
    TweetType,
)
from .exceptions import InternalTriageError
from .types import (
    CategoryResult,
    CompletenessReport,
    EntitySet,
    RoutingAssignment,
    Station,
    TaskRecord,
    TriageFailure,
    TriageOutcome,
    TriageResult,
    TweetRecord,
    TypeDecision,
)
from .utils import get_logger

logger = get_logger(__name__)

UTC = datetime.timezone.utc


def dumps(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


# scalars


def encode_timestamp(value: "datetime.datetime") -> str:
    return value.astimezone(UTC).isoformat().replace("+00:00", "Z")


def decode_timestamp(value: str) -> "datetime.datetime":
    """
    Parse an ISO-8601 instant; naive values are taken to be UTC.  Raises
    ValueError when the value is not a timestamp.
    """
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"not a timestamp value={value!r}")
    text = value.strip()
    # a bare date is a day, not an instant
    if len(text) <= 10 or text[10] not in "Tt ":
        raise ValueError(f"timestamp has no time value={value!r}")
    if text[-1] in "zZ":
        text = text[:-1] + "+00:00"
    parsed = datetime.datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=UTC)
    return parsed.astimezone(UTC)


def encode_date(value: Optional["datetime.date"]) -> Optional[str]:
    return None if value is None else value.isoformat()


def decode_date(value: Optional[str]) -> Optional["datetime.date"]:
    return None if value is None else datetime.date.fromisoformat(value)


# tweets


def encode_tweet(tweet: TweetRecord) -> Dict[str, Any]:
    return {
        "id": tweet.id,
        "author_handle": tweet.author_handle,
        "created_at": encode_timestamp(tweet.created_at),
        "text": tweet.text,
        "target_handle": tweet.target_handle,
    }


def decode_tweet(data: Dict[str, Any]) -> TweetRecord:
    return TweetRecord(
        id=data["id"],
        author_handle=data["author_handle"],
        created_at=decode_timestamp(data["created_at"]),
        text=data["text"],
        target_handle=data["target_handle"],
    )


# pipeline stages


def encode_decision(decision: TypeDecision) -> Dict[str, Any]:
    return {
        "tweet_type": decision.tweet_type.value,
        "positive_count": decision.positive_count,
        "negative_count": decision.negative_count,
        "content_tokens": decision.content_tokens,
        "trigger": decision.trigger.value,
        "matched_evidence": [[pos, reason] for pos, reason in decision.matched_evidence],
    }


def decode_decision(data: Dict[str, Any]) -> TypeDecision:
    return TypeDecision(
        tweet_type=TweetType(data["tweet_type"]),
        positive_count=data["positive_count"],
        negative_count=data["negative_count"],
        content_tokens=data["content_tokens"],
        trigger=Trigger(data["trigger"]),
        matched_evidence=tuple((pos, reason) for pos, reason in data["matched_evidence"]),
    )


def encode_station(station: Optional[Station]) -> Optional[Dict[str, str]]:
    if station is None:
        return None
    return {
        "code": station.code,
        "name": station.name,
        "division": station.division,
        "zone": station.zone,
    }


def decode_station(data: Optional[Dict[str, str]]) -> Optional[Station]:
    if data is None:
        return None
    return Station(data["code"], data["name"], data["division"], data["zone"])


def encode_entities(entities: EntitySet) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for name in EntityField:
        value = entities.get(name)
        if name == EntityField.STATION:
            out[name.value] = encode_station(entities.station)
        elif name == EntityField.BOOKING_DATE:
            out[name.value] = encode_date(entities.booking_date)
        else:
            out[name.value] = value
    out["spans"] = {
        name.value: list(entities.spans[name.value])
        for name in EntityField
        if name.value in entities.spans
    }
    return out


def decode_entities(data: Dict[str, Any]) -> EntitySet:
    return EntitySet(
        pnr=data.get("pnr"),
        train_no=data.get("train_no"),
        mobile=data.get("mobile"),
        transaction_id=data.get("transaction_id"),
        user_id=data.get("user_id"),
        booking_date=decode_date(data.get("booking_date")),
        station=decode_station(data.get("station")),
        platform=data.get("platform"),
        coach=data.get("coach"),
        spans={k: (v[0], v[1]) for k, v in data.get("spans", {}).items()},
    )


def encode_category(category: Optional[CategoryResult]) -> Optional[Dict[str, Any]]:
    if category is None:
        return None
    return {
        "category": category.category.value,
        "score": category.score,
        "matched": list(category.matched),
    }


def decode_category(data: Optional[Dict[str, Any]]) -> Optional[CategoryResult]:
    if data is None:
        return None
    return CategoryResult(
        ComplaintCategory(data["category"]), data["score"], tuple(data["matched"])
    )


def encode_completeness(report: CompletenessReport) -> Dict[str, Any]:
    return {
        "status": report.status.value,
        "missing": list(report.missing),
        "prompt": report.prompt,
        "schema_id": report.schema_id,
    }


def decode_completeness(data: Dict[str, Any]) -> CompletenessReport:
    return CompletenessReport(
        status=CompletenessStatus(data["status"]),
        missing=tuple(data["missing"]),
        prompt=data.get("prompt"),
        schema_id=data.get("schema_id"),
    )


def encode_routing(routing: Optional[RoutingAssignment]) -> Optional[Dict[str, Any]]:
    if routing is None:
        return None
    return {
        "zone": routing.zone,
        "division": routing.division,
        "department": routing.department,
        "confidence": routing.confidence.value,
        "basis": routing.basis.value,
    }


def decode_routing(data: Optional[Dict[str, Any]]) -> Optional[RoutingAssignment]:
    if data is None:
        return None
    return RoutingAssignment(
        zone=data["zone"],
        division=data["division"],
        department=data["department"],
        confidence=Confidence(data["confidence"]),
        basis=RouteBasis(data["basis"]),
    )


# outcomes


def encode_result(result: TriageResult) -> Dict[str, Any]:
    return {
        "tweet": encode_tweet(result.tweet),
        "decision": encode_decision(result.decision),
        "entities": encode_entities(result.entities),
        "category": encode_category(result.category),
        "completeness": encode_completeness(result.completeness),
        "routing": encode_routing(result.routing),
        "acknowledgement": result.acknowledgement,
        "pipeline_version": result.pipeline_version,
        "processed_at": encode_timestamp(result.processed_at),
    }


def decode_result(data: Dict[str, Any]) -> TriageResult:
    return TriageResult(
        tweet=decode_tweet(data["tweet"]),
        decision=decode_decision(data["decision"]),
        entities=decode_entities(data["entities"]),
        category=decode_category(data.get("category")),
        completeness=decode_completeness(data["completeness"]),
        routing=decode_routing(data.get("routing")),
        acknowledgement=data.get("acknowledgement"),
        pipeline_version=data["pipeline_version"],
        processed_at=decode_timestamp(data["processed_at"]),
    )


def encode_failure(failure: TriageFailure) -> Dict[str, Any]:
    return {
        "tweet": encode_tweet(failure.tweet),
        "error": failure.error,
        "detail": failure.detail,
        "pipeline_version": failure.pipeline_version,
        "processed_at": encode_timestamp(failure.processed_at),
    }


def encode_outcome(outcome: TriageOutcome) -> Dict[str, Any]:
    if isinstance(outcome, TriageResult):
        return encode_result(outcome)
    elif isinstance(outcome, TriageFailure):
        return encode_failure(outcome)
    raise InternalTriageError(f"unknown outcome type={type(outcome)}")


# tasks


def encode_task(task: TaskRecord) -> Dict[str, Any]:
    return {
        "task_id": task.task_id,
        "state": task.state.value,
        "created_at": encode_timestamp(task.created_at),
        "result": encode_result(task.result),
    }


def encode_created_event(task: TaskRecord) -> Dict[str, Any]:
    event: Dict[str, Any] = {"event": StoreEvent.CREATED.value}
    event.update(encode_task(task))
    return event


def encode_state_event(
    task_id: str, state: TaskState, at: "datetime.datetime"
) -> Dict[str, Any]:
    return {
        "event": StoreEvent.STATE.value,
        "task_id": task_id,
        "state": state.value,
        "at": encode_timestamp(at),
    }


def decode_task(data: Dict[str, Any]) -> TaskRecord:
    return TaskRecord(
        task_id=data["task_id"],
        result=decode_result(data["result"]),
        state=TaskState(data["state"]),
        created_at=decode_timestamp(data["created_at"]),
    )


def encode_tasks(tasks: List[TaskRecord]) -> List[Dict[str, Any]]:
    return [encode_task(task) for task in tasks]
