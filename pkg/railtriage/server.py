import bisect
import json
import time
from collections import Counter
from typing import Any, Dict, List, Optional, Tuple

from aiohttp import web

from .codecs import dumps, encode_outcome, encode_task, encode_tasks
from .constants import (
    BATCH_LIMIT,
    DEFAULT_HOST,
    DEFAULT_PORT,
    LATENCY_BUCKETS,
    ComplaintCategory,
    CompletenessStatus,
    Confidence,
    TaskState,
    TweetType,
)
from .exceptions import (
    BadInputException,
    EmptyText,
    IllegalTransition,
    IngestError,
    MalformedLine,
    TriageError,
    UnknownTask,
)
from .ingest import record_from_object
from .store import TaskStore
from .triager import Triager
from .types import TriageFailure, TriageOutcome, TriageResult
from .utils import get_logger

logger = get_logger(__name__)

TRIAGER_KEY = "railtriage.triager"
STORE_KEY = "railtriage.store"
METRICS_KEY = "railtriage.metrics"


class Metrics:
    def __init__(self, buckets: Tuple[float, ...] = LATENCY_BUCKETS) -> None:
        self.buckets = tuple(buckets)
        self.processed = 0
        self.failed = 0
        self.incomplete = 0
        self.fallback_routed = 0
        self.per_type: "Counter[str]" = Counter()
        self.per_category: "Counter[str]" = Counter()
        # the final slot counts observations above the last bucket
        self.latency_counts = [0] * (len(self.buckets) + 1)
        self.latency_sum = 0.0

    def observe(self, outcome: TriageOutcome, seconds: float) -> None:
        self.processed += 1
        self.latency_counts[bisect.bisect_left(self.buckets, seconds)] += 1
        self.latency_sum += seconds
        if isinstance(outcome, TriageFailure):
            self.failed += 1
            return
        self.per_type[outcome.tweet_type.value] += 1
        if outcome.category is not None:
            self.per_category[outcome.category.category.value] += 1
        if outcome.completeness.status == CompletenessStatus.INCOMPLETE:
            self.incomplete += 1
        if outcome.routing is not None and outcome.routing.confidence == Confidence.FALLBACK:
            self.fallback_routed += 1

    def to_dict(self) -> Dict[str, Any]:
        cumulative = 0
        buckets = []
        for bound, count in zip(self.buckets, self.latency_counts):
            cumulative += count
            buckets.append({"le": bound, "count": cumulative})
        buckets.append({"le": "+Inf", "count": cumulative + self.latency_counts[-1]})
        return {
            "processed": self.processed,
            "failed": self.failed,
            "per_type": {t.value: self.per_type.get(t.value, 0) for t in TweetType},
            "per_category": {
                c.value: self.per_category[c.value]
                for c in ComplaintCategory
                if self.per_category.get(c.value)
            },
            "incomplete": self.incomplete,
            "fallback_routed": self.fallback_routed,
            "latency_seconds": {
                "buckets": buckets,
                "sum": self.latency_sum,
                "count": self.processed,
            },
        }


def error_status(exc: Exception) -> int:
    if isinstance(exc, UnknownTask):
        return 404
    if isinstance(exc, IllegalTransition):
        return 409
    if isinstance(exc, EmptyText):
        return 422
    return 400


def error_response(exc: Exception, status: Optional[int] = None, **extra: Any) -> web.Response:
    body: Dict[str, Any] = {"error": exc.__class__.__name__, "detail": str(exc)}
    body.update(extra)
    return web.json_response(body, status=status or error_status(exc), dumps=dumps)


async def read_json(request: web.Request) -> Any:
    try:
        return json.loads(await request.text())
    except ValueError:
        raise MalformedLine("request body is not JSON")


def _run(request: web.Request, data: Any) -> Tuple[TriageOutcome, Dict[str, Any]]:
    if not isinstance(data, dict):
        raise MalformedLine("expected a JSON object")
    tweet = record_from_object(data)
    triager: Triager = request.app[TRIAGER_KEY]
    started = time.perf_counter()
    outcome = triager.triage_one(tweet)
    request.app[METRICS_KEY].observe(outcome, time.perf_counter() - started)
    body = encode_outcome(outcome)
    if isinstance(outcome, TriageResult) and outcome.tweet_type == TweetType.COMPLAINT:
        task = request.app[STORE_KEY].create(outcome)
        body["task_id"] = task.task_id
    return outcome, body


async def triage_handler(request: web.Request) -> web.Response:
    try:
        outcome, body = _run(request, await read_json(request))
    except IngestError as e:
        return error_response(e)
    if isinstance(outcome, TriageFailure):
        return web.json_response(body, status=422, dumps=dumps)
    return web.json_response(body, dumps=dumps)


async def triage_batch_handler(request: web.Request) -> web.Response:
    try:
        data = await read_json(request)
    except IngestError as e:
        return error_response(e)
    if not isinstance(data, list):
        return error_response(MalformedLine("expected a JSON array"))
    if len(data) > BATCH_LIMIT:
        return error_response(
            MalformedLine(f"batch of {len(data)} exceeds limit of {BATCH_LIMIT}")
        )
    # validate everything before triaging anything
    for index, item in enumerate(data):
        try:
            if not isinstance(item, dict):
                raise MalformedLine("expected a JSON object")
            record_from_object(item)
        except IngestError as e:
            return error_response(e, index=index)
    results: List[Dict[str, Any]] = [_run(request, item)[1] for item in data]
    return web.json_response(results, dumps=dumps)


async def list_tasks_handler(request: web.Request) -> web.Response:
    store: TaskStore = request.app[STORE_KEY]
    try:
        state = TaskState(request.query["state"]) if "state" in request.query else None
        category = (
            ComplaintCategory(request.query["category"])
            if "category" in request.query
            else None
        )
    except ValueError as e:
        return web.json_response(
            {"error": "BadInputException", "detail": str(e)}, status=400, dumps=dumps
        )
    return web.json_response(encode_tasks(store.tasks(state, category)), dumps=dumps)


async def task_state_handler(request: web.Request) -> web.Response:
    store: TaskStore = request.app[STORE_KEY]
    try:
        data = await read_json(request)
        if not isinstance(data, dict) or "state" not in data:
            raise MalformedLine('expected {"state": ...}')
        try:
            state = TaskState(data["state"])
        except ValueError:
            raise MalformedLine(f"unknown state={data['state']!r}")
        task = store.transition(request.match_info["task_id"], state)
    except TriageError as e:
        return error_response(e)
    return web.json_response(encode_task(task), dumps=dumps)


async def metrics_handler(request: web.Request) -> web.Response:
    return web.json_response(request.app[METRICS_KEY].to_dict(), dumps=dumps)


async def health_handler(request: web.Request) -> web.Response:
    triager: Triager = request.app[TRIAGER_KEY]
    return web.json_response(
        {
            "status": "ok",
            "pipeline_version": triager.pipeline_version,
            "tasks": len(request.app[STORE_KEY]),
        },
        dumps=dumps,
    )


def create_app(
    triager: Triager, store: Optional[TaskStore] = None, metrics: Optional[Metrics] = None
) -> web.Application:
    app = web.Application()
    app[TRIAGER_KEY] = triager
    app[STORE_KEY] = store if store is not None else TaskStore()
    app[METRICS_KEY] = metrics if metrics is not None else Metrics()
    app.router.add_post("/v1/triage", triage_handler)
    app.router.add_post("/v1/triage/batch", triage_batch_handler)
    app.router.add_get("/v1/tasks", list_tasks_handler)
    app.router.add_post("/v1/tasks/{task_id}/state", task_state_handler)
    app.router.add_get("/v1/metrics", metrics_handler)
    app.router.add_get("/v1/health", health_handler)
    return app


def parse_bind(bind: str) -> Tuple[str, int]:
    """
    HOST:PORT, HOST or :PORT
    """
    host, sep, port = bind.rpartition(":")
    if not sep:
        return bind, DEFAULT_PORT
    if not port.isdigit():
        raise BadInputException(f"bad port in bind={bind!r}")
    return host or DEFAULT_HOST, int(port)


def serve(
    triager: Triager,
    store: Optional[TaskStore] = None,
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
) -> None:
    logger.info(f"serving host={host} port={port} pipeline_version={triager.pipeline_version}")
    web.run_app(create_app(triager, store), host=host, port=port, print=None)
