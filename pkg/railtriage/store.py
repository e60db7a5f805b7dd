import datetime
import json
import os
import threading
import uuid
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from .codecs import (
    decode_task,
    decode_timestamp,
    dumps,
    encode_created_event,
    encode_state_event,
)
from .constants import (
    LEGAL_TRANSITIONS,
    ComplaintCategory,
    CompletenessStatus,
    StoreEvent,
    TaskState,
    TweetType,
)
from .exceptions import (
    BadInputException,
    IllegalTransition,
    OutputUnwritable,
    StoreCorrupt,
    StoreError,
    UnknownTask,
)
from .types import TaskRecord, TriageResult
from .utils import get_logger, utc_now

logger = get_logger(__name__)


def new_task_id() -> str:
    return f"task-{uuid.uuid4().hex[:12]}"


def initial_state(result: TriageResult) -> TaskState:
    if result.completeness.status == CompletenessStatus.INCOMPLETE:
        return TaskState.NEEDS_INFO
    return TaskState.READY


def apply_event(tasks: Dict[str, TaskRecord], event: Dict) -> None:
    """
    Fold one store event into an index.  The latest event for a task wins.
    """
    kind = StoreEvent(event["event"])
    if kind == StoreEvent.CREATED:
        task = decode_task(event)
        tasks[task.task_id] = task
        return
    task_id = event["task_id"]
    if task_id not in tasks:
        raise KeyError(task_id)
    current = tasks[task_id]
    tasks[task_id] = TaskRecord(
        current.task_id, current.result, TaskState(event["state"]), current.created_at
    )
    # validate the timestamp even though the index does not keep it
    decode_timestamp(event["at"])


def _lines(data: bytes) -> Iterator[Tuple[int, int, bytes]]:
    """
    (line_number, end_offset, content) for every line, keeping the offset
    just past each newline
    """
    offset = 0
    line_number = 0
    while offset < len(data):
        line_number += 1
        newline = data.find(b"\n", offset)
        end = len(data) if newline == -1 else newline + 1
        yield line_number, end, data[offset:end]
        offset = end


def replay(path: Union[str, Path]) -> Tuple[Dict[str, TaskRecord], int]:
    """
    Rebuild the task index from a log.  Returns the index and the byte
    offset at which the intact prefix ends.  A bad final line is left
    out of the index; a bad line anywhere else raises StoreCorrupt.
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise StoreError(f"cannot read {path}", path=str(path), reason=str(e))
    tasks: Dict[str, TaskRecord] = {}
    good_end = 0
    lines = list(_lines(data))
    for position, (line_number, end, raw) in enumerate(lines):
        last = position == len(lines) - 1
        if not raw.strip():
            good_end = end
            continue
        try:
            apply_event(tasks, json.loads(raw.decode("utf-8")))
        except (ValueError, KeyError, TypeError) as e:
            if last:
                logger.warning(
                    f"dropping corrupt trailing store line={line_number} path={path} reason={e!r}"
                )
                break
            raise StoreCorrupt(
                f"unreadable event in {path}", line_number=line_number, reason=str(e)
            )
        good_end = end
    return tasks, good_end


class TaskStore:
    """
    Actionable tasks kept in memory and, when given a path, persisted as an
    append-only JSONL event log.

    Appends are serialized by a lock (single writer); readers use the
    in-memory index.
    """

    def __init__(
        self,
        path: Optional[Union[str, Path]] = None,
        fsync: bool = False,
        clock: Optional[Callable[[], "datetime.datetime"]] = None,
    ) -> None:
        self.path = Path(path) if path is not None else None
        self.fsync = fsync
        self.clock = clock or utc_now
        self._lock = threading.Lock()
        self._tasks: Dict[str, TaskRecord] = {}
        if self.path is not None:
            self._open()

    def _open(self) -> None:
        assert self.path is not None
        if not self.path.exists():
            return
        self._tasks, good_end = replay(self.path)
        size = self.path.stat().st_size
        if good_end < size:
            with open(self.path, "r+b") as f:
                f.truncate(good_end)
        if good_end > 0:
            with open(self.path, "rb") as f:
                f.seek(good_end - 1)
                ends_cleanly = f.read(1) == b"\n"
            if not ends_cleanly:
                self._write({})
        logger.debug(f"opened store path={self.path} tasks={len(self._tasks)}")

    def _write(self, event: Dict) -> None:
        if self.path is None:
            return
        line = "\n" if not event else dumps(event) + "\n"
        try:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line)
                if self.fsync:
                    f.flush()
                    os.fsync(f.fileno())
        except OSError as e:
            raise OutputUnwritable(f"cannot append to {self.path}", path=str(self.path), reason=str(e))

    def __len__(self) -> int:
        return len(self._tasks)

    def __contains__(self, task_id: object) -> bool:
        return task_id in self._tasks

    def append(self, task: TaskRecord) -> TaskRecord:
        with self._lock:
            if task.task_id in self._tasks:
                raise BadInputException(f"task_id={task.task_id} already stored")
            self._write(encode_created_event(task))
            self._tasks[task.task_id] = task
        return task

    def create(self, result: TriageResult) -> TaskRecord:
        if result.tweet_type != TweetType.COMPLAINT:
            raise BadInputException(
                f"only complaints become tasks got={result.tweet_type.value}"
            )
        task = TaskRecord(new_task_id(), result, initial_state(result), self.clock())
        return self.append(task)

    def get(self, task_id: str) -> TaskRecord:
        try:
            return self._tasks[task_id]
        except KeyError:
            raise UnknownTask(f"no task with task_id={task_id}", task_id=task_id)

    def transition(self, task_id: str, state: TaskState) -> TaskRecord:
        with self._lock:
            current = self.get(task_id)
            if state not in LEGAL_TRANSITIONS[current.state]:
                raise IllegalTransition(
                    f"cannot move {current.state.value} to {state.value}",
                    task_id=task_id,
                )
            self._write(encode_state_event(task_id, state, self.clock()))
            updated = TaskRecord(current.task_id, current.result, state, current.created_at)
            self._tasks[task_id] = updated
        logger.debug(f"task_id={task_id} state={state.value}")
        return updated

    def tasks(
        self,
        state: Optional[TaskState] = None,
        category: Optional[ComplaintCategory] = None,
    ) -> List[TaskRecord]:
        """
        Tasks in creation order, optionally filtered
        """
        return [
            task
            for task in list(self._tasks.values())
            if (state is None or task.state == state)
            and (category is None or task.category == category)
        ]

    def scan(self) -> Dict[str, TaskRecord]:
        """
        Replay the log from disk without touching the in-memory index
        """
        if self.path is None or not self.path.exists():
            return dict(self._tasks)
        with self._lock:
            tasks, _ = replay(self.path)
        return tasks
