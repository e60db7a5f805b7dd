import json
import random

import pytest

from railtriage.constants import LEGAL_TRANSITIONS, ComplaintCategory, TaskState
from railtriage.exceptions import (
    BadInputException,
    IllegalTransition,
    StoreCorrupt,
    UnknownTask,
)
from railtriage.store import TaskStore, replay

from conftest import FIXED_TIME, fixed_clock, make_tweet


@pytest.fixture
def results(samples, triager):
    return {key: triager.triage_one(make_tweet(r["text"], key)) for key, r in samples.items()}


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "tasks.jsonl"


def test_initial_states(results):
    store = TaskStore(clock=fixed_clock)
    complete = store.create(results["leak"])
    incomplete = store.create(results["refund"])
    assert complete.state == TaskState.READY
    assert incomplete.state == TaskState.NEEDS_INFO
    assert complete.created_at == FIXED_TIME
    assert complete.task_id.startswith("task-")
    assert complete.task_id != incomplete.task_id
    assert len(store) == 2


def test_only_complaints(results):
    store = TaskStore()
    with pytest.raises(BadInputException):
        store.create(results["coach"])
    assert len(store) == 0


def test_legal_transitions(results):
    store = TaskStore(clock=fixed_clock)
    task = store.create(results["refund"])
    assert store.transition(task.task_id, TaskState.READY).state == TaskState.READY
    assert store.transition(task.task_id, TaskState.DISPATCHED).state == TaskState.DISPATCHED
    assert store.get(task.task_id).state == TaskState.DISPATCHED


@pytest.mark.parametrize(
    "start,target",
    [
        (TaskState.NEEDS_INFO, TaskState.DISPATCHED),
        (TaskState.NEEDS_INFO, TaskState.NEEDS_INFO),
        (TaskState.READY, TaskState.NEEDS_INFO),
        (TaskState.READY, TaskState.READY),
    ],
)
def test_illegal_transitions(results, start, target):
    store = TaskStore()
    source = results["refund"] if start == TaskState.NEEDS_INFO else results["leak"]
    task = store.create(source)
    with pytest.raises(IllegalTransition):
        store.transition(task.task_id, target)
    assert store.get(task.task_id).state == start


def test_dispatched_is_final(results):
    store = TaskStore()
    task = store.create(results["leak"])
    store.transition(task.task_id, TaskState.DISPATCHED)
    for state in TaskState:
        with pytest.raises(IllegalTransition):
            store.transition(task.task_id, state)


def test_unknown_task():
    store = TaskStore()
    with pytest.raises(UnknownTask):
        store.get("task-000000000000")
    with pytest.raises(UnknownTask):
        store.transition("task-000000000000", TaskState.READY)


def test_filters_keep_creation_order(results):
    store = TaskStore()
    created = [store.create(results[key]) for key in ("late", "refund", "leak")]
    assert [t.task_id for t in store.tasks()] == [t.task_id for t in created]
    assert [t.task_id for t in store.tasks(state=TaskState.READY)] == [
        created[0].task_id,
        created[2].task_id,
    ]
    by_category = store.tasks(category=ComplaintCategory.TICKETING_REFUND)
    assert [t.task_id for t in by_category] == [created[1].task_id]
    assert store.tasks(TaskState.NEEDS_INFO, ComplaintCategory.PUNCTUALITY) == []


def test_survives_restart(results, store_path):
    store = TaskStore(store_path, clock=fixed_clock)
    created = [store.create(results[key]) for key in ("leak", "refund", "late")]
    store.transition(created[1].task_id, TaskState.READY)
    store.transition(created[2].task_id, TaskState.DISPATCHED)

    reopened = TaskStore(store_path)
    assert len(reopened) == 3
    assert [t.task_id for t in reopened.tasks()] == [t.task_id for t in created]
    assert [t.state for t in reopened.tasks()] == [
        TaskState.READY,
        TaskState.READY,
        TaskState.DISPATCHED,
    ]
    assert reopened.get(created[0].task_id).result == created[0].result


def test_truncated_tail_is_dropped(results, store_path):
    store = TaskStore(store_path)
    kept = store.create(results["leak"])
    store.create(results["refund"])
    data = store_path.read_bytes()
    store_path.write_bytes(data[: len(data) - 40])

    reopened = TaskStore(store_path)
    assert len(reopened) == 1
    assert kept.task_id in reopened
    # the torn line is gone and new events land on a fresh line
    again = reopened.create(results["late"])
    tasks, good_end = replay(store_path)
    assert set(tasks) == {kept.task_id, again.task_id}
    assert good_end == store_path.stat().st_size


def test_missing_final_newline(results, store_path):
    store = TaskStore(store_path)
    first = store.create(results["leak"])
    store_path.write_bytes(store_path.read_bytes().rstrip(b"\n"))
    reopened = TaskStore(store_path)
    second = reopened.create(results["refund"])
    assert set(TaskStore(store_path).scan()) == {first.task_id, second.task_id}


def test_corruption_mid_file(results, store_path):
    store = TaskStore(store_path)
    store.create(results["leak"])
    store.create(results["refund"])
    lines = store_path.read_text().splitlines()
    store_path.write_text("\n".join([lines[0], "{not json", lines[1]]) + "\n")
    with pytest.raises(StoreCorrupt) as e:
        TaskStore(store_path)
    assert e.value.line_number == 2


def test_state_event_for_unknown_task(results, store_path):
    store = TaskStore(store_path)
    store.create(results["leak"])
    ghost = {"event": "state", "task_id": "task-ghost", "state": "Ready", "at": "2022-01-10T12:00:00Z"}
    with open(store_path, "a") as f:
        f.write(json.dumps(ghost) + "\n")
        f.write(json.dumps(ghost) + "\n")
    with pytest.raises(StoreCorrupt):
        TaskStore(store_path)


def test_scan_matches_index(results, store_path):
    store = TaskStore(store_path)
    task = store.create(results["refund"])
    store.transition(task.task_id, TaskState.READY)
    scanned = store.scan()
    assert scanned.keys() == {task.task_id}
    assert scanned[task.task_id].state == TaskState.READY


def test_memory_store_has_no_file(results, tmp_path):
    store = TaskStore()
    store.create(results["leak"])
    assert store.path is None
    assert list(tmp_path.iterdir()) == []
    assert len(store.scan()) == 1


def test_replay_matches_naive_fold(results, store_path):
    rng = random.Random(2022)
    complaints = [results[key] for key in ("leak", "refund", "late")]
    store = TaskStore(store_path, clock=fixed_clock)
    expected = {}
    order = []
    events = 0
    while events < 10000:
        if not order or rng.random() < 0.1:
            task = store.create(rng.choice(complaints))
            expected[task.task_id] = task.state
            order.append(task.task_id)
        else:
            task_id = rng.choice(order)
            legal = sorted(LEGAL_TRANSITIONS[expected[task_id]])
            if not legal:
                continue
            store.transition(task_id, legal[0])
            expected[task_id] = legal[0]
        events += 1
    tasks, _ = replay(store_path)
    assert list(tasks) == order
    assert {k: t.state for k, t in tasks.items()} == expected
    assert [t.task_id for t in TaskStore(store_path).tasks()] == order
