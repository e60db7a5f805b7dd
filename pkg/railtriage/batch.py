from pathlib import Path
from typing import Optional, Union

import termtables as tt

from .codecs import dumps, encode_outcome
from .constants import TweetType
from .exceptions import OutputUnwritable
from .ingest import read_corpus
from .store import TaskStore
from .triager import Triager
from .types import BatchSummary, TriageResult
from .utils import get_logger

logger = get_logger(__name__)


def triage_batch(
    input: Union[str, Path],
    output: Union[str, Path],
    triager: Triager,
    store: Optional[TaskStore] = None,
) -> BatchSummary:
    """
    Triage every valid record of a JSONL corpus into one output line each,
    in input order.  Rejected lines are counted, never written.  With a
    store, every complaint also becomes a task.
    """
    batch = read_corpus(input)
    summary = BatchSummary(rejected=len(batch.rejected))
    try:
        f = open(output, "w", encoding="utf-8")
    except OSError as e:
        raise OutputUnwritable(f"cannot write {output}", path=str(output), reason=str(e))
    with f:
        for tweet in batch.records:
            outcome = triager.triage_one(tweet)
            summary.add(outcome)
            try:
                f.write(dumps(encode_outcome(outcome)) + "\n")
            except OSError as e:
                raise OutputUnwritable(
                    f"cannot write {output}", path=str(output), reason=str(e)
                )
            if (
                store is not None
                and isinstance(outcome, TriageResult)
                and outcome.tweet_type == TweetType.COMPLAINT
            ):
                store.create(outcome)
    logger.debug(f"batch input={input} output={output} summary={summary.to_dict()}")
    return summary


def format_summary(summary: BatchSummary) -> str:
    data = summary.to_dict()
    rows = [[t, count] for t, count in data["per_type"].items()]
    rows.extend([f"  {c}", count] for c, count in data["per_category"].items())
    for key in ("incomplete", "fallback_routed", "auto_resolved", "rejected", "failed"):
        rows.append([key, data[key]])
    rows.append(["total", data["total"]])
    return tt.to_string(rows, header=["", "records"], style=tt.styles.ascii_thin_double)
