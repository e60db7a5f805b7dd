import json
from pathlib import Path
from typing import Any, Dict, Iterator, Set, Tuple, Union

from .codecs import decode_timestamp
from .constants import MAX_TEXT_LENGTH, REQUIRED_FIELDS
from .exceptions import (
    BadTimestamp,
    DuplicateRecord,
    EmptyText,
    FileUnreadable,
    IngestError,
    MalformedLine,
    MissingField,
    TextTooLong,
)
from .types import CorpusBatch, Rejection, TweetRecord
from .utils import get_logger

logger = get_logger(__name__)


def _excerpt(line: str, limit: int = 120) -> str:
    line = line.rstrip("\n")
    return line if len(line) <= limit else line[:limit] + "..."


def parse_object(line: str) -> Dict[str, Any]:
    try:
        data = json.loads(line)
    except ValueError:
        raise MalformedLine("line is not a JSON object", line=_excerpt(line))
    if not isinstance(data, dict):
        raise MalformedLine("line is not a JSON object", line=_excerpt(line))
    return data


def record_from_object(data: Dict[str, Any], line: str = "") -> TweetRecord:
    """
    Validate a decoded object and build the record; unknown keys are ignored.
    """
    line = _excerpt(line) if line else _excerpt(json.dumps(data))
    for name in REQUIRED_FIELDS:
        if name not in data or data[name] is None:
            raise MissingField(f"missing {name}", name=name, line=line)
        if not isinstance(data[name], str):
            raise MalformedLine(f"{name} must be a string", name=name, line=line)
    if not data["id"].strip():
        raise MissingField("empty id", name="id", line=line)
    text = data["text"]
    if not text.strip():
        raise EmptyText("text is empty", line=line)
    if len(text) > MAX_TEXT_LENGTH:
        raise TextTooLong(
            f"text has {len(text)} characters", limit=MAX_TEXT_LENGTH, line=line
        )
    try:
        created_at = decode_timestamp(data["created_at"])
    except ValueError:
        raise BadTimestamp(f"bad created_at={data['created_at']!r}", line=line)
    return TweetRecord(
        id=data["id"],
        author_handle=data["author_handle"],
        created_at=created_at,
        text=text,
        target_handle=data["target_handle"],
    )


def parse_record(line: str) -> TweetRecord:
    return record_from_object(parse_object(line), line)


def decode_line(raw: bytes) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        excerpt = _excerpt(raw.decode("utf-8", errors="replace"))
        raise MalformedLine(f"line is not UTF-8 at={e.start}", line=excerpt)


def iter_lines(path: Union[str, Path]) -> Iterator[Tuple[int, bytes]]:
    """
    Yield (line_number, raw bytes) for every non-blank line of a corpus file.
    Lines are decoded one at a time by `decode_line`, so a bad byte rejects
    only its own line.
    """
    try:
        with open(path, "rb") as f:
            for line_number, raw in enumerate(f, start=1):
                if raw.strip():
                    yield line_number, raw
    except OSError as e:
        raise FileUnreadable(f"cannot read {path}", path=str(path), reason=str(e))


def read_corpus(path: Union[str, Path]) -> CorpusBatch:
    batch = CorpusBatch(source_path=str(path))
    seen: Set[str] = set()
    for line_number, raw in iter_lines(path):
        try:
            line = decode_line(raw)
            record = parse_record(line)
            if record.id in seen:
                raise DuplicateRecord(f"duplicate id={record.id!r}", line=_excerpt(line))
        except IngestError as e:
            logger.warning(f"rejected line={line_number} reason={e}")
            batch.rejected.append(
                Rejection(line_number, e.__class__.__name__, str(e))
            )
            continue
        seen.add(record.id)
        batch.records.append(record)
    logger.debug(
        f"read corpus path={path} records={len(batch.records)} rejected={len(batch.rejected)}"
    )
    return batch
