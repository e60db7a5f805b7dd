from pathlib import Path
from typing import (
    Generic,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import ahocorasick

from .exceptions import FileUnreadable, InternalTriageError, MalformedEntry
from .utils import content_version, get_logger

logger = get_logger(__name__)

T = TypeVar("T")

COMMENT = "#"


class Table(NamedTuple):
    path: str
    rows: List[Tuple[int, List[str]]]
    version: str


def read_text(path: Union[str, Path]) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise FileUnreadable(f"cannot read {path}", path=str(path), reason=str(e))


def read_table(
    path: Union[str, Path], min_columns: int = 1, max_columns: Optional[int] = None
) -> Table:
    """
    Read an operator-editable TSV file.  Blank lines and lines whose first
    character is '#' are skipped; fields are stripped of surrounding
    whitespace.
    """
    text = read_text(path)
    if max_columns is None:
        max_columns = min_columns
    rows: List[Tuple[int, List[str]]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith(COMMENT):
            continue
        fields = [col.strip() for col in raw.split("\t")]
        # tolerate trailing tabs
        while len(fields) > min_columns and fields[-1] == "":
            fields.pop()
        if not min_columns <= len(fields) <= max_columns:
            raise MalformedEntry(
                f"expected {min_columns}..{max_columns} columns got {len(fields)}",
                path=str(path),
                line_number=line_number,
            )
        rows.append((line_number, fields))
    logger.debug(f"read table path={path} rows={len(rows)}")
    return Table(str(path), rows, content_version(text))


class Cursor(Generic[T]):
    def __init__(self, items: Sequence[T]) -> None:
        self._items = items
        self._index = 0

    def peek(self) -> Optional[T]:
        if self.at_end():
            return None
        return self._items[self._index]

    def grab(self) -> T:
        if self.at_end():
            raise InternalTriageError(
                f"cannot go beyond {len(self._items)} index={self._index}"
            )
        current = self._items[self._index]
        self._index += 1
        return current

    def at_end(self) -> bool:
        return self._index >= len(self._items)

    @property
    def index(self) -> int:
        return self._index

    @property
    def remaining(self) -> Sequence[T]:
        return self._items[self._index :]


class PhraseMatch(NamedTuple):
    start: int
    end: int
    words: Tuple[str, ...]
    payload: object


class PhraseMatcher(Generic[T]):
    """
    Finds fixed word sequences in a token key sequence.

    Phrases are padded with spaces so only whole tokens match.  Overlapping
    candidates are resolved longest first, then leftmost; every token is
    consumed by at most one match.
    """

    def __init__(self, phrases: Iterable[Tuple[Sequence[str], T]]) -> None:
        self._automaton = ahocorasick.Automaton()
        self._size = 0
        for words, payload in phrases:
            words = tuple(words)
            if len(words) == 0:
                continue
            self._automaton.add_word(
                " " + " ".join(words) + " ", (len(words), words, payload)
            )
            self._size += 1
        if self._size > 0:
            self._automaton.make_automaton()

    def __len__(self) -> int:
        return self._size

    def candidates(self, keys: Sequence[str]) -> List[PhraseMatch]:
        if self._size == 0 or len(keys) == 0:
            return []
        text = " " + " ".join(keys) + " "
        starts = {}
        offset = 1
        for index, key in enumerate(keys):
            starts[offset] = index
            offset += len(key) + 1
        found = []
        for end_index, (count, words, payload) in self._automaton.iter(text):
            key_length = len(" ".join(words)) + 2
            first_char = end_index - key_length + 2
            start = starts[first_char]
            found.append(PhraseMatch(start, start + count, words, payload))
        return found

    def find(self, keys: Sequence[str]) -> List[PhraseMatch]:
        chosen: List[PhraseMatch] = []
        taken = set()
        ordered = sorted(self.candidates(keys), key=lambda m: (m.start - m.end, m.start))
        for match in ordered:
            span = range(match.start, match.end)
            if any(i in taken for i in span):
                continue
            taken.update(span)
            chosen.append(match)
        return sorted(chosen, key=lambda m: m.start)
