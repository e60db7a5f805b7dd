from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .constants import Polarity, TweetType
from .core import PhraseMatcher, Table, read_table
from .exceptions import (
    ConflictingPolarity,
    EmptyLexicon,
    MalformedEntry,
    MissingPrefixLabel,
)
from .textproc import normalize, phrase_keys, tokenize
from .utils import combined_version, get_logger

logger = get_logger(__name__)

POLARITY_FILE = "polarity.tsv"
CUES_FILE = "cues.tsv"
NEGATORS_FILE = "negators.tsv"
PREFIX_LABELS_FILE = "prefix_labels.tsv"

REQUIRED_PREFIX_LABELS = {
    "complaint": TweetType.COMPLAINT,
    "suggestion": TweetType.SUGGESTION,
    "appreciation": TweetType.APPRECIATION,
}


def _phrase(value: str, table: Table, line_number: int) -> Tuple[str, ...]:
    keys = phrase_keys(value)
    if not keys:
        raise MalformedEntry("empty entry", path=table.path, line_number=line_number)
    return keys


def _word(value: str, table: Table, line_number: int) -> str:
    tokens = tokenize(normalize(value))
    if len(tokens) != 1 or not tokens[0].is_word:
        raise MalformedEntry(
            f"expected a single word got {value!r}", path=table.path, line_number=line_number
        )
    return tokens[0].key


@dataclass(frozen=True)
class Lexicon:
    polarity: Mapping[str, Polarity]
    cues: FrozenSet[Tuple[str, ...]]
    negators: FrozenSet[str]
    prefix_labels: Mapping[str, TweetType]
    version: str
    _cue_matcher: PhraseMatcher = field(
        default=None, repr=False, compare=False  # type: ignore
    )

    def __post_init__(self) -> None:
        if self._cue_matcher is None:
            matcher: PhraseMatcher = PhraseMatcher((cue, " ".join(cue)) for cue in self.cues)
            object.__setattr__(self, "_cue_matcher", matcher)

    def polarity_of(self, norm_word: str) -> Polarity:
        return self.polarity.get(norm_word, Polarity.NEUTRAL)

    def is_negator(self, norm_word: str) -> bool:
        return norm_word in self.negators

    def prefix_type(self, norm_word: str) -> Optional[TweetType]:
        return self.prefix_labels.get(norm_word)

    def match_cues(self, keys: Sequence[str]) -> List[Tuple[int, str]]:
        """
        Greedy longest-first cue matches over token keys as (position, cue)
        """
        return [(m.start, str(m.payload)) for m in self._cue_matcher.find(keys)]


def polarity_of(lexicon: Lexicon, norm_word: str) -> Polarity:
    return lexicon.polarity_of(norm_word)


def _load_polarity(table: Table) -> Dict[str, Polarity]:
    polarity: Dict[str, Polarity] = {}
    for line_number, (word, label) in table.rows:
        word = _word(word, table, line_number)
        try:
            value = Polarity(label.strip().lower())
        except ValueError:
            value = Polarity.NEUTRAL
        if value == Polarity.NEUTRAL:
            raise MalformedEntry(
                f"expected word<TAB>positive|negative got {label!r}",
                path=table.path,
                line_number=line_number,
            )
        if polarity.get(word, value) != value:
            raise ConflictingPolarity(
                f"{word!r} is listed as both positive and negative", word=word
            )
        polarity[word] = value
    if len(polarity) == 0:
        raise EmptyLexicon(f"no polarity entries in {table.path}", path=table.path)
    return polarity


def _load_words(table: Table) -> List[str]:
    return [_word(word, table, line_number) for line_number, (word,) in table.rows]


def _load_cues(table: Table) -> List[Tuple[str, ...]]:
    return [_phrase(cue, table, line_number) for line_number, (cue,) in table.rows]


def _load_prefix_labels(table: Table) -> Dict[str, TweetType]:
    labels: Dict[str, TweetType] = {}
    for line_number, (label, kind) in table.rows:
        try:
            labels[_word(label, table, line_number)] = TweetType(kind.strip().capitalize())
        except ValueError:
            raise MalformedEntry(
                f"unknown tweet type {kind!r}", path=table.path, line_number=line_number
            )
    for label, kind in REQUIRED_PREFIX_LABELS.items():
        if labels.get(label) != kind:
            raise MissingPrefixLabel(
                f"prefix label {label!r} must map to {kind.value}", label=label
            )
    return labels


def load_lexicon(directory: Union[str, Path]) -> Lexicon:
    """
    Load polarity.tsv, cues.tsv, negators.tsv and prefix_labels.tsv from a
    directory.  Duplicate lines collapse; '#' lines are comments.
    """
    directory = Path(directory)
    polarity_table = read_table(directory / POLARITY_FILE, 2)
    cues_table = read_table(directory / CUES_FILE, 1)
    negators_table = read_table(directory / NEGATORS_FILE, 1)
    prefix_table = read_table(directory / PREFIX_LABELS_FILE, 2)
    lexicon = Lexicon(
        polarity=_load_polarity(polarity_table),
        cues=frozenset(_load_cues(cues_table)),
        negators=frozenset(_load_words(negators_table)),
        prefix_labels=_load_prefix_labels(prefix_table),
        version=combined_version(
            t.version for t in (polarity_table, cues_table, negators_table, prefix_table)
        ),
    )
    logger.debug(
        f"loaded lexicon dir={directory} words={len(lexicon.polarity)} cues={len(lexicon.cues)} "
        f"negators={len(lexicon.negators)} version={lexicon.version}"
    )
    return lexicon


def dump_lexicon(lexicon: Lexicon, directory: Union[str, Path]) -> None:
    """
    Write a lexicon back out in the four-file layout, entries sorted.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        POLARITY_FILE: [
            f"{word}\t{value.value}" for word, value in sorted(lexicon.polarity.items())
        ],
        CUES_FILE: sorted(" ".join(cue) for cue in lexicon.cues),
        NEGATORS_FILE: sorted(lexicon.negators),
        PREFIX_LABELS_FILE: [
            f"{label}\t{kind.value}" for label, kind in sorted(lexicon.prefix_labels.items())
        ],
    }
    for name, lines in files.items():
        with open(directory / name, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
