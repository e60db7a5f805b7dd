import datetime
import re
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .constants import (
    CONTEXT_REACH,
    MIN_STATION_CODE_LENGTH,
    MIN_TRANSACTION_ID_LENGTH,
    MOBILE_KEYWORDS,
    MOBILE_LEADING_DIGITS,
    MOBILE_LENGTH,
    PLATFORM_FILLERS,
    PLATFORM_KEYWORDS,
    PNR_KEYWORDS,
    PNR_LENGTH,
    STATION_FRAME_AFTER,
    STATION_FRAME_BEFORE,
    TRAIN_NO_LENGTH,
    TRANSACTION_FILLERS,
    TRANSACTION_KEYWORDS,
    EntityField,
    TokenKind,
)
from .core import PhraseMatch, PhraseMatcher, read_table
from .exceptions import MalformedEntry
from .textproc import normalize, tokenize
from .types import EntitySet, Span, Station, Token
from .utils import get_logger

logger = get_logger(__name__)

_DATE = re.compile(r"^(\d{1,2})[/-](\d{1,2})[/-](\d{4})$")
_COACH = re.compile(r"^(?:s|b|a|h|c|d|e|m|ha|hb|gs|ac|cc|ec)\d{1,2}$")
_TRANSACTION_ID = re.compile(r"^[a-z0-9]+$")


class Gazetteer:
    """
    Station names and codes with their division and zone.  Surface forms are
    normalized and tokenized the same way tweets are.
    """

    def __init__(self, stations: Sequence[Station], version: str = "") -> None:
        self.stations = list(stations)
        self.version = version
        forms: Dict[Tuple[str, ...], Station] = {}
        for station in self.stations:
            surfaces = [station.name]
            if len(station.code) >= MIN_STATION_CODE_LENGTH:
                surfaces.append(station.code)
            for surface in surfaces:
                words = tuple(t.key for t in tokenize(normalize(surface)))
                if words and words not in forms:
                    forms[words] = station
        self._matcher: PhraseMatcher[Station] = PhraseMatcher(forms.items())

    def __len__(self) -> int:
        return len(self.stations)

    @property
    def pairs(self) -> FrozenSet[Tuple[str, str]]:
        return frozenset((s.zone, s.division) for s in self.stations)

    def find(self, keys: Sequence[str]) -> List[PhraseMatch]:
        return self._matcher.find(keys)


def load_gazetteer(path: Union[str, Path]) -> Gazetteer:
    """
    Read code<TAB>name<TAB>division<TAB>zone rows.
    """
    table = read_table(path, 4)
    stations = []
    codes: Set[str] = set()
    for line_number, (code, name, division, zone) in table.rows:
        if not all((code, name, division, zone)):
            raise MalformedEntry("empty column", path=table.path, line_number=line_number)
        if code.upper() in codes:
            raise MalformedEntry(
                f"duplicate station code={code}", path=table.path, line_number=line_number
            )
        codes.add(code.upper())
        stations.append(Station(code.upper(), name, division.upper(), zone.upper()))
    logger.debug(f"loaded gazetteer path={path} stations={len(stations)}")
    return Gazetteer(stations, table.version)


class _Extraction:
    def __init__(self, tokens: Sequence[Token]) -> None:
        self.tokens = tokens
        self.entities = EntitySet()
        self.claimed: Set[int] = set()

    def free(self, index: int) -> bool:
        return index not in self.claimed

    def claim(
        self,
        name: EntityField,
        value: object,
        span: Span,
    ) -> None:
        surface = " ".join(t.surface for t in self.tokens[span[0] : span[1]])
        if self.entities.has(name):
            self.entities.duplicates.append((name.value, surface, span))
            logger.debug(f"ignoring later {name.value}={surface!r} span={span}")
        else:
            setattr(self.entities, name.value, value)
            self.entities.spans[name.value] = span
        self.claimed.update(range(span[0], span[1]))

    def after(self, index: int, reach: int = CONTEXT_REACH) -> List[int]:
        return [
            i
            for i in range(index + 1, min(index + 1 + reach, len(self.tokens)))
            if self.free(i)
        ]

    def next_value(self, index: int, fillers: FrozenSet[str]) -> Optional[int]:
        """
        First unclaimed token after index that is neither punctuation nor a
        filler word
        """
        i = index + 1
        while i < len(self.tokens):
            token = self.tokens[i]
            if token.kind == TokenKind.PUNCT or token.key in fillers:
                i += 1
                continue
            return i if self.free(i) else None
        return None


def _digits(token: Token, length: int) -> bool:
    return token.kind == TokenKind.NUMBER and token.norm.isdigit() and len(token.norm) == length


def _is_mobile(token: Token) -> bool:
    return _digits(token, MOBILE_LENGTH) and token.norm[0] in MOBILE_LEADING_DIGITS


def _booking_date(token: Token) -> Optional["datetime.date"]:
    if token.kind != TokenKind.NUMBER:
        return None
    match = _DATE.match(token.norm)
    if match is None:
        return None
    day, month, year = (int(g) for g in match.groups())
    try:
        return datetime.date(year, month, day)
    except ValueError:
        return None


def _context_rules(ex: _Extraction) -> None:
    tokens = ex.tokens
    for index, token in enumerate(tokens):
        if token.kind != TokenKind.WORD:
            continue
        key = token.key
        if key in PNR_KEYWORDS:
            for i in ex.after(index):
                if _digits(tokens[i], PNR_LENGTH):
                    ex.claim(EntityField.PNR, tokens[i].norm, (i, i + 1))
                    break
        elif key in MOBILE_KEYWORDS:
            for i in ex.after(index):
                if _is_mobile(tokens[i]):
                    ex.claim(EntityField.MOBILE, tokens[i].norm, (i, i + 1))
                    break
        elif key in TRANSACTION_KEYWORDS:
            i = ex.next_value(index, TRANSACTION_FILLERS)
            if i is not None:
                value = tokens[i]
                if (
                    value.kind in (TokenKind.WORD, TokenKind.NUMBER)
                    and _TRANSACTION_ID.match(value.norm)
                    and any(c.isdigit() for c in value.norm)
                    and len(value.norm) >= MIN_TRANSACTION_ID_LENGTH
                ):
                    ex.claim(EntityField.TRANSACTION_ID, value.norm, (i, i + 1))
        elif key == "userid" or (
            key == "user" and index + 1 < len(tokens) and tokens[index + 1].key == "id"
        ):
            start = index if key == "userid" else index + 1
            i = ex.next_value(start, frozenset())
            if i is not None and tokens[i].kind in (
                TokenKind.WORD,
                TokenKind.NUMBER,
                TokenKind.MENTION,
            ):
                ex.claim(EntityField.USER_ID, tokens[i].norm, (i, i + 1))


def _shape_rules(ex: _Extraction) -> None:
    tokens = ex.tokens
    for i, token in enumerate(tokens):
        if ex.free(i) and _digits(token, TRAIN_NO_LENGTH):
            ex.claim(EntityField.TRAIN_NO, token.norm, (i, i + 1))
    for i, token in enumerate(tokens):
        if ex.free(i) and _digits(token, PNR_LENGTH):
            name = EntityField.MOBILE if _is_mobile(token) else EntityField.PNR
            ex.claim(name, token.norm, (i, i + 1))
    for i, token in enumerate(tokens):
        if ex.free(i):
            date = _booking_date(token)
            if date is not None:
                ex.claim(EntityField.BOOKING_DATE, date, (i, i + 1))
    for index, token in enumerate(tokens):
        if token.kind == TokenKind.WORD and token.key in PLATFORM_KEYWORDS:
            i = ex.next_value(index, PLATFORM_FILLERS)
            if i is not None and tokens[i].kind == TokenKind.NUMBER:
                ex.claim(EntityField.PLATFORM, tokens[i].norm, (i, i + 1))
    for i, token in enumerate(tokens):
        if ex.free(i) and token.kind == TokenKind.WORD and _COACH.match(token.norm):
            ex.claim(EntityField.COACH, token.norm.upper(), (i, i + 1))


def _framed(tokens: Sequence[Token], match: PhraseMatch) -> bool:
    keys = [t.key for t in tokens]
    if match.start == 0 or keys[match.start - 1] != STATION_FRAME_BEFORE:
        return False
    for frame in STATION_FRAME_AFTER:
        if tuple(keys[match.end : match.end + len(frame)]) == frame:
            return True
    return False


def _gazetteer_rule(ex: _Extraction, gazetteer: Gazetteer) -> None:
    tokens = ex.tokens
    matches = [
        m
        for m in gazetteer.find([t.key for t in tokens])
        if all(ex.free(i) for i in range(m.start, m.end))
    ]
    # the "at <name> railway station" frame outranks earlier bare mentions
    matches.sort(key=lambda m: (not _framed(tokens, m), m.start))
    for match in matches:
        station = match.payload
        assert isinstance(station, Station)
        ex.claim(EntityField.STATION, station, (match.start, match.end))


def extract_entities(tokens: Sequence[Token], gazetteer: Gazetteer) -> EntitySet:
    """
    Best-effort extraction: context-keyword rules first, then digit-shape
    rules on the tokens they left, then the station gazetteer.  Only the
    first value of each kind is kept.
    """
    ex = _Extraction(tokens)
    _context_rules(ex)
    _shape_rules(ex)
    _gazetteer_rule(ex, gazetteer)
    logger.debug(f"entities={ex.entities.populated()} spans={ex.entities.spans}")
    return ex.entities
