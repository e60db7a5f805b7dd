import datetime  # noqa: F401
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Set, Tuple, Union

from .constants import (
    WORD_KINDS,
    ComplaintCategory,
    CompletenessStatus,
    Confidence,
    EntityField,
    Polarity,
    RouteBasis,
    TaskState,
    TokenKind,
    Trigger,
    TweetType,
)

Span = Tuple[int, int]
Evidence = Tuple[int, str]


@dataclass(frozen=True)
class TweetRecord:
    id: str
    author_handle: str
    created_at: "datetime.datetime"
    text: str
    target_handle: str


class Rejection(NamedTuple):
    line_number: int
    reason: str
    detail: str


@dataclass
class CorpusBatch:
    """
    Records parsed from one corpus file, in file order, plus every line
    that failed to parse
    """

    source_path: str
    records: List[TweetRecord] = field(default_factory=list)
    rejected: List[Rejection] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    kind: TokenKind
    position: int

    @property
    def key(self) -> str:
        # hashtags match lexicon and phrase tables by their word
        if self.kind == TokenKind.HASHTAG:
            return self.norm[1:]
        return self.norm

    @property
    def is_word(self) -> bool:
        return self.kind in WORD_KINDS


@dataclass(frozen=True)
class AnnotatedToken:
    token: Token
    polarity: Polarity
    negated: bool


@dataclass(frozen=True)
class TypeDecision:
    tweet_type: TweetType
    positive_count: int
    negative_count: int
    content_tokens: int
    trigger: Trigger
    matched_evidence: Tuple[Evidence, ...] = ()


@dataclass(frozen=True)
class Station:
    code: str
    name: str
    division: str
    zone: str


EntityValue = Union[str, "datetime.date", Station]


@dataclass
class EntitySet:
    pnr: Optional[str] = None
    train_no: Optional[str] = None
    mobile: Optional[str] = None
    transaction_id: Optional[str] = None
    user_id: Optional[str] = None
    booking_date: Optional["datetime.date"] = None
    station: Optional[Station] = None
    platform: Optional[str] = None
    coach: Optional[str] = None
    spans: Dict[str, Span] = field(default_factory=dict)
    # later occurrences of a kind already populated: (field, surface, span)
    duplicates: List[Tuple[str, str, Span]] = field(default_factory=list)

    def get(self, name: Union[str, EntityField]) -> Optional[EntityValue]:
        return getattr(self, EntityField(name).value)

    def populated(self) -> Set[str]:
        return {f.value for f in EntityField if self.get(f) is not None}

    def has(self, name: Union[str, EntityField]) -> bool:
        return self.get(name) is not None


class CategoryResult(NamedTuple):
    category: ComplaintCategory
    score: int
    matched: Tuple[str, ...]


@dataclass(frozen=True)
class CompletenessReport:
    status: CompletenessStatus
    missing: Tuple[str, ...] = ()
    prompt: Optional[str] = None
    schema_id: Optional[str] = None


@dataclass(frozen=True)
class RoutingAssignment:
    zone: str
    division: str
    department: str
    confidence: Confidence
    basis: RouteBasis


@dataclass(frozen=True)
class TriageResult:
    tweet: TweetRecord
    decision: TypeDecision
    entities: EntitySet
    category: Optional[CategoryResult]
    completeness: CompletenessReport
    routing: Optional[RoutingAssignment]
    acknowledgement: Optional[str]
    pipeline_version: str
    processed_at: "datetime.datetime"

    @property
    def tweet_type(self) -> TweetType:
        return self.decision.tweet_type


@dataclass(frozen=True)
class TriageFailure:
    tweet: TweetRecord
    error: str
    detail: str
    pipeline_version: str
    processed_at: "datetime.datetime"


TriageOutcome = Union[TriageResult, TriageFailure]


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    result: TriageResult
    state: TaskState
    created_at: "datetime.datetime"

    @property
    def category(self) -> Optional[ComplaintCategory]:
        if self.result.category is None:
            return None
        return self.result.category.category


@dataclass
class BatchSummary:
    total: int = 0
    rejected: int = 0
    failed: int = 0
    incomplete: int = 0
    fallback_routed: int = 0
    auto_resolved: int = 0
    per_type: "Counter[str]" = field(default_factory=Counter)
    per_category: "Counter[str]" = field(default_factory=Counter)

    def add(self, outcome: TriageOutcome) -> None:
        self.total += 1
        if isinstance(outcome, TriageFailure):
            self.failed += 1
            return
        self.per_type[outcome.tweet_type.value] += 1
        if outcome.category is not None:
            self.per_category[outcome.category.category.value] += 1
        needs_human = False
        if outcome.completeness.status == CompletenessStatus.INCOMPLETE:
            self.incomplete += 1
            needs_human = True
        if (
            outcome.routing is not None
            and outcome.routing.confidence == Confidence.FALLBACK
        ):
            self.fallback_routed += 1
            needs_human = True
        if not needs_human:
            self.auto_resolved += 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "per_type": {t.value: self.per_type.get(t.value, 0) for t in TweetType},
            "per_category": {
                c.value: self.per_category[c.value]
                for c in ComplaintCategory
                if self.per_category.get(c.value)
            },
            "incomplete": self.incomplete,
            "fallback_routed": self.fallback_routed,
            "auto_resolved": self.auto_resolved,
            "rejected": self.rejected,
            "failed": self.failed,
        }
