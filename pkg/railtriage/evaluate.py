from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import termtables as tt

from .constants import ComplaintCategory, TweetType
from .exceptions import IngestError, MissingLabel
from .ingest import decode_line, iter_lines, parse_object, record_from_object
from .triager import Triager
from .types import TriageFailure, TweetRecord
from .utils import get_logger

logger = get_logger(__name__)

LABEL_KEY = "label"
CATEGORY_KEY = "category"
CLASSES = tuple(TweetType)


class LabeledRecord(NamedTuple):
    tweet: TweetRecord
    label: TweetType
    category: Optional[ComplaintCategory]


class ClassScores(NamedTuple):
    precision: float
    recall: float
    f1: float
    support: int


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


@dataclass
class EvalReport:
    """
    Scores of the type classifier against gold labels.

    `confusion[gold][predicted]` counts records; rows are gold labels.
    Records whose triage failed are counted in `failed` and left out of
    every score.
    """

    confusion: Dict[TweetType, Dict[TweetType, int]] = field(
        default_factory=lambda: {g: {p: 0 for p in CLASSES} for g in CLASSES}
    )
    # category -> (correct, total)
    category_counts: Dict[ComplaintCategory, Tuple[int, int]] = field(default_factory=dict)
    rejected: int = 0
    failed: int = 0

    def add(
        self,
        gold: TweetType,
        predicted: TweetType,
        gold_category: Optional[ComplaintCategory] = None,
        predicted_category: Optional[ComplaintCategory] = None,
    ) -> None:
        self.confusion[gold][predicted] += 1
        if gold == TweetType.COMPLAINT and gold_category is not None:
            correct, total = self.category_counts.get(gold_category, (0, 0))
            hit = int(predicted_category == gold_category)
            self.category_counts[gold_category] = (correct + hit, total + 1)

    @property
    def total(self) -> int:
        return sum(sum(row.values()) for row in self.confusion.values())

    def scores(self, kind: TweetType) -> ClassScores:
        true_positive = self.confusion[kind][kind]
        predicted = sum(self.confusion[g][kind] for g in CLASSES)
        support = sum(self.confusion[kind].values())
        precision = _ratio(true_positive, predicted)
        recall = _ratio(true_positive, support)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return ClassScores(precision, recall, f1, support)

    @property
    def accuracy(self) -> float:
        return _ratio(sum(self.confusion[k][k] for k in CLASSES), self.total)

    def category_accuracy(self) -> Dict[ComplaintCategory, float]:
        return {
            category: _ratio(correct, total)
            for category, (correct, total) in sorted(
                self.category_counts.items(), key=lambda kv: list(ComplaintCategory).index(kv[0])
            )
        }

    def matrix(self) -> List[List[int]]:
        return [[self.confusion[g][p] for p in CLASSES] for g in CLASSES]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "accuracy": self.accuracy,
            "classes": {
                k.value: self.scores(k)._asdict() for k in CLASSES
            },
            "confusion": {
                "labels": [k.value for k in CLASSES],
                "matrix": self.matrix(),
            },
            "category_accuracy": {
                c.value: value for c, value in self.category_accuracy().items()
            },
            "rejected": self.rejected,
            "failed": self.failed,
        }


def _label(data: Dict[str, Any], line_number: int) -> Tuple[TweetType, Optional[ComplaintCategory]]:
    try:
        label = TweetType(data[LABEL_KEY])
    except (KeyError, ValueError, TypeError):
        raise MissingLabel(
            f"no valid {LABEL_KEY!r} got={data.get(LABEL_KEY)!r}", line_number=line_number
        )
    category = None
    if data.get(CATEGORY_KEY) is not None:
        try:
            category = ComplaintCategory(data[CATEGORY_KEY])
        except ValueError:
            raise MissingLabel(
                f"unknown {CATEGORY_KEY}={data[CATEGORY_KEY]!r}", line_number=line_number
            )
    return label, category


def read_labeled(path: Union[str, Path]) -> Tuple[List[LabeledRecord], int]:
    """
    Labeled records in file order plus the count of lines that failed
    ingest validation.  A missing or unknown label is fatal.
    """
    records = []
    rejected = 0
    for line_number, raw in iter_lines(path):
        try:
            line = decode_line(raw)
            data = parse_object(line)
            tweet = record_from_object(data, line)
        except IngestError as e:
            logger.warning(f"rejected line={line_number} reason={e}")
            rejected += 1
            continue
        label, category = _label(data, line_number)
        records.append(LabeledRecord(tweet, label, category))
    return records, rejected


def score(records: Sequence[LabeledRecord], triager: Triager) -> EvalReport:
    report = EvalReport()
    for record in records:
        outcome = triager.triage_one(record.tweet)
        if isinstance(outcome, TriageFailure):
            report.failed += 1
            continue
        predicted_category = outcome.category.category if outcome.category else None
        report.add(record.label, outcome.tweet_type, record.category, predicted_category)
    return report


def evaluate(path: Union[str, Path], triager: Triager) -> EvalReport:
    records, rejected = read_labeled(path)
    report = score(records, triager)
    report.rejected = rejected
    return report


def format_report(report: EvalReport) -> str:
    rows = []
    for kind in CLASSES:
        s = report.scores(kind)
        rows.append([kind.value, f"{s.precision:.3f}", f"{s.recall:.3f}", f"{s.f1:.3f}", s.support])
    scores = tt.to_string(
        rows,
        header=["class", "precision", "recall", "f1", "support"],
        style=tt.styles.ascii_thin_double,
    )
    matrix = tt.to_string(
        [[g.value] + row for g, row in zip(CLASSES, report.matrix())],
        header=["gold \\ predicted"] + [k.value for k in CLASSES],
        style=tt.styles.ascii_thin_double,
    )
    parts = [scores, matrix, f"accuracy {report.accuracy:.3f} over {report.total} records"]
    accuracy = report.category_accuracy()
    if accuracy:
        parts.append(
            tt.to_string(
                [[c.value, f"{value:.3f}", report.category_counts[c][1]] for c, value in accuracy.items()],
                header=["category", "accuracy", "records"],
                style=tt.styles.ascii_thin_double,
            )
        )
    return "\n".join(parts)
