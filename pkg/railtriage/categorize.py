from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .constants import TRANSACTION_NUDGE, ComplaintCategory, EntityField
from .core import PhraseMatcher, read_table
from .exceptions import EmptyRuleSet, MalformedEntry
from .textproc import phrase_keys
from .types import CategoryResult, EntitySet, Token
from .utils import get_logger

logger = get_logger(__name__)

Keyword = Tuple[Tuple[str, ...], int]


@dataclass
class CategoryRule:
    category: ComplaintCategory
    keywords: List[Keyword] = field(default_factory=list)
    _matcher: Optional[PhraseMatcher[int]] = field(
        default=None, init=False, repr=False, compare=False
    )

    @property
    def matcher(self) -> PhraseMatcher[int]:
        if self._matcher is None:
            self._matcher = PhraseMatcher(self.keywords)
        return self._matcher

    def score(self, keys: Sequence[str]) -> Tuple[int, List[str]]:
        matches = self.matcher.find(keys)
        weights = [int(m.payload) for m in matches]  # type: ignore
        return sum(weights), [" ".join(m.words) for m in matches]


class RuleSet:
    """
    Category rules in taxonomy order.  The order is fixed by first
    appearance in the rules file; categories that never appear follow in
    declaration order and can only win through entity nudges.
    """

    def __init__(self, rules: Sequence[CategoryRule], version: str = "") -> None:
        if not any(rule.keywords for rule in rules):
            raise EmptyRuleSet("no category keywords")
        self.version = version
        seen = [rule.category for rule in rules]
        self.rules = list(rules) + [
            CategoryRule(c)
            for c in ComplaintCategory
            if c not in seen and c != ComplaintCategory.MISCELLANEOUS
        ]
        self._by_category = {rule.category: rule for rule in self.rules}

    def __iter__(self) -> Iterator[CategoryRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __getitem__(self, category: ComplaintCategory) -> CategoryRule:
        return self._by_category[category]

    @property
    def order(self) -> List[ComplaintCategory]:
        return [rule.category for rule in self.rules]


def load_rules(path: Union[str, Path]) -> RuleSet:
    """
    Read category<TAB>phrase<TAB>weight rows.
    """
    table = read_table(path, 3)
    rules: Dict[ComplaintCategory, CategoryRule] = {}
    for line_number, (name, phrase, weight_text) in table.rows:
        try:
            category = ComplaintCategory(name)
        except ValueError:
            raise MalformedEntry(
                f"unknown category {name!r}", path=table.path, line_number=line_number
            )
        if category == ComplaintCategory.MISCELLANEOUS:
            raise MalformedEntry(
                "Miscellaneous is the fallback and takes no keywords",
                path=table.path,
                line_number=line_number,
            )
        try:
            weight = int(weight_text)
        except ValueError:
            weight = 0
        if weight < 1:
            raise MalformedEntry(
                f"weight must be a positive integer got {weight_text!r}",
                path=table.path,
                line_number=line_number,
            )
        words = phrase_keys(phrase)
        if len(words) == 0:
            raise MalformedEntry("empty phrase", path=table.path, line_number=line_number)
        rule = rules.setdefault(category, CategoryRule(category))
        if any(existing == words for existing, _ in rule.keywords):
            raise MalformedEntry(
                f"duplicate phrase {phrase!r} for {name}",
                path=table.path,
                line_number=line_number,
            )
        rule.keywords.append((words, weight))
    if len(rules) == 0:
        raise EmptyRuleSet(f"no category rules in {path}", path=str(path))
    rule_set = RuleSet(list(rules.values()), table.version)
    logger.debug(f"loaded categories={len(rules)} path={path}")
    return rule_set


def categorize(
    tokens: Sequence[Token], entities: EntitySet, rules: RuleSet
) -> CategoryResult:
    keys = [t.key for t in tokens]
    best: Optional[CategoryResult] = None
    for rule in rules:
        score, matched = rule.score(keys)
        if rule.category == ComplaintCategory.TICKETING_REFUND and entities.has(
            EntityField.TRANSACTION_ID
        ):
            score += TRANSACTION_NUDGE
            matched.append(EntityField.TRANSACTION_ID.value)
        if score > 0 and (best is None or score > best.score):
            best = CategoryResult(rule.category, score, tuple(matched))
    if best is None:
        return CategoryResult(ComplaintCategory.MISCELLANEOUS, 0, ())
    logger.debug(f"category={best.category.value} score={best.score} matched={best.matched}")
    return best
