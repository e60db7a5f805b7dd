import random

import pytest

from railtriage.categorize import CategoryRule, RuleSet, categorize, load_rules
from railtriage.constants import ComplaintCategory
from railtriage.exceptions import EmptyRuleSet, MalformedEntry
from railtriage.textproc import normalize, tokenize
from railtriage.types import EntitySet


@pytest.fixture
def rules(config):
    return config.rules


def run(text, rules, entities=None):
    return categorize(tokenize(normalize(text)), entities or EntitySet(), rules)


def vocabulary(rules):
    words = {w for rule in rules for phrase, _ in rule.keywords for w in phrase}
    return sorted(words) + ["the", "at", "train", ",", "not"]


def rescaled(rules, factor):
    return RuleSet(
        [CategoryRule(r.category, [(p, w * factor) for p, w in r.keywords]) for r in rules]
    )


def test_leak(samples, rules):
    result = run(samples["leak"]["text"], rules)
    assert result.category == ComplaintCategory.WATER_AVAILABILITY
    assert result.score == 5
    assert result.matched == ("water", "leakage")


def test_refund(samples, rules):
    result = run(samples["refund"]["text"], rules)
    assert result.category == ComplaintCategory.TICKETING_REFUND
    assert result.score == 11
    assert result.matched == ("ticket", "pnr not generated", "money deducted", "refund")


def test_late(samples, rules):
    result = run(samples["late"]["text"], rules)
    assert result.category == ComplaintCategory.PUNCTUALITY
    assert result.matched == ("hours late",)


def test_no_keywords_is_miscellaneous(rules):
    assert run("very bad experience overall", rules) == (
        ComplaintCategory.MISCELLANEOUS,
        0,
        (),
    )


def test_hashtags_match_by_word(rules):
    assert run("#dirty coach", rules).category == ComplaintCategory.CLEANLINESS


def test_tie_goes_to_earlier_category(rules):
    order = rules.order
    assert order.index(ComplaintCategory.UNRESERVED_TICKETING) < order.index(
        ComplaintCategory.TICKETING_REFUND
    )
    result = run("ticket", rules)
    assert result.category == ComplaintCategory.UNRESERVED_TICKETING
    assert result.score == 1


def test_heavier_category_wins(rules):
    result = run("the pantry staff were rude", rules)
    assert result.category == ComplaintCategory.STAFF_BEHAVIOR
    assert result.score == 4


def test_transaction_nudge(rules):
    entities = EntitySet(transaction_id="abc12345")
    result = run("txn id abc12345 failed", rules, entities)
    assert result.category == ComplaintCategory.TICKETING_REFUND
    assert result.score == 2
    assert result.matched == ("transaction_id",)
    assert run("ticket", rules, entities).category == ComplaintCategory.TICKETING_REFUND


def test_order_covers_taxonomy(rules):
    assert rules.order[0] == ComplaintCategory.DIVYANGJAN_FACILITIES
    assert ComplaintCategory.MISCELLANEOUS not in rules.order
    assert len(rules) == len(ComplaintCategory) - 1


def test_scaling_weights_keeps_category(rules):
    rng = random.Random(5)
    words = vocabulary(rules)
    scaled = {k: rescaled(rules, k) for k in (2, 3, 7)}
    for _ in range(1000):
        text = " ".join(rng.choice(words) for _ in range(rng.randrange(1, 10)))
        expected = run(text, rules)
        for factor, other in scaled.items():
            result = run(text, other)
            assert result.category == expected.category, text
            assert result.score == expected.score * factor


def test_keyword_order_within_category_is_irrelevant(rules):
    rng = random.Random(11)
    words = vocabulary(rules)
    texts = [
        " ".join(rng.choice(words) for _ in range(rng.randrange(1, 10))) for _ in range(200)
    ]
    for _ in range(5):
        shuffled = []
        for rule in rules:
            keywords = list(rule.keywords)
            rng.shuffle(keywords)
            shuffled.append(CategoryRule(rule.category, keywords))
        other = RuleSet(shuffled)
        for text in texts:
            assert run(text, other)[:2] == run(text, rules)[:2]


def test_empty_rule_set():
    with pytest.raises(EmptyRuleSet):
        RuleSet([])
    with pytest.raises(EmptyRuleSet):
        RuleSet([CategoryRule(ComplaintCategory.PUNCTUALITY)])


def test_load_empty_file(tmp_path):
    path = tmp_path / "categories.tsv"
    path.write_text("# nothing\n")
    with pytest.raises(EmptyRuleSet):
        load_rules(path)


@pytest.mark.parametrize(
    "row",
    [
        "Teleportation\tbeam\t3",
        "Miscellaneous\tother\t1",
        "Punctuality\tlate\t0",
        "Punctuality\tlate\tthree",
        "Punctuality\t\t3",
    ],
)
def test_load_bad_rows(tmp_path, row):
    path = tmp_path / "categories.tsv"
    path.write_text("Cleanliness\tdirty\t3\n" + row + "\n")
    with pytest.raises(MalformedEntry) as e:
        load_rules(path)
    assert e.value.line_number == 2


def test_load_duplicate_phrase(tmp_path):
    path = tmp_path / "categories.tsv"
    path.write_text("Cleanliness\tdirty\t3\nCleanliness\tDirty\t2\n")
    with pytest.raises(MalformedEntry):
        load_rules(path)


def test_load_order_follows_file(tmp_path):
    path = tmp_path / "categories.tsv"
    path.write_text("Punctuality\tlate\t3\nCleanliness\tdirty\t3\nPunctuality\tdelay\t3\n")
    rules = load_rules(path)
    assert rules.order[:2] == [ComplaintCategory.PUNCTUALITY, ComplaintCategory.CLEANLINESS]
    assert run("dirty and late", rules).category == ComplaintCategory.PUNCTUALITY
