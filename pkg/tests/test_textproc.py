import itertools
import random

import pytest

from railtriage.constants import Polarity, TokenKind, TweetType
from railtriage.lexicon import Lexicon
from railtriage.textproc import annotate, analyze, normalize, tokenize
from railtriage.types import Token


@pytest.fixture
def small_lexicon():
    return Lexicon(
        polarity={
            "good": Polarity.POSITIVE,
            "clean": Polarity.POSITIVE,
            "dirty": Polarity.NEGATIVE,
        },
        cues=frozenset(),
        negators=frozenset({"not", "no", "never"}),
        prefix_labels={"complaint": TweetType.COMPLAINT},
        version="test",
    )


def kinds(tokens):
    return [(t.kind.value, t.norm) for t in tokens]


def test_normalize_case_folding():
    assert normalize("Water LEAKAGE at Bhandup") == "water leakage at bhandup"


def test_normalize_elongation():
    assert normalize("goooood service") == "good service"
    assert normalize("sooo baaaad!!!") == "soo baad!!!"


def test_normalize_keeps_digit_runs():
    assert normalize("pnr 8444444444") == "pnr 8444444444"


def test_normalize_url():
    assert normalize("refund https://t.co/abc") == "refund <url>"
    assert normalize("see www.irctc.co.in now") == "see <url> now"


def test_normalize_whitespace():
    assert normalize("  late \t\n again  ") == "late again"


def test_normalize_diacritics():
    assert normalize("Café naïve") == "cafe naive"


def test_normalize_idempotent():
    rng = random.Random(7)
    alphabet = "aAooOO  é!#@/:.-0129https://wwwt.co"
    for _ in range(2000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 30)))
        once = normalize(text)
        assert normalize(once) == once


def test_tokenize_platform_group():
    assert kinds(tokenize("platform no 2/3")) == [
        ("word", "platform"),
        ("word", "no"),
        ("number", "2/3"),
    ]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_mention_and_punct():
    tokens = tokenize(normalize("@RailMinIndia refund!!"))
    assert kinds(tokens) == [
        ("mention", "@railminindia"),
        ("word", "refund"),
        ("punct", "!!"),
    ]


def test_tokenize_hashtag_url_date():
    tokens = tokenize(normalize("#dirty coach https://t.co/x booked 05/01/2022"))
    assert kinds(tokens) == [
        ("hashtag", "#dirty"),
        ("word", "coach"),
        ("url", "<url>"),
        ("word", "booked"),
        ("number", "05/01/2022"),
    ]
    assert tokens[0].key == "dirty"


def test_tokenize_contraction():
    assert kinds(tokenize("don't")) == [("word", "don't")]


def test_tokenize_positions_contiguous():
    tokens = tokenize(normalize("train 12555, late!! @rail #fail"))
    assert [t.position for t in tokens] == list(range(len(tokens)))


def test_annotate_not_good(small_lexicon):
    annotated = annotate(tokenize("not good"), small_lexicon)
    assert [(a.polarity, a.negated) for a in annotated] == [
        (Polarity.NEUTRAL, False),
        (Polarity.NEGATIVE, True),
    ]


def test_annotate_good(small_lexicon):
    (a,) = annotate(tokenize("good"), small_lexicon)
    assert a.polarity == Polarity.POSITIVE and not a.negated


def test_annotate_not_dirty_seat(small_lexicon):
    annotated = annotate(tokenize("not dirty seat"), small_lexicon)
    assert [(a.polarity, a.negated) for a in annotated] == [
        (Polarity.NEUTRAL, False),
        (Polarity.NEUTRAL, True),
        (Polarity.NEUTRAL, True),
    ]


def test_annotate_double_negation(small_lexicon):
    annotated = annotate(tokenize("not not good"), small_lexicon)
    assert [(a.polarity, a.negated) for a in annotated] == [
        (Polarity.NEUTRAL, False),
        (Polarity.NEUTRAL, True),
        (Polarity.NEGATIVE, True),
    ]


def test_annotate_window_ends(small_lexicon):
    annotated = annotate(tokenize("not a b c good"), small_lexicon)
    assert annotated[-1].polarity == Polarity.POSITIVE
    assert not annotated[-1].negated


def test_annotate_punct_closes_window(small_lexicon):
    annotated = annotate(tokenize(normalize("not bad, good")), small_lexicon)
    assert annotated[-1].polarity == Polarity.POSITIVE


def test_annotate_numbers_are_transparent(small_lexicon):
    annotated = annotate(tokenize("not 12 @x good"), small_lexicon)
    assert annotated[-1].polarity == Polarity.NEGATIVE


def test_annotate_hashtag(small_lexicon):
    (a,) = annotate(tokenize("#dirty"), small_lexicon)
    assert a.polarity == Polarity.NEGATIVE


def test_annotate_keeps_length(lexicon):
    text = normalize("Water leakage at Bhandup!! not good @rail https://t.co/x")
    tokens = tokenize(text)
    assert len(annotate(tokens, lexicon)) == len(tokens)


def test_analyze(lexicon):
    annotated = analyze("water LEAKAGE at bhandup", lexicon)
    assert [a.polarity for a in annotated] == [
        Polarity.NEUTRAL,
        Polarity.NEGATIVE,
        Polarity.NEUTRAL,
        Polarity.NEUTRAL,
    ]


# independent scan: a token is negated when a negator precedes it with no
# punctuation in between and fewer than three word tokens separating them

SYMBOLS = [
    ("good", TokenKind.WORD),
    ("dirty", TokenKind.WORD),
    ("seat", TokenKind.WORD),
    ("not", TokenKind.WORD),
    (",", TokenKind.PUNCT),
    ("12", TokenKind.NUMBER),
]


def naive_annotate(tokens, lexicon):
    out = []
    for i, token in enumerate(tokens):
        if token.kind != TokenKind.WORD:
            out.append((Polarity.NEUTRAL, False))
            continue
        negated = False
        words_between = 0
        for j in range(i - 1, -1, -1):
            prior = tokens[j]
            if prior.kind == TokenKind.PUNCT:
                break
            if prior.kind != TokenKind.WORD:
                continue
            if lexicon.is_negator(prior.norm):
                negated = words_between < 3
                break
            words_between += 1
        polarity = lexicon.polarity_of(token.norm)
        if lexicon.is_negator(token.norm):
            polarity = Polarity.NEUTRAL
        elif negated:
            polarity = {
                Polarity.POSITIVE: Polarity.NEGATIVE,
                Polarity.NEGATIVE: Polarity.NEUTRAL,
                Polarity.NEUTRAL: Polarity.NEUTRAL,
            }[polarity]
        out.append((polarity, negated))
    return out


def test_negation_window_matches_naive_scan(small_lexicon):
    checked = 0
    for length in range(0, 6):
        for combo in itertools.product(SYMBOLS, repeat=length):
            tokens = [Token(s, s, k, i) for i, (s, k) in enumerate(combo)]
            expected = naive_annotate(tokens, small_lexicon)
            got = [(a.polarity, a.negated) for a in annotate(tokens, small_lexicon)]
            assert got == expected, combo
            checked += 1
    assert checked == sum(6 ** n for n in range(6))
