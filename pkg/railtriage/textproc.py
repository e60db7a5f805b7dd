import re
import unicodedata
from typing import TYPE_CHECKING, List, Sequence, Tuple

from .constants import NEGATION_WINDOW, URL_SENTINEL, Polarity, TokenKind
from .types import AnnotatedToken, Token
from .utils import get_logger

if TYPE_CHECKING:
    from .lexicon import Lexicon  # noqa: F401

logger = get_logger(__name__)

_URL = re.compile(r"(?:\bhttps?://|\bww+\.)\S+")
_ELONGATION = re.compile(r"([^\W\d_])\1{2,}")
_WHITESPACE = re.compile(r"\s+")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})

_TOKEN = re.compile(
    r"(?P<url>" + re.escape(URL_SENTINEL) + r")"
    r"|(?P<hashtag>#\w+)"
    r"|(?P<mention>@\w+)"
    r"|(?P<group>\d+(?:[/-]\d+)+)"
    r"|(?P<alnum>\w+(?:'\w+)?)"
    r"|(?P<punct>[^\w\s]+)"
)


def _strip_marks(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def normalize(text: str) -> str:
    text = text.translate(_APOSTROPHES)
    text = _strip_marks(text.lower()).lower()
    text = _ELONGATION.sub(r"\1\1", text)
    text = _URL.sub(f" {URL_SENTINEL} ", text)
    return _WHITESPACE.sub(" ", text).strip()


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    for match in _TOKEN.finditer(text):
        group = match.lastgroup
        surface = match.group()
        if group == "url":
            kind = TokenKind.URL
        elif group == "hashtag":
            kind = TokenKind.HASHTAG
        elif group == "mention":
            kind = TokenKind.MENTION
        elif group == "group":
            kind = TokenKind.NUMBER
        elif group == "alnum":
            kind = TokenKind.NUMBER if surface.isdigit() else TokenKind.WORD
        else:
            kind = TokenKind.PUNCT
        norm = surface if kind == TokenKind.URL else _strip_marks(surface.lower())
        tokens.append(Token(surface, norm, kind, len(tokens)))
    return tokens


def flip(polarity: Polarity) -> Polarity:
    if polarity == Polarity.POSITIVE:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


def annotate(tokens: Sequence[Token], lexicon: "Lexicon") -> List[AnnotatedToken]:
    """
    Attach lexicon polarity to word tokens.  A negator opens a window over
    the next NEGATION_WINDOW word tokens; punctuation closes it, and every
    token inside it has its polarity flipped exactly once.
    """
    annotated: List[AnnotatedToken] = []
    remaining = 0
    for token in tokens:
        if token.kind == TokenKind.PUNCT:
            remaining = 0
            annotated.append(AnnotatedToken(token, Polarity.NEUTRAL, False))
            continue
        if not token.is_word:
            annotated.append(AnnotatedToken(token, Polarity.NEUTRAL, False))
            continue
        negated = remaining > 0
        if negated:
            remaining -= 1
        if lexicon.is_negator(token.key):
            polarity = Polarity.NEUTRAL
            remaining = NEGATION_WINDOW
        else:
            polarity = lexicon.polarity_of(token.key)
            if negated:
                polarity = flip(polarity)
        annotated.append(AnnotatedToken(token, polarity, negated))
    return annotated


def analyze(text: str, lexicon: "Lexicon") -> List[AnnotatedToken]:
    return annotate(tokenize(normalize(text)), lexicon)


def phrase_keys(text: str) -> Tuple[str, ...]:
    """
    Token keys of a table entry, normalized exactly like tweet text so the
    two always meet on the same form.
    """
    return tuple(t.key for t in tokenize(normalize(text)))
