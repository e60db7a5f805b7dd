from typing import List, Sequence

from .constants import Polarity, Trigger, TweetType
from .exceptions import EmptyTokenStream
from .lexicon import Lexicon
from .types import AnnotatedToken, Evidence, TypeDecision
from .utils import get_logger

logger = get_logger(__name__)


def classify_type(annotated: Sequence[AnnotatedToken], lexicon: Lexicon) -> TypeDecision:
    """
    Decide the tweet type, first matching rule wins:

    1. the first word token is a prefix label -> that label's type
    2. any negative word -> Complaint
    3. any suggestion cue -> Suggestion
    4. any positive word -> Appreciation
    5. otherwise -> Suggestion
    """
    words = [a for a in annotated if a.token.is_word]
    if len(words) == 0:
        raise EmptyTokenStream("no word tokens to classify")

    evidence: List[Evidence] = []
    positive = negative = 0
    for a in words:
        if a.polarity == Polarity.NEGATIVE:
            negative += 1
            evidence.append((a.token.position, f"negative:{a.token.key}"))
        elif a.polarity == Polarity.POSITIVE:
            positive += 1
            evidence.append((a.token.position, f"positive:{a.token.key}"))

    def decide(tweet_type: TweetType, trigger: Trigger) -> TypeDecision:
        decision = TypeDecision(
            tweet_type=tweet_type,
            positive_count=positive,
            negative_count=negative,
            content_tokens=len(words),
            trigger=trigger,
            matched_evidence=tuple(sorted(evidence)),
        )
        logger.debug(f"decision={decision}")
        return decision

    first = words[0].token
    prefixed = lexicon.prefix_type(first.key)
    if prefixed is not None:
        evidence.append((first.position, f"prefix_label:{first.key}"))
        return decide(prefixed, Trigger.PREFIX_LABEL)
    if negative >= 1:
        return decide(TweetType.COMPLAINT, Trigger.POLARITY_RULE)
    cues = lexicon.match_cues([a.token.key for a in annotated])
    if cues:
        evidence.extend((pos, f"suggestion_cue:{cue}") for pos, cue in cues)
        return decide(TweetType.SUGGESTION, Trigger.SUGGESTION_CUE)
    if positive >= 1:
        return decide(TweetType.APPRECIATION, Trigger.POLARITY_RULE)
    return decide(TweetType.SUGGESTION, Trigger.POLARITY_RULE)
