from enum import Enum
from typing import Tuple

# ingest

MAX_TEXT_LENGTH = 4096
REQUIRED_FIELDS = ("id", "author_handle", "created_at", "text", "target_handle")

# textproc

NEGATION_WINDOW = 3
URL_SENTINEL = "<url>"

# extract

PNR_LENGTH = 10
MOBILE_LENGTH = 10
TRAIN_NO_LENGTH = 5
MOBILE_LEADING_DIGITS = "6789"
# tokens after a context keyword that may hold the value
CONTEXT_REACH = 3
MIN_TRANSACTION_ID_LENGTH = 6
MIN_STATION_CODE_LENGTH = 3

PNR_KEYWORDS = frozenset({"pnr"})
MOBILE_KEYWORDS = frozenset({"mobile", "phone", "mob", "cell", "contact"})
TRANSACTION_KEYWORDS = frozenset({"txn", "transaction", "trxn"})
TRANSACTION_FILLERS = frozenset({"id", "no", "number", "num", "ref"})
PLATFORM_KEYWORDS = frozenset({"platform", "pf"})
PLATFORM_FILLERS = frozenset({"no", "number", "num"})
STATION_FRAME_BEFORE = "at"
STATION_FRAME_AFTER: Tuple[Tuple[str, ...], ...] = (
    ("railway", "station"),
    ("station",),
    ("rly", "stn"),
    ("stn",),
)

# complete

PROMPT_MAX_LENGTH = 280
DEFAULT_SCHEMA_ID = "default"
ALTERNATE_SCHEMA_MARK = "~"
ALL_CATEGORIES_MARK = "*"
FIELDS_PLACEHOLDER = "{fields}"
DEPARTMENT_PLACEHOLDER = "{department}"

# categorize

TRANSACTION_NUDGE = 2

# service

BATCH_LIMIT = 1000
DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8080
# in seconds
LATENCY_BUCKETS = (0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0)

# exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_IO_ERROR = 2


class TweetType(str, Enum):
    COMPLAINT = "Complaint"
    SUGGESTION = "Suggestion"
    APPRECIATION = "Appreciation"


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class TokenKind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    HASHTAG = "hashtag"
    MENTION = "mention"
    URL = "url"
    PUNCT = "punct"


WORD_KINDS = frozenset({TokenKind.WORD, TokenKind.HASHTAG})


class Trigger(str, Enum):
    PREFIX_LABEL = "prefix_label"
    SUGGESTION_CUE = "suggestion_cue"
    POLARITY_RULE = "polarity_rule"


class ComplaintCategory(str, Enum):
    DIVYANGJAN_FACILITIES = "DivyangjanFacilities"
    BED_ROLL = "BedRoll"
    STAFF_BEHAVIOR = "StaffBehavior"
    CLEANLINESS = "Cleanliness"
    PASSENGER_AMENITIES = "PassengerAmenities"
    COACH_MAINTENANCE = "CoachMaintenance"
    WATER_AVAILABILITY = "WaterAvailability"
    UNRESERVED_TICKETING = "UnreservedTicketing"
    CATERING_VENDING = "CateringVending"
    TICKETING_REFUND = "TicketingRefund"
    PUNCTUALITY = "Punctuality"
    SECURITY = "Security"
    MISCELLANEOUS = "Miscellaneous"


class CompletenessStatus(str, Enum):
    COMPLETE = "Complete"
    INCOMPLETE = "Incomplete"
    NOT_APPLICABLE = "NotApplicable"


class Confidence(str, Enum):
    RESOLVED = "resolved"
    FALLBACK = "fallback"


class RouteBasis(str, Enum):
    STATION = "station"
    TRAIN = "train"
    CATEGORY_DEFAULT = "category_default"


class TaskState(str, Enum):
    NEEDS_INFO = "NeedsInfo"
    READY = "Ready"
    DISPATCHED = "Dispatched"


LEGAL_TRANSITIONS = {
    TaskState.NEEDS_INFO: frozenset({TaskState.READY}),
    TaskState.READY: frozenset({TaskState.DISPATCHED}),
    TaskState.DISPATCHED: frozenset(),
}


class EntityField(str, Enum):
    PNR = "pnr"
    TRAIN_NO = "train_no"
    MOBILE = "mobile"
    TRANSACTION_ID = "transaction_id"
    USER_ID = "user_id"
    BOOKING_DATE = "booking_date"
    STATION = "station"
    PLATFORM = "platform"
    COACH = "coach"


class StoreEvent(str, Enum):
    CREATED = "created"
    STATE = "state"
