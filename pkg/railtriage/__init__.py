from .__about__ import __description__, __title__, __version__
from .batch import triage_batch
from .constants import (  # noqa: F401
    ComplaintCategory,
    CompletenessStatus,
    TaskState,
    TweetType,
)
from .evaluate import EvalReport, evaluate
from .exceptions import (  # noqa: F401
    BadInputException,
    ConfigError,
    IngestError,
    InternalTriageError,
    TriageError,
)
from .store import TaskStore
from .triager import PipelineConfig, Triager, load_config
from .types import TriageFailure, TriageResult, TweetRecord  # noqa: F401
from .utils import get_logger

logger = get_logger(__name__)

__all__ = [
    "__description__",
    "__title__",
    "__version__",
    "ComplaintCategory",
    "CompletenessStatus",
    "TaskState",
    "TweetType",
    "EvalReport",
    "evaluate",
    "triage_batch",
    "PipelineConfig",
    "Triager",
    "load_config",
    "TaskStore",
    "TriageResult",
    "TriageFailure",
    "TweetRecord",
    "BadInputException",
    "ConfigError",
    "IngestError",
    "InternalTriageError",
    "TriageError",
]
