import datetime
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Union

from .__about__ import __version__
from .categorize import RuleSet, categorize, load_rules
from .classify import classify_type
from .complete import (
    PromptTemplates,
    SchemaSet,
    check_templates,
    load_schemas,
    load_templates,
    render_acknowledgement,
    validate_completeness,
)
from .constants import CompletenessStatus, TweetType
from .exceptions import EmptyTokenStream
from .extract import Gazetteer, extract_entities, load_gazetteer
from .lexicon import Lexicon, load_lexicon
from .route import RoutingTables, load_routes, route
from .textproc import annotate, normalize, tokenize
from .types import TriageFailure, TriageOutcome, TriageResult, TweetRecord
from .utils import combined_version, data_path, get_logger, utc_now

logger = get_logger(__name__)

Clock = Callable[[], "datetime.datetime"]
PathLike = Union[str, Path]

ENV_LEXICON_DIR = "RAILTRIAGE_LEXICON_DIR"
ENV_STATIONS = "RAILTRIAGE_STATIONS"
ENV_SCHEMAS = "RAILTRIAGE_SCHEMAS"
ENV_PROMPTS = "RAILTRIAGE_PROMPTS"
ENV_CATEGORIES = "RAILTRIAGE_CATEGORIES"
ENV_ROUTES = "RAILTRIAGE_ROUTES"
ENV_STORE = "RAILTRIAGE_STORE"


def resolve_path(flag: Optional[PathLike], env: str, default: str) -> Path:
    """
    Command-line flag, then environment variable, then the shipped table
    """
    if flag is not None:
        return Path(flag)
    from_env = os.environ.get(env)
    if from_env:
        return Path(from_env)
    return data_path(default)


@dataclass(frozen=True)
class PipelineConfig:
    lexicon: Lexicon
    gazetteer: Gazetteer
    schemas: SchemaSet
    templates: PromptTemplates
    rules: RuleSet
    routes: RoutingTables

    @property
    def pipeline_version(self) -> str:
        return combined_version(
            [
                __version__,
                self.lexicon.version,
                self.gazetteer.version,
                self.schemas.version,
                self.templates.version,
                self.rules.version,
                self.routes.version,
            ]
        )


def load_config(
    lexicon_dir: Optional[PathLike] = None,
    stations: Optional[PathLike] = None,
    schemas: Optional[PathLike] = None,
    prompts: Optional[PathLike] = None,
    categories: Optional[PathLike] = None,
    routes: Optional[PathLike] = None,
    schema_variants: Iterable[str] = (),
) -> PipelineConfig:
    """
    Load and validate every table.  Any ConfigError surfaces here, before
    a single record is processed.
    """
    lexicon = load_lexicon(resolve_path(lexicon_dir, ENV_LEXICON_DIR, "lexicon"))
    gazetteer = load_gazetteer(resolve_path(stations, ENV_STATIONS, "stations.tsv"))
    schema_set = load_schemas(resolve_path(schemas, ENV_SCHEMAS, "schemas.tsv"))
    variants = list(schema_variants)
    if variants:
        schema_set = schema_set.select(variants)
    templates = load_templates(resolve_path(prompts, ENV_PROMPTS, "prompts.tsv"))
    check_templates(schema_set, templates)
    rules = load_rules(resolve_path(categories, ENV_CATEGORIES, "categories.tsv"))
    routing = load_routes(resolve_path(routes, ENV_ROUTES, "routes"), gazetteer)
    config = PipelineConfig(lexicon, gazetteer, schema_set, templates, rules, routing)
    logger.info(
        f"loaded config stations={len(gazetteer)} categories={len(rules)} "
        f"variants={variants} pipeline_version={config.pipeline_version}"
    )
    return config


class Triager:
    """
    Runs the full pipeline over one record at a time.

    Usage:
    ```
    >>> triager = Triager(load_config())
    >>> outcome = triager.triage_one(tweet)
    ```
    """

    def __init__(self, config: PipelineConfig, clock: Optional[Clock] = None) -> None:
        self.config = config
        self.clock = clock or utc_now
        self.pipeline_version = config.pipeline_version

    def triage_one(self, tweet: TweetRecord) -> TriageOutcome:
        config = self.config
        processed_at = self.clock()
        tokens = tokenize(normalize(tweet.text))
        annotated = annotate(tokens, config.lexicon)
        try:
            decision = classify_type(annotated, config.lexicon)
        except EmptyTokenStream as e:
            logger.warning(f"tweet id={tweet.id} has no word tokens")
            return TriageFailure(
                tweet, e.__class__.__name__, str(e), self.pipeline_version, processed_at
            )
        entities = extract_entities(tokens, config.gazetteer)
        category = None
        routing = None
        department = None
        if decision.tweet_type == TweetType.COMPLAINT:
            category = categorize(tokens, entities, config.rules)
            routing = route(category.category, entities, config.routes)
            department = routing.department
        completeness = validate_completeness(
            decision.tweet_type,
            category.category if category is not None else None,
            entities,
            config.schemas,
            config.templates,
        )
        acknowledgement = render_acknowledgement(
            config.templates, decision.tweet_type, department
        )
        logger.debug(
            f"tweet id={tweet.id} type={decision.tweet_type.value} "
            f"complete={completeness.status != CompletenessStatus.INCOMPLETE}"
        )
        return TriageResult(
            tweet,
            decision,
            entities,
            category,
            completeness,
            routing,
            acknowledgement,
            self.pipeline_version,
            processed_at,
        )

    def triage_many(self, tweets: Sequence[TweetRecord]) -> List[TriageOutcome]:
        return [self.triage_one(tweet) for tweet in tweets]
