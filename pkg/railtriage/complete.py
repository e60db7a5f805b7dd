import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from .constants import (
    ALL_CATEGORIES_MARK,
    ALTERNATE_SCHEMA_MARK,
    DEFAULT_SCHEMA_ID,
    DEPARTMENT_PLACEHOLDER,
    FIELDS_PLACEHOLDER,
    PROMPT_MAX_LENGTH,
    ComplaintCategory,
    CompletenessStatus,
    EntityField,
    TweetType,
)
from .core import Cursor, read_table
from .exceptions import (
    BadExpression,
    BadInputException,
    MalformedEntry,
    PromptTooLong,
    TemplateMissing,
    UnknownCategory,
)
from .types import CompletenessReport, EntitySet
from .utils import combined_version, get_logger

logger = get_logger(__name__)

FIELD_NAMES = frozenset(f.value for f in EntityField)

_LEXEME = re.compile(r"\s*(?:(\()|(\))|([A-Za-z_]+))")


class Expr:
    def branches(self) -> List[Tuple[str, ...]]:
        """
        Disjunctive normal form: alternatives of field conjunctions, in the
        order they are written
        """
        raise NotImplementedError

    def fields(self) -> List[str]:
        seen: List[str] = []
        for branch in self.branches():
            for name in branch:
                if name not in seen:
                    seen.append(name)
        return seen

    def evaluate(self, populated: Set[str]) -> bool:
        return any(all(f in populated for f in b) for b in self.branches())


@dataclass(frozen=True)
class Field(Expr):
    name: str

    def branches(self) -> List[Tuple[str, ...]]:
        return [(self.name,)]

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class And(Expr):
    parts: Tuple[Expr, ...]

    def branches(self) -> List[Tuple[str, ...]]:
        out = []
        for combo in itertools.product(*(p.branches() for p in self.parts)):
            branch: List[str] = []
            for part in combo:
                branch.extend(f for f in part if f not in branch)
            out.append(tuple(branch))
        return out

    def __str__(self) -> str:
        return "(" + " AND ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Or(Expr):
    parts: Tuple[Expr, ...]

    def branches(self) -> List[Tuple[str, ...]]:
        return [b for p in self.parts for b in p.branches()]

    def __str__(self) -> str:
        return "(" + " OR ".join(str(p) for p in self.parts) + ")"


def _lex(text: str) -> List[str]:
    lexemes = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _LEXEME.match(text, position)
        if match is None:
            raise BadExpression(f"unexpected input at {position}", expression=text)
        lexemes.append(match.group(match.lastindex or 0))
        position = match.end()
    return lexemes


def parse_expression(text: str) -> Expr:
    """
    expr   := term ("OR" term)*
    term   := factor ("AND" factor)*
    factor := FIELD | "(" expr ")"
    """
    cursor: Cursor[str] = Cursor(_lex(text))

    def expr() -> Expr:
        parts = [term()]
        while (cursor.peek() or "").upper() == "OR":
            cursor.grab()
            parts.append(term())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def term() -> Expr:
        parts = [factor()]
        while (cursor.peek() or "").upper() == "AND":
            cursor.grab()
            parts.append(factor())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def factor() -> Expr:
        lexeme = cursor.peek()
        if lexeme is None:
            raise BadExpression("unexpected end", expression=text)
        cursor.grab()
        if lexeme == "(":
            inner = expr()
            if cursor.peek() != ")":
                raise BadExpression("missing ')'", expression=text)
            cursor.grab()
            return inner
        name = lexeme.lower()
        if name not in FIELD_NAMES:
            raise BadExpression(f"unknown field {lexeme!r}", expression=text)
        return Field(name)

    result = expr()
    if not cursor.at_end():
        raise BadExpression(f"trailing input {list(cursor.remaining)!r}", expression=text)
    return result


@dataclass(frozen=True)
class RequirementSchema:
    schema_id: str
    applies_to: FrozenSet[ComplaintCategory]
    required: Expr
    alternate: bool = False

    def missing(self, entities: EntitySet) -> Tuple[str, ...]:
        """
        Fields absent from the cheapest satisfying branch; the first branch
        wins ties.  Empty when satisfied.
        """
        populated = entities.populated()
        best: Optional[Tuple[str, ...]] = None
        for branch in self.required.branches():
            absent = tuple(f for f in branch if f not in populated)
            if best is None or len(absent) < len(best):
                best = absent
        return best or ()


class SchemaSet:
    def __init__(
        self, schemas: Sequence[RequirementSchema], version: str = ""
    ) -> None:
        self.schemas = list(schemas)
        self.version = version
        self._by_id = {s.schema_id: s for s in self.schemas}
        self._by_category: Dict[ComplaintCategory, RequirementSchema] = {}
        for schema in self.schemas:
            if schema.alternate:
                continue
            for category in schema.applies_to:
                if category in self._by_category:
                    raise MalformedEntry(
                        f"category {category.value} mapped by {self._by_category[category].schema_id} "
                        f"and {schema.schema_id}"
                    )
                self._by_category[category] = schema

    def __getitem__(self, schema_id: str) -> RequirementSchema:
        return self._by_id[schema_id]

    def __contains__(self, schema_id: object) -> bool:
        return schema_id in self._by_id

    @property
    def default(self) -> Optional[RequirementSchema]:
        return self._by_id.get(DEFAULT_SCHEMA_ID)

    def for_category(self, category: ComplaintCategory) -> RequirementSchema:
        schema = self._by_category.get(category) or self.default
        if schema is None:
            raise UnknownCategory(
                f"no schema for {category.value} and no default schema",
                category=category.value,
            )
        return schema

    def select(self, schema_ids: Iterable[str]) -> "SchemaSet":
        """
        Activate alternate schemas; their categories leave whatever schema
        held them before.
        """
        chosen = set(schema_ids)
        for schema_id in chosen:
            if schema_id not in self._by_id:
                raise UnknownCategory(f"unknown schema_id={schema_id}", schema_id=schema_id)
        moved: Set[ComplaintCategory] = set()
        for schema in self.schemas:
            if schema.schema_id in chosen:
                moved.update(schema.applies_to)
        schemas = []
        for schema in self.schemas:
            if schema.schema_id in chosen:
                schemas.append(
                    RequirementSchema(schema.schema_id, schema.applies_to, schema.required)
                )
            elif schema.alternate:
                schemas.append(schema)
            else:
                schemas.append(
                    RequirementSchema(
                        schema.schema_id, schema.applies_to - moved, schema.required
                    )
                )
        version = combined_version([self.version] + sorted(chosen))
        return SchemaSet(schemas, version)


def _categories(value: str, path: str, line_number: int) -> FrozenSet[ComplaintCategory]:
    if value in ("", "-", ALL_CATEGORIES_MARK):
        return frozenset()
    out = set()
    for name in value.split(","):
        try:
            out.add(ComplaintCategory(name.strip()))
        except ValueError:
            raise MalformedEntry(
                f"unknown category {name.strip()!r}", path=path, line_number=line_number
            )
    return frozenset(out)


def load_schemas(path: Union[str, Path]) -> SchemaSet:
    """
    Read schema_id<TAB>categories<TAB>expression rows.  Categories are
    comma-separated; a leading '~' marks an alternate schema that stays
    inactive until selected, '*' marks the default.
    """
    table = read_table(path, 3)
    schemas = []
    for line_number, (schema_id, categories, expression) in table.rows:
        alternate = categories.startswith(ALTERNATE_SCHEMA_MARK)
        if alternate:
            categories = categories[len(ALTERNATE_SCHEMA_MARK) :]
        try:
            required = parse_expression(expression)
        except BadExpression as e:
            raise BadExpression(
                f"{e}", path=table.path, line_number=line_number, expression=expression
            )
        schemas.append(
            RequirementSchema(
                schema_id,
                _categories(categories, table.path, line_number),
                required,
                alternate,
            )
        )
    schema_set = SchemaSet(schemas, table.version)
    if schema_set.default is None:
        raise UnknownCategory(
            f"schema file {path} has no {DEFAULT_SCHEMA_ID!r} schema", path=str(path)
        )
    return schema_set


@dataclass(frozen=True)
class PromptTemplates:
    display: Mapping[str, str]
    templates: Mapping[str, str]
    acknowledgements: Mapping[TweetType, str]
    version: str = ""

    def template_for(self, category: Optional[ComplaintCategory]) -> str:
        if category is not None and category.value in self.templates:
            return self.templates[category.value]
        return self.templates[DEFAULT_SCHEMA_ID]


TEMPLATE_PREFIX = "template:"
ACK_PREFIX = "ack:"


def load_templates(path: Union[str, Path]) -> PromptTemplates:
    """
    prompts.tsv holds three kinds of rows:

        field<TAB>display name
        template:<Category|default><TAB>text with {fields}
        ack:<TweetType><TAB>text, complaints may use {department}

    Field rows fix the order names appear in a prompt.
    """
    table = read_table(path, 2)
    display: Dict[str, str] = {}
    templates: Dict[str, str] = {}
    acks: Dict[TweetType, str] = {}
    for line_number, (key, text) in table.rows:
        if key.startswith(TEMPLATE_PREFIX):
            name = key[len(TEMPLATE_PREFIX) :]
            if name != DEFAULT_SCHEMA_ID:
                _categories(name, table.path, line_number)
            if FIELDS_PLACEHOLDER not in text:
                raise MalformedEntry(
                    f"template lacks {FIELDS_PLACEHOLDER}", path=table.path, line_number=line_number
                )
            templates[name] = text
        elif key.startswith(ACK_PREFIX):
            try:
                acks[TweetType(key[len(ACK_PREFIX) :])] = text
            except ValueError:
                raise MalformedEntry(
                    f"unknown tweet type in {key!r}", path=table.path, line_number=line_number
                )
        elif key in FIELD_NAMES:
            display[key] = text
        else:
            raise MalformedEntry(
                f"unknown prompt key {key!r}", path=table.path, line_number=line_number
            )
    if DEFAULT_SCHEMA_ID not in templates:
        raise TemplateMissing(f"no default template in {path}", field=DEFAULT_SCHEMA_ID)
    prompts = PromptTemplates(display, templates, acks, table.version)
    # the longest possible prompt uses every display name
    for name in templates:
        longest = templates[name].replace(FIELDS_PLACEHOLDER, ", ".join(display.values()))
        if len(longest) > PROMPT_MAX_LENGTH:
            raise PromptTooLong(
                f"template {name} can reach {len(longest)} characters",
                limit=PROMPT_MAX_LENGTH,
            )
    for kind, text in acks.items():
        if len(text) > PROMPT_MAX_LENGTH:
            raise PromptTooLong(f"acknowledgement {kind.value} is {len(text)} characters")
    return prompts


def check_templates(schemas: SchemaSet, templates: PromptTemplates) -> None:
    """
    Every field a schema can ask for, alternates included, needs a display
    name, so an incomplete complaint can always be prompted.
    """
    for schema in schemas.schemas:
        for name in schema.required.fields():
            if name not in templates.display:
                raise TemplateMissing(
                    f"no display name for {name!r} required by {schema.schema_id}",
                    field=name,
                    schema_id=schema.schema_id,
                )


def render_prompt(
    missing: Sequence[str],
    template_set: PromptTemplates,
    category: Optional[ComplaintCategory] = None,
) -> str:
    if len(missing) == 0:
        raise BadInputException("render_prompt needs at least one missing field")
    for name in missing:
        if name not in template_set.display:
            raise TemplateMissing(f"no display name for {name!r}", field=name)
    wanted = set(missing)
    names = [text for key, text in template_set.display.items() if key in wanted]
    prompt = template_set.template_for(category).replace(FIELDS_PLACEHOLDER, ", ".join(names))
    if len(prompt) > PROMPT_MAX_LENGTH:
        raise PromptTooLong(f"prompt is {len(prompt)} characters", limit=PROMPT_MAX_LENGTH)
    return prompt


def validate_completeness(
    tweet_type: TweetType,
    category: Optional[ComplaintCategory],
    entities: EntitySet,
    schemas: SchemaSet,
    templates: PromptTemplates,
) -> CompletenessReport:
    if tweet_type != TweetType.COMPLAINT:
        return CompletenessReport(CompletenessStatus.NOT_APPLICABLE)
    if category is None:
        raise BadInputException("complaints must be categorized before validation")
    schema = schemas.for_category(category)
    missing = schema.missing(entities)
    if len(missing) == 0:
        return CompletenessReport(CompletenessStatus.COMPLETE, schema_id=schema.schema_id)
    prompt = render_prompt(missing, templates, category)
    logger.debug(f"incomplete schema={schema.schema_id} missing={missing}")
    return CompletenessReport(
        CompletenessStatus.INCOMPLETE, missing, prompt, schema_id=schema.schema_id
    )


def render_acknowledgement(
    templates: PromptTemplates, tweet_type: TweetType, department: Optional[str] = None
) -> Optional[str]:
    text = templates.acknowledgements.get(tweet_type)
    if text is None:
        return None
    return text.replace(DEPARTMENT_PLACEHOLDER, department or "the concerned department")
