from typing import Any


class TriageError(Exception):
    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args)
        self.__dict__.update(kwargs)
        self._display_keys = list(kwargs.keys())
        self._args = args

    def __str__(self) -> str:
        args = []
        if len(self._args) > 0:
            args.append(("description", f"{self._args[0]!r}"))
        for key in self._display_keys:
            args.append((key, f"{self.__dict__[key]!r}"))
        text = ", ".join([f"{k}={v}" for k, v in args])
        return f"{self.__class__.__name__}({text})"


# bugs


class InternalTriageError(TriageError):
    pass


# user errors
class UsageException(TriageError):
    pass


class BadInputException(UsageException):
    pass


class UnknownTask(UsageException):
    pass


class IllegalTransition(UsageException):
    pass


# input records


class IngestError(TriageError):
    """
    A corpus line or request body that cannot become a TweetRecord
    """


class MissingField(IngestError):
    pass


class EmptyText(IngestError):
    pass


class TextTooLong(IngestError):
    pass


class BadTimestamp(IngestError):
    pass


class MalformedLine(IngestError):
    pass


class DuplicateRecord(IngestError):
    pass


class EmptyTokenStream(TriageError):
    pass


class MissingLabel(TriageError):
    pass


# configuration tables


class ConfigError(TriageError):
    """
    Tables or lexicon files violate their format or invariants
    """


class FileUnreadable(ConfigError):
    pass


class MalformedEntry(ConfigError):
    pass


class BadExpression(ConfigError):
    pass


class LexiconError(ConfigError):
    pass


class ConflictingPolarity(LexiconError):
    pass


class EmptyLexicon(LexiconError):
    pass


class MissingPrefixLabel(LexiconError):
    pass


class UnknownCategory(ConfigError):
    pass


class EmptyRuleSet(ConfigError):
    pass


class MissingDefaultRoute(ConfigError):
    pass


class IncompleteDepartmentMap(ConfigError):
    pass


class UnknownDivision(ConfigError):
    pass


class TemplateMissing(ConfigError):
    pass


class PromptTooLong(ConfigError):
    pass


# persistence


class StoreError(TriageError):
    pass


class StoreCorrupt(StoreError):
    pass


class OutputUnwritable(TriageError):
    pass
