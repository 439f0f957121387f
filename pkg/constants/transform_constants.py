from enum import StrEnum


class OutcomeKind(StrEnum):
    SUCCESS = 'success'
    NULL = 'null'
    MALFORMED = 'malformed'


class SelectionKeys(StrEnum):
    INPUT = 'input'
    OUTPUT = 'output'
    IRRELEVANT = 'irrelevant'
    AMBIGUOUS = 'ambiguous'


class ExampleKeys(StrEnum):
    INPUT = 'input'
    OUTPUT = 'output'


class MalformedReason(StrEnum):
    EMPTY_INPUT = 'empty input'
    EMPTY_OUTPUT = 'empty output'
    TRANSPORT = 'transport'
    NO_JSON = 'malformed json'
    MISSING_KEYS = 'missing keys: {keys}'


class TransformMessages(StrEnum):
    EMPTY_EXPANSION = "empty expansion"
    ECHOED_EXPANSION = "expansion only repeats the instruction"
    EMPTY_PLAN = "empty plan"
    PLAN_ECHO = "Return only the plan."
    PLAN_LABEL = "Plan:"
    TOO_MANY_OUTPUTS = "at most one output column allowed, got {columns}"
    UNKNOWN_COLUMNS = "unknown columns {columns} for dataset {dataset}"
    OVERLAPPING = "column {column} is listed in more than one category"
    BAD_ENTRY = "selection field {field} must be a list of column names"
    UNUSABLE = "no relevant columns in {dataset}"
    UNPARSEABLE_SELECTION = "schema selection response for {dataset} is unusable: {error}"
    PLAN_FALLBACK = "plan for {dataset} has no numbered steps; using the whole response as one step"
    NO_DESCRIPTION = "(no description)"
